#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "casmp/analysis.hpp"
#include "casmp/coupling.hpp"
#include "casmp/energetics.hpp"
#include "casmp/materials.hpp"

namespace casmp {

/// Run configuration: material parameters, geometry grid, truncation and
/// output selection. Loaded from a JSON file, overridable by CLI flags.
/// Defaults are an aluminum sphere (hbar*omega_p = 15.80 eV, damping 0.04)
/// over sapphire (eps = 3.13), R = 50 nm.
struct RunConfig {
    double omega_p_ev = 15.80;
    double gamma_ratio = 0.04;
    double substrate_epsilon = 3.13;
    double radius_nm = 50.0;
    std::vector<double> z_list_nm;      ///< exactly one of the two lists
    std::vector<double> z_over_r_list;  ///< may be non-empty
    Truncation truncation;
    std::string format = "csv";         ///< csv | json
    std::string out_path;

    static RunConfig from_json_text(const std::string& text);
    static RunConfig from_json_file(const std::string& path);
    std::string to_json_text() const;   ///< canonical one-line echo

    DrudeMaterial sphere() const;
    SubstrateMaterial substrate() const;
    std::vector<double> z_over_r_grid() const;  ///< ascending, from either list
    void validate() const;                      ///< throws ConfigError
};

/// Logarithmic grid with `points_per_decade` points per decade, endpoints
/// included. Used by the --grid CLI flag.
std::vector<double> log_grid(double lo, double hi, int points_per_decade);

struct EnergySweepRow {
    double z_over_r;
    double energy_reduced;   ///< hbar*omega_p units
    double energy_ev;
    int l_used;
    int m_used;
    bool converged;
};

struct ForceSweepRow {
    double z_nm;
    double z_over_r;
    double force_reduced;    ///< hbar*omega_p / R units
    double force_ev_per_nm;
    double force_newton;
    std::string method;
    int l_used;
};

struct ModeRow {
    int m;
    int l_index;
    double n;
    double omega_over_omega_p;
    int weight;
};

struct ConvergeRow {
    int l_max;
    double energy_reduced;
    double rel_change;
    bool meets_tol;
};

/// Energy per grid point, converged in L up to truncation.l_max (the cap);
/// unconverged points are flagged, not fatal. Rows ascend in z/R.
std::vector<EnergySweepRow> run_energy_sweep(const RunConfig& config,
                                             Exec exec = Exec::parallel);

/// Force per grid point; `verify` cross-checks Hellmann-Feynman against the
/// finite-difference route at 1e-4 relative and throws SolverError on
/// disagreement.
std::vector<ForceSweepRow> run_force_sweep(const RunConfig& config,
                                           ForceResult::Method method,
                                           bool verify,
                                           Exec exec = Exec::parallel);

std::vector<ModeRow> run_modes(const RunConfig& config, double z_over_r,
                               Exec exec = Exec::parallel);

std::vector<ConvergeRow> run_converge(const RunConfig& config, double z_over_r,
                                      Exec exec = Exec::parallel);

/// Writers. Every output starts with a header block echoing the library
/// version and the full config, so a dataset is reproducible from the file
/// alone. Numeric formatting is locale-free and round-trip exact.
void write_energy_csv(std::ostream& os, const RunConfig& config,
                      const std::vector<EnergySweepRow>& rows);
void write_force_csv(std::ostream& os, const RunConfig& config,
                     const std::vector<ForceSweepRow>& rows);
void write_modes_csv(std::ostream& os, const RunConfig& config, double z_over_r,
                     const std::vector<ModeRow>& rows);
void write_converge_csv(std::ostream& os, const RunConfig& config, double z_over_r,
                        const std::vector<ConvergeRow>& rows);

std::string energy_rows_to_json(const RunConfig& config,
                                const std::vector<EnergySweepRow>& rows);
std::string force_rows_to_json(const RunConfig& config,
                               const std::vector<ForceSweepRow>& rows);

/// Parse a sweep CSV produced by the writers above into a curve, selecting
/// the named y column ("auto" picks the energy or force column by header).
SweepCurve read_sweep_csv(const std::string& path, const std::string& y_column = "auto");

} // namespace casmp

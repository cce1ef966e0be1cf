#include "casmp/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "casmp/errors.hpp"
#include "casmp/spectrum.hpp"
#include "casmp/version.hpp"

namespace casmp {

namespace {

using nlohmann::json;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

const char* bool_str(bool b) { return b ? "true" : "false"; }

const char* method_name(ForceResult::Method m) {
    return m == ForceResult::Method::hellmann_feynman ? "hellmann_feynman"
                                                      : "finite_difference";
}

ForceResult::Method opposite_method(ForceResult::Method m) {
    return m == ForceResult::Method::hellmann_feynman
               ? ForceResult::Method::finite_difference
               : ForceResult::Method::hellmann_feynman;
}

Truncation truncation_from_json(const json& j) {
    Truncation t;
    if (j.contains("l_max")) t.l_max = j.at("l_max").get<int>();
    if (j.contains("m_policy")) {
        const std::string policy = j.at("m_policy").get<std::string>();
        if (policy == "fixed")
            t.m_policy = Truncation::MPolicy::fixed;
        else if (policy == "adaptive")
            t.m_policy = Truncation::MPolicy::adaptive;
        else
            throw ConfigError("truncation.m_policy must be 'fixed' or 'adaptive', got '" +
                              policy + "'");
    }
    if (j.contains("m_max")) t.m_max = j.at("m_max").get<int>();
    if (j.contains("tol")) t.tol = j.at("tol").get<double>();
    return t;
}

} // namespace

RunConfig RunConfig::from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    RunConfig c;
    try {
        if (j.contains("sphere")) {
            const json& s = j.at("sphere");
            if (s.contains("omega_p_ev")) c.omega_p_ev = s.at("omega_p_ev").get<double>();
            if (s.contains("gamma_ratio")) c.gamma_ratio = s.at("gamma_ratio").get<double>();
        }
        if (j.contains("substrate") && j.at("substrate").contains("epsilon"))
            c.substrate_epsilon = j.at("substrate").at("epsilon").get<double>();
        if (j.contains("geometry")) {
            const json& g = j.at("geometry");
            if (g.contains("radius_nm")) c.radius_nm = g.at("radius_nm").get<double>();
            if (g.contains("z_list_nm"))
                c.z_list_nm = g.at("z_list_nm").get<std::vector<double>>();
            if (g.contains("z_over_r_list"))
                c.z_over_r_list = g.at("z_over_r_list").get<std::vector<double>>();
        }
        if (j.contains("truncation")) c.truncation = truncation_from_json(j.at("truncation"));
        if (j.contains("output")) {
            const json& o = j.at("output");
            if (o.contains("format")) c.format = o.at("format").get<std::string>();
            if (o.contains("path")) c.out_path = o.at("path").get<std::string>();
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config field error: ") + e.what());
    }
    c.validate();
    return c;
}

RunConfig RunConfig::from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return from_json_text(ss.str());
}

std::string RunConfig::to_json_text() const {
    json j;
    j["sphere"] = {{"omega_p_ev", omega_p_ev}, {"gamma_ratio", gamma_ratio}};
    j["substrate"] = {{"epsilon", substrate_epsilon}};
    json g;
    g["radius_nm"] = radius_nm;
    if (!z_list_nm.empty()) g["z_list_nm"] = z_list_nm;
    if (!z_over_r_list.empty()) g["z_over_r_list"] = z_over_r_list;
    j["geometry"] = g;
    j["truncation"] = {
        {"l_max", truncation.l_max},
        {"m_policy",
         truncation.m_policy == Truncation::MPolicy::fixed ? "fixed" : "adaptive"},
        {"m_max", truncation.m_max},
        {"tol", truncation.tol}};
    // The destination path is deliberately not echoed: identical runs must
    // produce byte-identical files wherever they are written.
    j["output"] = {{"format", format}};
    return j.dump();
}

DrudeMaterial RunConfig::sphere() const { return DrudeMaterial(omega_p_ev, gamma_ratio); }

SubstrateMaterial RunConfig::substrate() const {
    return SubstrateMaterial::from_epsilon(substrate_epsilon);
}

std::vector<double> RunConfig::z_over_r_grid() const {
    if (z_list_nm.empty() && z_over_r_list.empty())
        throw ConfigError("config needs exactly one of geometry.z_list_nm / "
                          "geometry.z_over_r_list (or a --grid flag)");
    std::vector<double> grid;
    if (!z_list_nm.empty()) {
        grid.reserve(z_list_nm.size());
        for (const double z : z_list_nm) grid.push_back(z / radius_nm);
    } else {
        grid = z_over_r_list;
    }
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    return grid;
}

void RunConfig::validate() const {
    if (!(omega_p_ev > 0.0)) throw ConfigError("sphere.omega_p_ev must be positive");
    if (!(gamma_ratio >= 0.0)) throw ConfigError("sphere.gamma_ratio must be >= 0");
    if (!(substrate_epsilon > 0.0)) throw ConfigError("substrate.epsilon must be positive");
    if (!(radius_nm > 0.0)) throw ConfigError("geometry.radius_nm must be positive");
    if (!z_list_nm.empty() && !z_over_r_list.empty())
        throw ConfigError("config must set at most one of geometry.z_list_nm / "
                          "geometry.z_over_r_list");
    for (const double z : z_list_nm)
        if (!(z > 0.0)) throw ConfigError("geometry.z_list_nm values must be positive");
    for (const double q : z_over_r_list)
        if (!(q > 0.0)) throw ConfigError("geometry.z_over_r_list values must be positive");
    if (truncation.l_max < 1) throw ConfigError("truncation.l_max must be >= 1");
    if (truncation.m_policy == Truncation::MPolicy::fixed && truncation.m_max >= 0 &&
        (truncation.m_max < 1 || truncation.m_max > truncation.l_max))
        throw ConfigError("truncation.m_max must satisfy 1 <= m_max <= l_max");
    if (!(truncation.tol >= 0.0)) throw ConfigError("truncation.tol must be >= 0");
    if (format != "csv" && format != "json")
        throw ConfigError("output.format must be 'csv' or 'json', got '" + format + "'");
}

std::vector<double> log_grid(double lo, double hi, int points_per_decade) {
    if (!(lo > 0.0 && hi > lo))
        throw ConfigError("grid: need 0 < lo < hi");
    if (points_per_decade < 1)
        throw ConfigError("grid: points_per_decade must be >= 1");
    const double decades = std::log10(hi / lo);
    const int n = std::max(2, static_cast<int>(std::ceil(decades * points_per_decade)) + 1);
    std::vector<double> grid(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        grid[static_cast<std::size_t>(i)] =
            lo * std::pow(10.0, decades * i / static_cast<double>(n - 1));
    grid.front() = lo;
    grid.back() = hi;
    return grid;
}

std::vector<EnergySweepRow> run_energy_sweep(const RunConfig& config, Exec exec) {
    config.validate();
    const std::vector<double> grid = config.z_over_r_grid();
    const DrudeMaterial sphere = config.sphere();
    const SubstrateMaterial substrate = config.substrate();

    std::vector<EnergySweepRow> rows(grid.size());
    // Points are independent; each evaluation parallelizes over its blocks.
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const Geometry geom = Geometry::from_ratio(grid[i], config.radius_nm);
        const EnergyResult r =
            converge_in_l(geom, sphere, substrate, config.truncation.tol,
                          config.truncation.l_max, config.truncation.m_policy,
                          config.truncation.m_max, exec);
        rows[i] = EnergySweepRow{grid[i],          r.energy, r.energy_ev(sphere),
                                 r.l_used,         r.m_used, r.converged};
    }
    return rows;
}

std::vector<ForceSweepRow> run_force_sweep(const RunConfig& config,
                                           ForceResult::Method method, bool verify,
                                           Exec exec) {
    config.validate();
    const std::vector<double> grid = config.z_over_r_grid();
    const DrudeMaterial sphere = config.sphere();
    const SubstrateMaterial substrate = config.substrate();

    std::vector<ForceSweepRow> rows(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const Geometry geom = Geometry::from_ratio(grid[i], config.radius_nm);
        const EnergyResult conv =
            converge_in_l(geom, sphere, substrate, config.truncation.tol,
                          config.truncation.l_max, config.truncation.m_policy,
                          config.truncation.m_max, exec);
        Truncation t = config.truncation;
        t.l_max = conv.l_used;
        const ForceResult f = force(geom, sphere, substrate, t, method, exec);
        if (verify) {
            const ForceResult other =
                force(geom, sphere, substrate, t, opposite_method(method), exec);
            const double scale = std::max(std::abs(f.force), std::abs(other.force));
            if (scale > 0.0 && std::abs(f.force - other.force) > 1e-4 * scale)
                throw SolverError(
                    "force cross-check failed at z/R = " + fmt(grid[i]) +
                    ": hellmann_feynman vs finite_difference differ by more than 1e-4 (" +
                    fmt(f.force) + " vs " + fmt(other.force) + ")");
        }
        rows[i] = ForceSweepRow{grid[i] * config.radius_nm,
                                grid[i],
                                f.force,
                                f.force_ev_per_nm(sphere, config.radius_nm),
                                f.force_ev_per_nm(sphere, config.radius_nm) *
                                    ev_per_nm_in_newton,
                                method_name(method),
                                f.l_used};
    }
    return rows;
}

std::vector<ModeRow> run_modes(const RunConfig& config, double z_over_r, Exec exec) {
    config.validate();
    const Geometry geom = Geometry::from_ratio(z_over_r, config.radius_nm);
    const SubstrateMaterial substrate = config.substrate();
    const auto blocks = build_all_blocks(geom, substrate.f_c, config.truncation, exec);
    const ModeSpectrum spectrum = modes_from_blocks(blocks, config.sphere(), exec);

    std::vector<ModeRow> rows;
    for (const BlockModes& b : spectrum.blocks)
        for (const ModeEntry& mode : b.modes)
            rows.push_back(ModeRow{b.m, mode.l_label, mode.n, mode.omega_reduced,
                                   mode.weight});
    return rows;
}

std::vector<ConvergeRow> run_converge(const RunConfig& config, double z_over_r,
                                      Exec exec) {
    config.validate();
    const Geometry geom = Geometry::from_ratio(z_over_r, config.radius_nm);
    const auto steps =
        convergence_table(geom, config.sphere(), config.substrate(),
                          config.truncation.tol, config.truncation.l_max,
                          config.truncation.m_policy, config.truncation.m_max, exec);
    std::vector<ConvergeRow> rows;
    rows.reserve(steps.size());
    for (const ConvergenceStep& s : steps)
        rows.push_back(ConvergeRow{s.l_max, s.energy, s.rel_change, s.meets_tol});
    return rows;
}

namespace {

void write_header(std::ostream& os, const RunConfig& config) {
    os << "# casmp " << version << "\n";
    os << "# config " << config.to_json_text() << "\n";
}

} // namespace

void write_energy_csv(std::ostream& os, const RunConfig& config,
                      const std::vector<EnergySweepRow>& rows) {
    write_header(os, config);
    os << "z_over_R,energy_hbar_omega_p,energy_eV,L_used,m_used,converged\n";
    for (const EnergySweepRow& r : rows)
        os << fmt(r.z_over_r) << ',' << fmt(r.energy_reduced) << ',' << fmt(r.energy_ev)
           << ',' << r.l_used << ',' << r.m_used << ',' << bool_str(r.converged) << '\n';
}

void write_force_csv(std::ostream& os, const RunConfig& config,
                     const std::vector<ForceSweepRow>& rows) {
    write_header(os, config);
    os << "z_nm,z_over_R,force_hbar_omega_p_per_R,force_eV_per_nm,force_N,method,L_used\n";
    for (const ForceSweepRow& r : rows)
        os << fmt(r.z_nm) << ',' << fmt(r.z_over_r) << ',' << fmt(r.force_reduced) << ','
           << fmt(r.force_ev_per_nm) << ',' << fmt(r.force_newton) << ',' << r.method
           << ',' << r.l_used << '\n';
}

void write_modes_csv(std::ostream& os, const RunConfig& config, double z_over_r,
                     const std::vector<ModeRow>& rows) {
    write_header(os, config);
    os << "# z_over_R " << fmt(z_over_r) << "\n";
    os << "m,l_index,n,omega_over_omega_p,weight\n";
    for (const ModeRow& r : rows)
        os << r.m << ',' << r.l_index << ',' << fmt(r.n) << ','
           << fmt(r.omega_over_omega_p) << ',' << r.weight << '\n';
}

void write_converge_csv(std::ostream& os, const RunConfig& config, double z_over_r,
                        const std::vector<ConvergeRow>& rows) {
    write_header(os, config);
    os << "# z_over_R " << fmt(z_over_r) << "\n";
    os << "L,energy_hbar_omega_p,rel_change,meets_tol\n";
    for (const ConvergeRow& r : rows)
        os << r.l_max << ',' << fmt(r.energy_reduced) << ',' << fmt(r.rel_change) << ','
           << bool_str(r.meets_tol) << '\n';
}

namespace {

json config_json(const RunConfig& config) { return json::parse(config.to_json_text()); }

} // namespace

std::string energy_rows_to_json(const RunConfig& config,
                                const std::vector<EnergySweepRow>& rows) {
    json j;
    j["tool"] = "casmp";
    j["version"] = version;
    j["type"] = "energy_sweep";
    j["config"] = config_json(config);
    json arr = json::array();
    for (const EnergySweepRow& r : rows) {
        arr.push_back({{"z_over_R", r.z_over_r},
                       {"energy_hbar_omega_p", r.energy_reduced},
                       {"energy_eV", r.energy_ev},
                       {"L_used", r.l_used},
                       {"m_used", r.m_used},
                       {"converged", r.converged}});
    }
    j["rows"] = arr;
    return j.dump(2) + "\n";
}

std::string force_rows_to_json(const RunConfig& config,
                               const std::vector<ForceSweepRow>& rows) {
    json j;
    j["tool"] = "casmp";
    j["version"] = version;
    j["type"] = "force_sweep";
    j["config"] = config_json(config);
    json arr = json::array();
    for (const ForceSweepRow& r : rows) {
        arr.push_back({{"z_nm", r.z_nm},
                       {"z_over_R", r.z_over_r},
                       {"force_hbar_omega_p_per_R", r.force_reduced},
                       {"force_eV_per_nm", r.force_ev_per_nm},
                       {"force_N", r.force_newton},
                       {"method", r.method},
                       {"L_used", r.l_used}});
    }
    j["rows"] = arr;
    return j.dump(2) + "\n";
}

SweepCurve read_sweep_csv(const std::string& path, const std::string& y_column) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open sweep file: " + path);

    std::string line;
    std::vector<std::string> header;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) header.push_back(cell);
        break;
    }
    if (header.empty()) throw ConfigError("sweep file has no header: " + path);

    auto col_index = [&header](const std::string& name) {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name) return static_cast<int>(i);
        return -1;
    };
    const int x_col = col_index("z_over_R");
    if (x_col < 0) throw ConfigError("sweep file lacks a z_over_R column: " + path);
    int y_col = -1;
    if (y_column == "auto") {
        y_col = col_index("energy_hbar_omega_p");
        if (y_col < 0) y_col = col_index("force_hbar_omega_p_per_R");
    } else {
        y_col = col_index(y_column);
    }
    if (y_col < 0)
        throw ConfigError("sweep file lacks the requested y column ('" + y_column +
                          "'): " + path);
    const int l_col = col_index("L_used");
    const int m_col = col_index("m_used");
    const int conv_col = col_index("converged");

    SweepCurve curve;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> cells;
        std::istringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (static_cast<int>(cells.size()) <= std::max(x_col, y_col))
            throw ConfigError("sweep file row has too few columns: " + path);
        SweepPoint p;
        p.x = std::stod(cells[static_cast<std::size_t>(x_col)]);
        p.y = std::stod(cells[static_cast<std::size_t>(y_col)]);
        if (l_col >= 0 && l_col < static_cast<int>(cells.size()))
            p.l_used = std::stoi(cells[static_cast<std::size_t>(l_col)]);
        if (m_col >= 0 && m_col < static_cast<int>(cells.size()))
            p.m_used = std::stoi(cells[static_cast<std::size_t>(m_col)]);
        if (conv_col >= 0 && conv_col < static_cast<int>(cells.size()))
            p.converged = cells[static_cast<std::size_t>(conv_col)] == "true";
        curve.points.push_back(p);
    }
    curve.validate();
    return curve;
}

} // namespace casmp

#pragma once

#include <cstdint>
#include <vector>

#include "casmp/coupling.hpp"
#include "casmp/materials.hpp"

namespace casmp {

/// Interaction energy of the sphere-substrate system in hbar*omega_p units:
/// half the weighted sum of mode-frequency shifts against the isolated
/// sphere at matched truncation.
struct EnergyResult {
    double energy = 0.0;   ///< hbar*omega_p units; negative for f_c < 0
    int l_used = 0;
    int m_used = 0;
    bool converged = false;            ///< |E(L) - E(L/2)| <= tol |E(L)|
    std::int64_t overdamped_count = 0;

    double energy_ev(const DrudeMaterial& m) const { return energy * m.omega_p_ev; }
};

/// Force F = -dE/dz in hbar*omega_p per R units (negative = attraction).
struct ForceResult {
    enum class Method { hellmann_feynman, finite_difference };

    double force = 0.0;    ///< hbar*omega_p / R units
    Method method = Method::hellmann_feynman;
    int l_used = 0;
    int m_used = 0;
    bool converged = false;
    std::int64_t overdamped_count = 0;

    /// Physical conversions: eV/nm needs the radius, newtons follow from it.
    double force_ev_per_nm(const DrudeMaterial& m, double radius_nm) const {
        return force * m.omega_p_ev / radius_nm;
    }
};

/// Single-truncation energy evaluation (no convergence assessment); the
/// building block for everything below. Deterministic and bitwise
/// independent of the execution policy.
struct RawEnergy {
    double energy = 0.0;
    int m_used = 0;
    std::int64_t overdamped_count = 0;
};
RawEnergy energy_at(const Geometry& geometry, const DrudeMaterial& sphere,
                    double f_c, int l_max, const Truncation& truncation,
                    Exec exec = Exec::parallel);

/// Interaction energy at the requested truncation. The convergence flag
/// compares against the half-truncation energy at the same tolerance;
/// l_max = 1 is reported unconverged unless the coupling vanishes.
EnergyResult interaction_energy(const Geometry& geometry, const DrudeMaterial& sphere,
                                const SubstrateMaterial& substrate,
                                const Truncation& truncation,
                                Exec exec = Exec::parallel);

/// Dipole-only truncation (l_max = 1, all m).
EnergyResult dipole_energy(const Geometry& geometry, const DrudeMaterial& sphere,
                           const SubstrateMaterial& substrate,
                           Exec exec = Exec::parallel);

/// Up-to-quadrupole truncation (l_max = 2, all m).
EnergyResult quadrupole_energy(const Geometry& geometry, const DrudeMaterial& sphere,
                               const SubstrateMaterial& substrate,
                               Exec exec = Exec::parallel);

/// Force via the Hellmann-Feynman route (one diagonalization with vectors,
/// F = -(1/2) sum w dn/dxi / (2 sqrt(n - c)) * dxi/dz) or via a central
/// finite difference of the energy with relative step 1e-4 in z.
ForceResult force(const Geometry& geometry, const DrudeMaterial& sphere,
                  const SubstrateMaterial& substrate, const Truncation& truncation,
                  ForceResult::Method method = ForceResult::Method::hellmann_feynman,
                  Exec exec = Exec::parallel);

/// One row of a truncation-doubling study.
struct ConvergenceStep {
    int l_max;
    double energy;
    double rel_change;   ///< |E(L) - E(L/2)| / |E(L)|; NaN for the first step
    bool meets_tol;
};

/// Energies along the doubling ladder L = 1, 2, 4, ... up to l_cap,
/// stopping once the relative change meets `tol`. `m_max` applies to the
/// fixed policy only (-1 = all m).
std::vector<ConvergenceStep> convergence_table(const Geometry& geometry,
                                               const DrudeMaterial& sphere,
                                               const SubstrateMaterial& substrate,
                                               double tol, int l_cap,
                                               Truncation::MPolicy m_policy,
                                               int m_max = -1,
                                               Exec exec = Exec::parallel);

/// Smallest doubling truncation meeting `tol`, or the capped result with
/// converged = false.
EnergyResult converge_in_l(const Geometry& geometry, const DrudeMaterial& sphere,
                           const SubstrateMaterial& substrate, double tol,
                           int l_cap = 4096,
                           Truncation::MPolicy m_policy = Truncation::MPolicy::adaptive,
                           int m_max = -1,
                           Exec exec = Exec::parallel);

} // namespace casmp

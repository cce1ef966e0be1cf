#include "casmp/energetics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "casmp/eigensolve.hpp"
#include "detail/block_energy.hpp"
#include "detail/run_blocks.hpp"

namespace casmp {

namespace detail {

BlockEnergyTerm block_energy_term(const MBlock& block, double gamma_ratio) {
    const EigenResult eig = eig_sym(block, false);
    const int w = block.weight();

    BlockEnergyTerm term;
    std::vector<double> diffs(static_cast<std::size_t>(block.dim));
    for (int i = 0; i < block.dim; ++i) {
        bool od_mode = false;
        bool od_ref = false;
        const double omega = mode_omega_reduced(eig.eigenvalues[i], gamma_ratio, od_mode);
        const double omega_ref = mode_omega_reduced(n0(block.l_of(i)), gamma_ratio, od_ref);
        diffs[static_cast<std::size_t>(i)] = omega - omega_ref;
        if (od_mode) term.overdamped += w;
    }
    // Accumulate in ascending |shift| to tame cancellation between the two
    // divergent sums; ties break on value so the order is total.
    std::sort(diffs.begin(), diffs.end(), [](double x, double y) {
        const double ax = std::abs(x);
        const double ay = std::abs(y);
        if (ax != ay) return ax < ay;
        return x < y;
    });
    double sum = 0.0;
    for (const double dv : diffs) sum += dv;
    term.energy = 0.5 * w * sum;
    return term;
}

} // namespace detail

namespace {

struct EnergyPiece {
    detail::BlockEnergyTerm term;
    int m = 0;
};

RawEnergy reduce_energy(const std::vector<EnergyPiece>& pieces) {
    RawEnergy raw;
    for (const EnergyPiece& p : pieces) {
        raw.energy += p.term.energy;
        raw.overdamped_count += p.term.overdamped;
        raw.m_used = p.m;
    }
    return raw;
}

struct ForcePiece {
    double de_dxi = 0.0;       ///< block contribution to dE/dxi
    double energy0 = 0.0;      ///< energy contribution (adaptive stop rule)
    std::int64_t overdamped = 0;
    int m = 0;
};

ForcePiece block_force_piece(const MBlock& block, double gamma_ratio) {
    ForcePiece piece;
    piece.m = block.m;
    const EigenResult eig = eig_sym(block, true);
    const std::vector<double> dn = eigen_derivative(block, eig);
    const int w = block.weight();
    const double c = 0.25 * gamma_ratio * gamma_ratio;

    std::vector<double> terms;
    terms.reserve(static_cast<std::size_t>(block.dim));
    double energy_sum = 0.0;
    for (int i = 0; i < block.dim; ++i) {
        bool od = false;
        bool od_ref = false;
        const double omega = mode_omega_reduced(eig.eigenvalues[i], gamma_ratio, od);
        const double omega_ref = mode_omega_reduced(n0(block.l_of(i)), gamma_ratio, od_ref);
        energy_sum += omega - omega_ref;
        if (od) {
            // Mode pinned at zero frequency: no derivative contribution.
            piece.overdamped += w;
            continue;
        }
        terms.push_back(dn[static_cast<std::size_t>(i)] /
                        (2.0 * std::sqrt(eig.eigenvalues[i] - c)));
    }
    std::sort(terms.begin(), terms.end(), [](double x, double y) {
        const double ax = std::abs(x);
        const double ay = std::abs(y);
        if (ax != ay) return ax < ay;
        return x < y;
    });
    double sum = 0.0;
    for (const double t : terms) sum += t;
    piece.de_dxi = 0.5 * w * sum;
    piece.energy0 = 0.5 * w * energy_sum;
    return piece;
}

} // namespace

RawEnergy energy_at(const Geometry& geometry, const DrudeMaterial& sphere,
                    double f_c, int l_max, const Truncation& truncation,
                    Exec exec) {
    Truncation local = truncation;
    local.l_max = l_max;
    local.validate();
    auto pieces = detail::run_blocks<EnergyPiece>(
        l_max, local, exec,
        [&](int m) {
            EnergyPiece p;
            p.m = m;
            p.term = detail::block_energy_term(build_block(m, geometry, f_c, l_max),
                                               sphere.gamma_ratio);
            return p;
        },
        [](const EnergyPiece& p) { return p.term.energy; });
    return reduce_energy(pieces);
}

EnergyResult interaction_energy(const Geometry& geometry, const DrudeMaterial& sphere,
                                const SubstrateMaterial& substrate,
                                const Truncation& truncation, Exec exec) {
    truncation.validate();
    const RawEnergy full =
        energy_at(geometry, sphere, substrate.f_c, truncation.l_max, truncation, exec);

    EnergyResult result;
    result.energy = full.energy;
    result.l_used = truncation.l_max;
    result.m_used = full.m_used;
    result.overdamped_count = full.overdamped_count;
    if (substrate.f_c == 0.0) {
        result.converged = true;
    } else if (truncation.l_max >= 2) {
        const RawEnergy half = energy_at(geometry, sphere, substrate.f_c,
                                         truncation.l_max / 2, truncation, exec);
        result.converged = std::abs(result.energy - half.energy) <=
                           truncation.tol * std::abs(result.energy);
    }
    return result;
}

EnergyResult dipole_energy(const Geometry& geometry, const DrudeMaterial& sphere,
                           const SubstrateMaterial& substrate, Exec exec) {
    Truncation t;
    t.l_max = 1;
    t.m_policy = Truncation::MPolicy::fixed;
    t.m_max = -1;
    return interaction_energy(geometry, sphere, substrate, t, exec);
}

EnergyResult quadrupole_energy(const Geometry& geometry, const DrudeMaterial& sphere,
                               const SubstrateMaterial& substrate, Exec exec) {
    Truncation t;
    t.l_max = 2;
    t.m_policy = Truncation::MPolicy::fixed;
    t.m_max = -1;
    return interaction_energy(geometry, sphere, substrate, t, exec);
}

namespace {

struct RawForce {
    double force = 0.0;
    int m_used = 0;
    std::int64_t overdamped = 0;
};

RawForce force_hf_at(const Geometry& geometry, const DrudeMaterial& sphere, double f_c,
                     int l_max, const Truncation& truncation, Exec exec) {
    Truncation local = truncation;
    local.l_max = l_max;
    auto pieces = detail::run_blocks<ForcePiece>(
        l_max, local, exec,
        [&](int m) { return block_force_piece(build_block(m, geometry, f_c, l_max),
                                              sphere.gamma_ratio); },
        [](const ForcePiece& p) { return p.energy0; });

    double de_dxi = 0.0;
    RawForce raw;
    for (const ForcePiece& p : pieces) {
        de_dxi += p.de_dxi;
        raw.overdamped += p.overdamped;
        raw.m_used = p.m;
    }
    // F = -dE/d(z/R) with dxi/d(z/R) = -2 xi^2.
    raw.force = 2.0 * geometry.xi * geometry.xi * de_dxi;
    return raw;
}

RawForce force_fd_at(const Geometry& geometry, const DrudeMaterial& sphere, double f_c,
                     int l_max, const Truncation& truncation, Exec exec) {
    constexpr double kRelStep = 1e-4;
    // Resolve the adaptive m range once at the center point, then evaluate
    // both displaced energies at that fixed range.
    const RawEnergy center = energy_at(geometry, sphere, f_c, l_max, truncation, exec);
    Truncation fixed = truncation;
    fixed.m_policy = Truncation::MPolicy::fixed;
    fixed.m_max = center.m_used;

    const double x = geometry.z_over_r;
    const Geometry up = Geometry::from_ratio(x * (1.0 + kRelStep), geometry.radius_nm);
    const Geometry dn = Geometry::from_ratio(x * (1.0 - kRelStep), geometry.radius_nm);
    const RawEnergy eu = energy_at(up, sphere, f_c, l_max, fixed, exec);
    const RawEnergy ed = energy_at(dn, sphere, f_c, l_max, fixed, exec);

    RawForce raw;
    raw.force = -(eu.energy - ed.energy) / (2.0 * x * kRelStep);
    raw.m_used = center.m_used;
    raw.overdamped = center.overdamped_count;
    return raw;
}

RawForce force_at(const Geometry& g, const DrudeMaterial& s, double f_c, int l_max,
                  const Truncation& t, ForceResult::Method method, Exec exec) {
    return method == ForceResult::Method::hellmann_feynman
               ? force_hf_at(g, s, f_c, l_max, t, exec)
               : force_fd_at(g, s, f_c, l_max, t, exec);
}

} // namespace

ForceResult force(const Geometry& geometry, const DrudeMaterial& sphere,
                  const SubstrateMaterial& substrate, const Truncation& truncation,
                  ForceResult::Method method, Exec exec) {
    truncation.validate();
    const RawForce full =
        force_at(geometry, sphere, substrate.f_c, truncation.l_max, truncation, method, exec);

    ForceResult result;
    result.force = full.force;
    result.method = method;
    result.l_used = truncation.l_max;
    result.m_used = full.m_used;
    result.overdamped_count = full.overdamped;
    if (substrate.f_c == 0.0) {
        result.converged = true;
    } else if (truncation.l_max >= 2) {
        const RawForce half = force_at(geometry, sphere, substrate.f_c,
                                       truncation.l_max / 2, truncation, method, exec);
        result.converged = std::abs(result.force - half.force) <=
                           truncation.tol * std::abs(result.force);
    }
    return result;
}

namespace {

struct Ladder {
    std::vector<ConvergenceStep> steps;
    RawEnergy final_raw;
};

Ladder doubling_ladder(const Geometry& geometry, const DrudeMaterial& sphere,
                       double f_c, double tol, int l_cap,
                       Truncation::MPolicy m_policy, int m_max, Exec exec) {
    if (!(tol >= 0.0)) throw std::domain_error("converge_in_l: tol must be >= 0");
    if (l_cap < 1) throw std::domain_error("converge_in_l: l_cap must be >= 1");

    Truncation t;
    t.m_policy = m_policy;
    t.m_max = m_max;
    t.tol = tol > 0.0 ? tol : 1e-12;  // adaptive stop rule needs a scale

    Ladder ladder;
    double prev = 0.0;
    for (int l = 1; l <= l_cap; l *= 2) {
        Truncation step_t = t;
        if (step_t.m_policy == Truncation::MPolicy::fixed && step_t.m_max >= 0)
            step_t.m_max = std::min(step_t.m_max, l);
        const RawEnergy raw = energy_at(geometry, sphere, f_c, l, step_t, exec);
        ConvergenceStep step;
        step.l_max = l;
        step.energy = raw.energy;
        if (ladder.steps.empty()) {
            step.rel_change = std::numeric_limits<double>::quiet_NaN();
            step.meets_tol = false;
        } else if (raw.energy == 0.0 && prev == 0.0) {
            step.rel_change = 0.0;
            step.meets_tol = true;
        } else {
            step.rel_change = std::abs(raw.energy - prev) / std::abs(raw.energy);
            step.meets_tol = step.rel_change <= tol;
        }
        ladder.steps.push_back(step);
        ladder.final_raw = raw;
        prev = raw.energy;
        if (step.meets_tol) break;
    }
    return ladder;
}

} // namespace

std::vector<ConvergenceStep> convergence_table(const Geometry& geometry,
                                               const DrudeMaterial& sphere,
                                               const SubstrateMaterial& substrate,
                                               double tol, int l_cap,
                                               Truncation::MPolicy m_policy, int m_max,
                                               Exec exec) {
    return doubling_ladder(geometry, sphere, substrate.f_c, tol, l_cap, m_policy, m_max,
                           exec)
        .steps;
}

EnergyResult converge_in_l(const Geometry& geometry, const DrudeMaterial& sphere,
                           const SubstrateMaterial& substrate, double tol, int l_cap,
                           Truncation::MPolicy m_policy, int m_max, Exec exec) {
    const Ladder ladder = doubling_ladder(geometry, sphere, substrate.f_c, tol, l_cap,
                                          m_policy, m_max, exec);
    const ConvergenceStep& last = ladder.steps.back();

    EnergyResult result;
    result.energy = last.energy;
    result.l_used = last.l_max;
    result.m_used = ladder.final_raw.m_used;
    result.converged = last.meets_tol;
    result.overdamped_count = ladder.final_raw.overdamped_count;
    return result;
}

} // namespace casmp

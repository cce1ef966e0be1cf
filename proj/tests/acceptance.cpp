// Acceptance suite: one pass/fail line per criterion, with the measured
// values printed next to the target. Returns the number of failed criteria.

#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "casmp/analysis.hpp"
#include "casmp/eigensolve.hpp"
#include "casmp/energetics.hpp"
#include "casmp/sweep.hpp"
#include "casmp/version.hpp"

using namespace casmp;

namespace {

const DrudeMaterial kAl(15.80, 0.04);
const DrudeMaterial kAlUndamped(15.80, 0.0);
const SubstrateMaterial kSapphire = SubstrateMaterial::from_epsilon(3.13);
// Rounded contrast for the hand-evaluable closed-form checks.
const SubstrateMaterial kSapphireRounded{3.13, -0.516};

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

Truncation fixed_trunc(int l_max, double tol = 1e-6) {
    Truncation t;
    t.l_max = l_max;
    t.m_policy = Truncation::MPolicy::fixed;
    t.m_max = -1;
    t.tol = tol;
    return t;
}

SweepCurve energy_curve(const std::vector<double>& grid, int l_max,
                        const DrudeMaterial& mat, const SubstrateMaterial& sub) {
    SweepCurve curve;
    for (const double x : grid) {
        const Geometry g = Geometry::from_ratio(x);
        const EnergyResult e = interaction_energy(g, mat, sub, fixed_trunc(l_max));
        curve.points.push_back(SweepPoint{x, e.energy, e.l_used, e.m_used, true});
    }
    return curve;
}

// 1. Dipole power law: slope of |E(L=1)| vs z/R on [8, 50] within -3.00 +/- 0.05.
Outcome criterion_dipole_slope() {
    const SweepCurve curve = energy_curve(log_grid(8.0, 50.0, 20), 1, kAl, kSapphire);
    const SlopeFit fit = fit_slope(curve, 8.0, 50.0);
    Outcome o;
    o.pass = std::abs(fit.exponent - (-3.0)) <= 0.05;
    o.detail = "slope " + num(fit.exponent) + " (target -3.00 +/- 0.05)";
    return o;
}

// 2. Quadrupole regimes: -3.0 +/- 0.1 on [8,50], -4.0 +/- 0.2 on [2.5,6],
//    -5.0 +/- 0.3 on [0.3,1.5].
Outcome criterion_quadrupole_regimes() {
    struct Window {
        double lo, hi, target, tol;
    };
    const Window windows[] = {{8.0, 50.0, -3.0, 0.1},
                              {2.5, 6.0, -4.0, 0.2},
                              {0.3, 1.5, -5.0, 0.3}};
    Outcome o;
    o.pass = true;
    for (const Window& w : windows) {
        const SweepCurve curve = energy_curve(log_grid(w.lo, w.hi, 20), 2, kAl, kSapphire);
        const SlopeFit fit = fit_slope(curve, w.lo, w.hi);
        const bool ok = std::abs(fit.exponent - w.target) <= w.tol;
        o.pass = o.pass && ok;
        o.detail += "[" + num(w.lo) + "," + num(w.hi) + "] slope " + num(fit.exponent) +
                    " (target " + num(w.target) + " +/- " + num(w.tol) + ") ";
    }
    return o;
}

// 3. Dipolar validity: |E_full/E_dipole - 1| <= 5% for z/R >= 10, full
//    solution converged at tol = 1e-6.
Outcome criterion_dipole_validity() {
    Outcome o;
    o.pass = true;
    for (const double x : {10.0, 20.0, 50.0}) {
        const Geometry g = Geometry::from_ratio(x);
        const EnergyResult full = converge_in_l(g, kAl, kSapphire, 1e-6, 512);
        const EnergyResult dip = dipole_energy(g, kAl, kSapphire);
        const double dev = std::abs(full.energy / dip.energy - 1.0);
        const bool ok = full.converged && dev <= 0.05;
        o.pass = o.pass && ok;
        o.detail += "z/R=" + num(x) + ": " + num(100.0 * dev) + "% ";
    }
    o.detail += "(target <= 5%, converged)";
    return o;
}

// 4. Enhancement: E_full/E_dipole >= 100 at z/R = 0.01 (tol 1e-4, L <= 512),
//    ratio monotone increasing as z/R decreases over [0.01, 1].
Outcome criterion_enhancement() {
    SweepCurve ratio;
    bool all_converged = true;
    for (const double x : log_grid(0.01, 1.0, 4)) {
        const Geometry g = Geometry::from_ratio(x);
        const EnergyResult full = converge_in_l(g, kAl, kSapphire, 1e-4, 512);
        const EnergyResult dip = dipole_energy(g, kAl, kSapphire);
        all_converged = all_converged && full.converged;
        ratio.points.push_back(
            SweepPoint{x, std::abs(full.energy / dip.energy), full.l_used, 0, true});
    }
    const bool monotone = monotone_nonincreasing(ratio);
    const double at_001 = ratio.points.front().y;
    Outcome o;
    o.pass = at_001 >= 100.0 && monotone && all_converged;
    o.detail = "ratio(0.01) = " + num(at_001) + " (target >= 100), monotone " +
               (monotone ? "yes" : "no") + ", converged " + (all_converged ? "yes" : "no");
    return o;
}

// 5. Radius ratio: |F(R=100)| / |F(R=10)| at z = 50 nm within [5, 20].
Outcome criterion_radius_ratio() {
    auto physical_force = [](double radius_nm) {
        const Geometry g = Geometry::from_radius_gap(radius_nm, 50.0);
        const EnergyResult conv = converge_in_l(g, kAl, kSapphire, 1e-6, 128);
        const ForceResult f = force(g, kAl, kSapphire, fixed_trunc(conv.l_used));
        return std::abs(f.force_ev_per_nm(kAl, radius_nm));
    };
    const double ratio = physical_force(100.0) / physical_force(10.0);
    Outcome o;
    o.pass = ratio >= 5.0 && ratio <= 20.0;
    o.detail = "|F(100nm)|/|F(10nm)| = " + num(ratio) + " (target in [5, 20])";
    return o;
}

// 6. Scale invariance: reduced energies equal at (z,R) and (2z,2R) to 1e-12
//    relative; physical forces scale exactly as 1/R.
Outcome criterion_scale_invariance() {
    Outcome o;
    o.pass = true;
    const double pairs[][2] = {{10.0, 100.0}, {3.7, 50.0}, {0.8, 25.0}};
    double worst_e = 0.0;
    double worst_f = 0.0;
    for (const auto& p : pairs) {
        const Geometry a = Geometry::from_radius_gap(p[1], p[0]);
        const Geometry b = Geometry::from_radius_gap(2.0 * p[1], 2.0 * p[0]);
        const EnergyResult ea = interaction_energy(a, kAl, kSapphire, fixed_trunc(16));
        const EnergyResult eb = interaction_energy(b, kAl, kSapphire, fixed_trunc(16));
        worst_e = std::max(worst_e, std::abs(ea.energy - eb.energy) / std::abs(ea.energy));

        const ForceResult fa = force(a, kAl, kSapphire, fixed_trunc(16));
        const ForceResult fb = force(b, kAl, kSapphire, fixed_trunc(16));
        // Reduced forces (per R) must match; physical ones differ by 1/2.
        const double scaled = fb.force_ev_per_nm(kAl, b.radius_nm) * 2.0;
        worst_f = std::max(worst_f, std::abs(fa.force - fb.force) / std::abs(fa.force));
        worst_f = std::max(worst_f, std::abs(fa.force_ev_per_nm(kAl, a.radius_nm) - scaled) /
                                        std::abs(scaled));
    }
    o.pass = worst_e <= 1e-12 && worst_f <= 1e-12;
    o.detail = "max energy dev " + num(worst_e) + ", max force dev " + num(worst_f) +
               " (target <= 1e-12)";
    return o;
}

// 7. Hellmann-Feynman vs finite difference <= 1e-4 relative on 50 random
//    (xi, L <= 64) cases.
Outcome criterion_force_paths() {
    std::mt19937 rng(20260810);
    std::uniform_real_distribution<double> xi_dist(0.05, 0.49);
    std::uniform_int_distribution<int> l_dist(2, 64);
    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        const double xi = xi_dist(rng);
        const int l_max = l_dist(rng);
        const Geometry g = Geometry::from_ratio(1.0 / (2.0 * xi) - 1.0);
        const ForceResult hf =
            force(g, kAl, kSapphire, fixed_trunc(l_max), ForceResult::Method::hellmann_feynman);
        const ForceResult fd =
            force(g, kAl, kSapphire, fixed_trunc(l_max), ForceResult::Method::finite_difference);
        worst = std::max(worst, std::abs(hf.force - fd.force) /
                                    std::max(std::abs(hf.force), std::abs(fd.force)));
    }
    Outcome o;
    o.pass = worst <= 1e-4;
    o.detail = "worst relative gap " + num(worst) + " over 50 cases (target <= 1e-4)";
    return o;
}

// 8. Dipole closed form: E(L=1, xi=0.25, f_c=-0.516, gamma=0) = -4.67e-3
//    within 0.5%.
Outcome criterion_dipole_closed_form() {
    const Geometry g = Geometry::from_ratio(1.0);  // xi = 0.25
    const EnergyResult e = dipole_energy(g, kAlUndamped, kSapphireRounded);
    const double dev = std::abs(e.energy - (-4.67e-3)) / 4.67e-3;
    Outcome o;
    o.pass = dev <= 0.005;
    o.detail = "E = " + num(e.energy) + " (target -4.67e-3 +/- 0.5%)";
    return o;
}

// 9. Coupling oracle: K(1,1,0)/K(1,1,1) exactly 2; small-xi dipole energy
//    matches first-order perturbation theory to 1% at xi = 0.01.
Outcome criterion_coupling_oracle() {
    const double ratio = coupling_coeff(1, 1, 0) / coupling_coeff(1, 1, 1);
    const double xi = 0.01;
    const Geometry g = Geometry::from_ratio(1.0 / (2.0 * xi) - 1.0);
    const EnergyResult e = dipole_energy(g, kAlUndamped, kSapphireRounded);
    const double pert =
        0.5 * (std::sqrt(3.0) / 2.0) * (4.0 / 3.0) * (-0.516) * xi * xi * xi;
    const double dev = std::abs(e.energy / pert - 1.0);
    Outcome o;
    o.pass = ratio == 2.0 && dev <= 0.01;
    o.detail = "K ratio = " + num(ratio) + " (exact 2), perturbation dev " +
               num(100.0 * dev) + "% (target <= 1%)";
    return o;
}

// 10. Eigensolver contracts on random symmetric matrices up to 500x500:
//     residual <= 1e-10 ||H||_F, trace preserved to 1e-10 relative.
Outcome criterion_eigen_contracts() {
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    double worst_resid = 0.0;
    double worst_trace = 0.0;
    for (const int n : {50, 200, 500}) {
        MBlock b;
        b.dim = n;
        b.l_min = 1;
        b.h_packed.resize(static_cast<std::size_t>(n) * (n + 1) / 2);
        b.dh_packed.assign(b.h_packed.size(), 0.0);
        for (double& v : b.h_packed) v = dist(rng);

        const EigenResult r = eig_sym(b, true);
        double frob = 0.0;
        double trace = 0.0;
        double sum = 0.0;
        for (int i = 0; i < n; ++i) {
            trace += b.h(i, i);
            sum += r.eigenvalues[static_cast<std::size_t>(i)];
            for (int j = 0; j < n; ++j) frob += b.h(i, j) * b.h(i, j);
        }
        frob = std::sqrt(frob);
        worst_resid = std::max(worst_resid, r.residual_bound / (1e-10 * frob));
        worst_trace =
            std::max(worst_trace, std::abs(trace - sum) / (1e-10 * std::abs(trace)));
    }
    Outcome o;
    o.pass = worst_resid <= 1.0 && worst_trace <= 1.0;
    o.detail = "residual at " + num(100.0 * worst_resid) + "% of bound, trace at " +
               num(100.0 * worst_trace) + "% of bound";
    return o;
}

// 11. Convergence protocol at z/R = 0.005: the 256->512 delta must be at
//     most a quarter of the 64->128 delta.
Outcome criterion_convergence_protocol() {
    const Geometry g = Geometry::from_ratio(0.005);
    Truncation t;
    t.m_policy = Truncation::MPolicy::adaptive;
    t.tol = 1e-4;
    double e[4] = {};
    const int ls[4] = {64, 128, 256, 512};
    for (int i = 0; i < 4; ++i)
        e[i] = energy_at(g, kAl, kSapphire.f_c, ls[i], t).energy;
    const double d1 = std::abs(e[1] - e[0]);
    const double d2 = std::abs(e[3] - e[2]);
    Outcome o;
    o.pass = d2 <= d1 / 4.0;
    o.detail = "delta(64->128) = " + num(d1) + ", delta(256->512) = " + num(d2) +
               ", ratio " + num(d2 / d1) + " (target <= 0.25)";
    return o;
}

} // namespace

int main() {
    struct Criterion {
        const char* name;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria = {
        {"dipole power law on z/R in [8,50]", criterion_dipole_slope},
        {"quadrupole power-law regimes", criterion_quadrupole_regimes},
        {"dipolar validity for z/R >= 10", criterion_dipole_validity},
        {"multipolar enhancement at z/R = 0.01", criterion_enhancement},
        {"radius ratio of forces at z = 50 nm", criterion_radius_ratio},
        {"scale invariance in z/R", criterion_scale_invariance},
        {"force-path agreement (HF vs FD)", criterion_force_paths},
        {"dipole closed-form energy at xi = 0.25", criterion_dipole_closed_form},
        {"coupling-coefficient oracle", criterion_coupling_oracle},
        {"eigensolver residual and trace contracts", criterion_eigen_contracts},
        {"truncation deltas shrink at z/R = 0.005", criterion_convergence_protocol},
    };

    std::printf("casmp %s acceptance suite\n", version);
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].run();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        if (!o.pass) ++failures;
        std::printf("[%s] %2zu. %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1,
                    criteria[i].name, o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
                criteria.size());
    return failures;
}

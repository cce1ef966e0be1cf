// Timing harness comparing the serial reference kernels against the OpenMP
// ones, and checking that both produce bitwise-identical results.

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include "casmp/energetics.hpp"
#include "casmp/exec.hpp"

using namespace casmp;

namespace {

double ms_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                     t0)
        .count();
}

template <class Fn>
double best_of(int reps, Fn&& fn) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        fn();
        best = std::min(best, ms_since(t0));
    }
    return best;
}

} // namespace

int main(int argc, char** argv) {
    int l_hi = 256;
    if (argc > 1) l_hi = std::atoi(argv[1]);

    const DrudeMaterial al(15.80, 0.04);
    const SubstrateMaterial sapphire = SubstrateMaterial::from_epsilon(3.13);
    const Geometry geom = Geometry::from_ratio(0.02);
    Truncation t;
    t.m_policy = Truncation::MPolicy::adaptive;
    t.tol = 1e-6;

    std::printf("casmp kernel benchmark (threads: %d, z/R = %.3g)\n",
                hardware_threads(), geom.z_over_r);
    std::printf("%-22s %6s %12s %12s %9s %10s\n", "kernel", "L", "serial[ms]",
                "openmp[ms]", "speedup", "identical");

    for (int l = 64; l <= l_hi; l *= 2) {
        RawEnergy rs{};
        RawEnergy rp{};
        const double ts =
            best_of(2, [&] { rs = energy_at(geom, al, sapphire.f_c, l, t, Exec::serial); });
        const double tp =
            best_of(2, [&] { rp = energy_at(geom, al, sapphire.f_c, l, t, Exec::parallel); });
        const bool same = rs.energy == rp.energy && rs.m_used == rp.m_used;
        std::printf("%-22s %6d %12.1f %12.1f %8.2fx %10s\n", "energy (eig per m)", l,
                    ts, tp, ts / tp, same ? "yes" : "NO");
    }

    {
        const int l = std::min(64, l_hi);
        Truncation tf = t;
        ForceResult fs{};
        ForceResult fp{};
        tf.l_max = l;
        const double ts = best_of(2, [&] {
            fs = force(geom, al, sapphire, tf, ForceResult::Method::hellmann_feynman,
                       Exec::serial);
        });
        const double tp = best_of(2, [&] {
            fp = force(geom, al, sapphire, tf, ForceResult::Method::hellmann_feynman,
                       Exec::parallel);
        });
        const bool same = fs.force == fp.force;
        std::printf("%-22s %6d %12.1f %12.1f %8.2fx %10s\n", "force (vectors + HF)", l,
                    ts, tp, ts / tp, same ? "yes" : "NO");
    }
    return 0;
}

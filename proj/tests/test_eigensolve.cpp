#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

#include "casmp/eigensolve.hpp"
#include "casmp/errors.hpp"
#include "casmp/materials.hpp"

using namespace casmp;

namespace {

MBlock block_from_dense(const std::vector<double>& dense, int n,
                        const std::vector<double>& ddense = {}) {
    MBlock b;
    b.m = 0;
    b.l_min = 1;
    b.dim = n;
    b.xi = 0.1;
    b.f_c = -0.5;
    b.h_packed.resize(static_cast<std::size_t>(n) * (n + 1) / 2);
    b.dh_packed.assign(b.h_packed.size(), 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j <= i; ++j) {
            b.h_packed[MBlock::idx(i, j)] = dense[static_cast<std::size_t>(i) * n + j];
            if (!ddense.empty())
                b.dh_packed[MBlock::idx(i, j)] = ddense[static_cast<std::size_t>(i) * n + j];
        }
    return b;
}

MBlock random_symmetric(int n, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<double> dense(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j <= i; ++j) {
            const double v = dist(rng);
            dense[static_cast<std::size_t>(i) * n + j] = v;
            dense[static_cast<std::size_t>(j) * n + i] = v;
        }
    return block_from_dense(dense, n);
}

double frob(const MBlock& b) {
    double s = 0.0;
    for (int i = 0; i < b.dim; ++i)
        for (int j = 0; j < b.dim; ++j) s += b.h(i, j) * b.h(i, j);
    return std::sqrt(s);
}

// Independent residual oracle: ||H v_i - lambda_i v_i||_2.
double max_residual(const MBlock& b, const EigenResult& r) {
    double worst = 0.0;
    for (int i = 0; i < b.dim; ++i) {
        double norm2 = 0.0;
        for (int row = 0; row < b.dim; ++row) {
            double acc = 0.0;
            for (int k = 0; k < b.dim; ++k) acc += b.h(row, k) * r.vec(i, k);
            acc -= r.eigenvalues[static_cast<std::size_t>(i)] * r.vec(i, row);
            norm2 += acc * acc;
        }
        worst = std::max(worst, std::sqrt(norm2));
    }
    return worst;
}

} // namespace

TEST_CASE("diagonal and 2x2 closed forms") {
    const MBlock diag = block_from_dense({1.0 / 3.0, 0.0, 0.0, 0.4}, 2);
    const EigenResult r = eig_sym(diag, false);
    CHECK(r.eigenvalues[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(r.eigenvalues[1] == doctest::Approx(0.4).epsilon(1e-15));

    // [[a, b], [b, a]] has eigenvalues a -/+ b.
    const MBlock coupled = block_from_dense({0.4, 0.1, 0.1, 0.4}, 2);
    const EigenResult rc = eig_sym(coupled, true);
    CHECK(rc.eigenvalues[0] == doctest::Approx(0.3).epsilon(1e-14));
    CHECK(rc.eigenvalues[1] == doctest::Approx(0.5).epsilon(1e-14));
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(rc.vec(0, 0) * inv_sqrt2 - rc.vec(0, 1) * inv_sqrt2) ==
          doctest::Approx(1.0).epsilon(1e-12));

    const MBlock one = block_from_dense({0.7}, 1);
    CHECK(eig_sym(one, false).eigenvalues[0] == 0.7);
}

TEST_CASE("random symmetric matrices: residual, orthonormality, trace, order") {
    for (const unsigned seed : {1u, 2u, 3u}) {
        const MBlock b = random_symmetric(50, seed);
        const EigenResult r = eig_sym(b, true);

        CHECK(max_residual(b, r) <= 1e-10 * frob(b));
        CHECK(r.residual_bound <= 1e-10 * frob(b));

        for (int i = 0; i < b.dim; ++i)
            for (int j = 0; j <= i; ++j) {
                double dot = 0.0;
                for (int k = 0; k < b.dim; ++k) dot += r.vec(i, k) * r.vec(j, k);
                CHECK(std::abs(dot - (i == j ? 1.0 : 0.0)) <= 1e-10);
            }

        double trace = 0.0;
        double sum = 0.0;
        for (int i = 0; i < b.dim; ++i) {
            trace += b.h(i, i);
            sum += r.eigenvalues[static_cast<std::size_t>(i)];
        }
        CHECK(std::abs(trace - sum) <= 1e-10 * std::max(1.0, std::abs(trace)));

        for (int i = 1; i < b.dim; ++i)
            CHECK(r.eigenvalues[static_cast<std::size_t>(i)] >=
                  r.eigenvalues[static_cast<std::size_t>(i - 1)]);
    }
}

TEST_CASE("identical input gives identical output") {
    const MBlock b = random_symmetric(40, 11u);
    const EigenResult r1 = eig_sym(b, true);
    const EigenResult r2 = eig_sym(b, true);
    CHECK(r1.eigenvalues == r2.eigenvalues);
    CHECK(r1.eigenvectors == r2.eigenvectors);
}

TEST_CASE("eigenvalue continuity in xi") {
    const Geometry g1 = Geometry::from_ratio(1.0);
    const double xi2 = g1.xi + 1e-6;
    const Geometry g2 = Geometry::from_ratio(1.0 / (2.0 * xi2) - 1.0);
    const MBlock b1 = build_block(0, g1, -0.516, 20);
    const MBlock b2 = build_block(0, g2, -0.516, 20);
    const EigenResult r1 = eig_sym(b1, false);
    const EigenResult r2 = eig_sym(b2, false);

    double diff_norm = 0.0;
    for (std::size_t p = 0; p < b1.h_packed.size(); ++p) {
        const double d = b2.h_packed[p] - b1.h_packed[p];
        diff_norm += 2.0 * d * d;  // over-counts the diagonal: fine for a bound
    }
    diff_norm = std::sqrt(diff_norm);
    for (int i = 0; i < b1.dim; ++i)
        CHECK(std::abs(r2.eigenvalues[static_cast<std::size_t>(i)] -
                       r1.eigenvalues[static_cast<std::size_t>(i)]) <=
              diff_norm + 1e-14);
}

TEST_CASE("attractive coupling softens the lowest m=0 mode") {
    const Geometry g = Geometry::from_ratio(1.0);
    const MBlock b = build_block(0, g, -0.516, 8);
    const EigenResult r = eig_sym(b, false);
    CHECK(r.eigenvalues[0] < n0(1));
}

TEST_CASE("Hellmann-Feynman derivatives") {
    // Scalar case: H = n0(1) + f_c K xi^3, dn/dxi = 3 f_c K xi^2.
    const Geometry g = Geometry::from_ratio(1.0 / (2.0 * 0.3) - 1.0);
    const MBlock b1 = build_block(0, g, -0.5, 1);
    const EigenResult r1 = eig_sym(b1, true);
    const auto d1 = eigen_derivative(b1, r1);
    CHECK(d1[0] == doctest::Approx(-0.5 * (2.0 / 3.0) * 3.0 * 0.09).epsilon(1e-12));

    // f_c = 0: H is constant in xi.
    const MBlock b0 = build_block(0, g, 0.0, 6);
    const auto d0 = eigen_derivative(b0, eig_sym(b0, true));
    for (const double v : d0) CHECK(v == 0.0);
}

TEST_CASE("derivatives match finite differences of the spectra") {
    std::mt19937 rng(31);
    std::uniform_real_distribution<double> xi_dist(0.1, 0.45);
    for (int trial = 0; trial < 8; ++trial) {
        const double xi = xi_dist(rng);
        std::uniform_int_distribution<int> m_dist(0, 3);
        const int m = m_dist(rng);
        const Geometry g = Geometry::from_ratio(1.0 / (2.0 * xi) - 1.0);
        const int l_max = std::max(10, m + 9);  // keep dim = 10
        const MBlock b = build_block(m, g, -0.516, m <= 1 ? 10 : l_max);

        const auto hf = eigen_derivative(b, eig_sym(b, true));

        const double h = 1e-5;
        const Geometry gp = Geometry::from_ratio(1.0 / (2.0 * (g.xi + h)) - 1.0);
        const Geometry gm = Geometry::from_ratio(1.0 / (2.0 * (g.xi - h)) - 1.0);
        const EigenResult rp = eig_sym(build_block(m, gp, -0.516, b.l_min + b.dim - 1), false);
        const EigenResult rm = eig_sym(build_block(m, gm, -0.516, b.l_min + b.dim - 1), false);
        for (int i = 0; i < b.dim; ++i) {
            const double fd = (rp.eigenvalues[static_cast<std::size_t>(i)] -
                               rm.eigenvalues[static_cast<std::size_t>(i)]) /
                              (gp.xi - gm.xi);
            // The additive floor is the finite-difference roundoff level
            // (eps * |lambda| / step), which dominates for tiny derivatives.
            CHECK(std::abs(fd - hf[static_cast<std::size_t>(i)]) <=
                  1e-6 * std::abs(hf[static_cast<std::size_t>(i)]) + 5e-11);
        }
    }
}

TEST_CASE("degenerate pairs fall back to finite differences") {
    // H = I has a fully degenerate spectrum; dH swaps the basis, so the
    // sorted eigenvalues of I + t dH are 1 -/+ t: derivatives {-1, +1}.
    const MBlock b = block_from_dense({1.0, 0.0, 0.0, 1.0}, 2, {0.0, 1.0, 1.0, 0.0});
    const auto d = eigen_derivative(b, eig_sym(b, true));
    CHECK(d[0] == doctest::Approx(-1.0).epsilon(1e-6));
    CHECK(d[1] == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("error paths") {
    MBlock bad = random_symmetric(3, 5u);
    bad.h_packed[2] = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(eig_sym(bad, false), std::invalid_argument);

    const MBlock ok = random_symmetric(3, 6u);
    const EigenResult no_vec = eig_sym(ok, false);
    CHECK_THROWS_AS(eigen_derivative(ok, no_vec), std::invalid_argument);
}

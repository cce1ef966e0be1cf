#include "casmp/eigensolve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "casmp/errors.hpp"

namespace casmp {

namespace {

// Householder reduction of a full symmetric matrix (row-major, n x n) to
// tridiagonal form: diagonal d, sub-diagonal e (e[0] unused). When
// `vectors` is set, the accumulated orthogonal transformation replaces `a`.
// The matrix is kept fully symmetric during the reduction so the hot
// dot-product loop runs over contiguous rows.
void householder_tridiag(std::vector<double>& a, int n, std::vector<double>& d,
                         std::vector<double>& e, bool vectors) {
    auto A = [&a, n](int i, int j) -> double& {
        return a[static_cast<std::size_t>(i) * n + j];
    };
    std::vector<double> hs(static_cast<std::size_t>(n), 0.0);

    for (int i = n - 1; i >= 1; --i) {
        const int l = i - 1;
        double h = 0.0;
        if (l > 0) {
            double scale = 0.0;
            for (int k = 0; k <= l; ++k) scale += std::abs(A(i, k));
            if (scale == 0.0) {
                e[i] = A(i, l);
            } else {
                for (int k = 0; k <= l; ++k) {
                    A(i, k) /= scale;
                    h += A(i, k) * A(i, k);
                }
                double f = A(i, l);
                const double g = f >= 0.0 ? -std::sqrt(h) : std::sqrt(h);
                e[i] = scale * g;
                h -= f * g;
                A(i, l) = f - g;

                // e[0..l] <- q = (A u)/h - (u.(A u)/(2h^2)) u
                f = 0.0;
                for (int j = 0; j <= l; ++j) {
                    if (vectors) A(j, i) = A(i, j) / h;
                    double g2 = 0.0;
                    const double* row_j = &a[static_cast<std::size_t>(j) * n];
                    const double* row_i = &a[static_cast<std::size_t>(i) * n];
                    for (int k = 0; k <= l; ++k) g2 += row_j[k] * row_i[k];
                    e[j] = g2 / h;
                    f += e[j] * A(i, j);
                }
                const double hh = f / (h + h);
                for (int j = 0; j <= l; ++j) e[j] -= hh * A(i, j);

                // rank-2 update A <- A - u q^T - q u^T on rows/cols 0..l
                for (int j = 0; j <= l; ++j) {
                    const double fj = A(i, j);
                    const double gj = e[j];
                    for (int k = 0; k <= j; ++k) {
                        const double delta = fj * e[k] + gj * A(i, k);
                        A(j, k) -= delta;
                        if (k != j) A(k, j) -= delta;
                    }
                }
            }
        } else {
            e[i] = A(i, l);
        }
        hs[i] = h;
    }
    e[0] = 0.0;

    if (!vectors) {
        for (int i = 0; i < n; ++i) d[i] = A(i, i);
        return;
    }
    // Accumulate the transformation: Q = P_1 P_2 ... P_{n-1}.
    hs[0] = 0.0;
    for (int i = 0; i < n; ++i) {
        if (hs[i] != 0.0) {
            for (int j = 0; j < i; ++j) {
                double g = 0.0;
                for (int k = 0; k < i; ++k) g += A(i, k) * A(k, j);
                for (int k = 0; k < i; ++k) A(k, j) -= g * A(k, i);
            }
        }
        d[i] = A(i, i);
        A(i, i) = 1.0;
        for (int j = 0; j < i; ++j) {
            A(j, i) = 0.0;
            A(i, j) = 0.0;
        }
    }
}

// Implicit-shift QL iteration on the tridiagonal (d, e). On entry e[0] is
// unused; on exit d holds the eigenvalues (unsorted). When z is non-null
// its columns are rotated along, turning Q into the eigenvector matrix.
void ql_implicit(std::vector<double>& d, std::vector<double>& e, int n,
                 std::vector<double>* z) {
    constexpr int kMaxIter = 50;
    const double eps = std::numeric_limits<double>::epsilon();

    for (int i = 1; i < n; ++i) e[i - 1] = e[i];
    e[n - 1] = 0.0;

    for (int l = 0; l < n; ++l) {
        int iter = 0;
        int m;
        do {
            for (m = l; m < n - 1; ++m) {
                const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= eps * dd) break;
            }
            if (m != l) {
                if (iter++ == kMaxIter)
                    throw SolverError(
                        "eig_sym: QL iteration failed to converge at index " +
                        std::to_string(l) + " of " + std::to_string(n) +
                        " (off-diagonal " + std::to_string(e[l]) + ")");
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = std::hypot(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
                double s = 1.0;
                double c = 1.0;
                double p = 0.0;
                bool underflow = false;
                for (int i = m - 1; i >= l; --i) {
                    double f = s * e[i];
                    const double b = c * e[i];
                    r = std::hypot(f, g);
                    e[i + 1] = r;
                    if (r == 0.0) {
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        underflow = true;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                    if (z) {
                        double* zv = z->data();
                        for (int k = 0; k < n; ++k) {
                            const std::size_t base = static_cast<std::size_t>(k) * n;
                            const double z0 = zv[base + i];
                            const double z1 = zv[base + i + 1];
                            zv[base + i + 1] = s * z0 + c * z1;
                            zv[base + i] = c * z0 - s * z1;
                        }
                    }
                }
                if (underflow) continue;
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }
}

double frobenius_norm(const MBlock& block) {
    double sum = 0.0;
    for (int i = 0; i < block.dim; ++i) {
        for (int j = 0; j < i; ++j) {
            const double v = block.h(i, j);
            sum += 2.0 * v * v;
        }
        const double dgn = block.h(i, i);
        sum += dgn * dgn;
    }
    return std::sqrt(sum);
}

} // namespace

EigenResult eig_sym(const MBlock& block, bool want_vectors) {
    const int n = block.dim;
    if (n <= 0) throw std::invalid_argument("eig_sym: empty block");
    for (const double v : block.h_packed)
        if (!std::isfinite(v))
            throw std::invalid_argument("eig_sym: non-finite matrix entry");

    std::vector<double> a(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            a[static_cast<std::size_t>(i) * n + j] = block.h(i, j);

    std::vector<double> d(static_cast<std::size_t>(n), 0.0);
    std::vector<double> e(static_cast<std::size_t>(n), 0.0);
    householder_tridiag(a, n, d, e, want_vectors);
    ql_implicit(d, e, n, want_vectors ? &a : nullptr);

    // Deterministic ascending order (ties keep lower original index).
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&d](int x, int y) {
        if (d[x] != d[y]) return d[x] < d[y];
        return x < y;
    });

    EigenResult result;
    result.dim = n;
    result.eigenvalues.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) result.eigenvalues[i] = d[order[i]];

    if (want_vectors) {
        result.eigenvectors.resize(static_cast<std::size_t>(n) * n);
        for (int i = 0; i < n; ++i) {
            const int col = order[i];
            double* v = &result.eigenvectors[static_cast<std::size_t>(i) * n];
            for (int k = 0; k < n; ++k) v[k] = a[static_cast<std::size_t>(k) * n + col];
            // Sign convention: largest-magnitude component positive.
            int arg = 0;
            double best = std::abs(v[0]);
            for (int k = 1; k < n; ++k) {
                const double mag = std::abs(v[k]);
                if (mag > best) {
                    best = mag;
                    arg = k;
                }
            }
            if (v[arg] < 0.0)
                for (int k = 0; k < n; ++k) v[k] = -v[k];
        }
        // Measured residual bound max_i ||H v_i - lambda_i v_i||.
        double worst = 0.0;
        for (int i = 0; i < n; ++i) {
            const double* v = &result.eigenvectors[static_cast<std::size_t>(i) * n];
            double norm2 = 0.0;
            for (int r = 0; r < n; ++r) {
                double acc = 0.0;
                for (int k = 0; k < n; ++k) acc += block.h(r, k) * v[k];
                acc -= result.eigenvalues[i] * v[r];
                norm2 += acc * acc;
            }
            worst = std::max(worst, std::sqrt(norm2));
        }
        result.residual_bound = worst;
    } else {
        result.residual_bound =
            n * std::numeric_limits<double>::epsilon() * frobenius_norm(block);
    }
    return result;
}

std::vector<double> eigen_derivative(const MBlock& block, const EigenResult& result) {
    if (!result.has_vectors())
        throw std::invalid_argument("eigen_derivative: eigenvectors required");
    const int n = block.dim;
    if (result.dim != n)
        throw std::invalid_argument("eigen_derivative: result does not match block");

    constexpr double kDegenerateGap = 1e-12;
    std::vector<double> deriv(static_cast<std::size_t>(n), 0.0);
    std::vector<bool> degenerate(static_cast<std::size_t>(n), false);
    for (int i = 0; i + 1 < n; ++i) {
        if (result.eigenvalues[i + 1] - result.eigenvalues[i] < kDegenerateGap) {
            degenerate[i] = true;
            degenerate[i + 1] = true;
        }
    }

    for (int i = 0; i < n; ++i) {
        if (degenerate[i]) continue;
        const double* v = &result.eigenvectors[static_cast<std::size_t>(i) * n];
        double acc = 0.0;
        for (int r = 0; r < n; ++r) {
            double row = 0.0;
            for (int k = 0; k < n; ++k) row += block.dh(r, k) * v[k];
            acc += v[r] * row;
        }
        deriv[i] = acc;
    }

    if (std::find(degenerate.begin(), degenerate.end(), true) != degenerate.end()) {
        // Hellmann-Feynman is ill-defined inside a degenerate cluster; use a
        // one-sided difference of the sorted spectra instead. (A centered
        // difference would straddle the level-crossing kink and cancel.)
        double dh_max = 0.0;
        for (const double v : block.dh_packed) dh_max = std::max(dh_max, std::abs(v));
        const double h = 1e-6 / std::max(1.0, dh_max);
        MBlock plus = block;
        for (std::size_t p = 0; p < block.h_packed.size(); ++p)
            plus.h_packed[p] += h * block.dh_packed[p];
        const EigenResult ep = eig_sym(plus, false);
        for (int i = 0; i < n; ++i)
            if (degenerate[i])
                deriv[i] = (ep.eigenvalues[i] - result.eigenvalues[i]) / h;
    }
    return deriv;
}

} // namespace casmp

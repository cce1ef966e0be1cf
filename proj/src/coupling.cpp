#include "casmp/coupling.hpp"

#include <cmath>
#include <mutex>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "casmp/materials.hpp"

namespace casmp {

namespace {

// log k! table; sized for l_max up to 4096 (arguments reach 2*l_max).
// Fixed size so concurrent readers never observe growth.
constexpr int kLogFactTableSize = 2 * 4096 + 2;
std::vector<double> g_logfact;
std::once_flag g_logfact_once;

void init_logfact() {
    g_logfact.resize(kLogFactTableSize);
    g_logfact[0] = 0.0;
    for (int k = 1; k < kLogFactTableSize; ++k)
        g_logfact[k] = g_logfact[k - 1] + std::log(static_cast<double>(k));
}

inline double logfact(int k) {
    if (k < kLogFactTableSize) return g_logfact[k];
    return std::lgamma(static_cast<double>(k) + 1.0);
}

// Exact double factorials up to 170! (overflow boundary).
double fact_exact(int k) {
    double f = 1.0;
    for (int i = 2; i <= k; ++i) f *= static_cast<double>(i);
    return f;
}

void check_coupling_args(int l, int lp, int m) {
    if (m < 0)
        throw std::domain_error("coupling_coeff: m must be >= 0");
    const int l_min = std::max(1, m);
    if (l < l_min || lp < l_min)
        throw std::domain_error("coupling_coeff: l and l' must be >= max(1, m); got l=" +
                                std::to_string(l) + " l'=" + std::to_string(lp) +
                                " m=" + std::to_string(m));
}

} // namespace

double coupling_coeff_log(int l, int lp, int m) {
    check_coupling_args(l, lp, m);
    if (l < lp) std::swap(l, lp);  // fixed evaluation order keeps K bitwise symmetric
    std::call_once(g_logfact_once, init_logfact);
    const double dl = l, dlp = lp;
    return 0.5 * (std::log(dl) + std::log(dlp) -
                  std::log(2.0 * dl + 1.0) - std::log(2.0 * dlp + 1.0)) +
           logfact(l + lp) -
           0.5 * (logfact(l + m) + logfact(l - m) + logfact(lp + m) + logfact(lp - m));
}

double coupling_coeff(int l, int lp, int m) {
    check_coupling_args(l, lp, m);
    if (l < lp) std::swap(l, lp);
    // Exact-factorial route where it cannot overflow; keeps small-order
    // ratios like K(1,1,0)/K(1,1,1) = 2 exact.
    if (l + lp <= 170) {
        const double pref =
            std::sqrt(static_cast<double>(l) * lp / ((2.0 * l + 1.0) * (2.0 * lp + 1.0)));
        double r = fact_exact(l + lp);
        if (l + m <= 57 && lp + m <= 57) {
            r /= std::sqrt(fact_exact(l + m) * fact_exact(l - m) *
                           fact_exact(lp + m) * fact_exact(lp - m));
        } else {
            r /= std::sqrt(fact_exact(l + m));
            r /= std::sqrt(fact_exact(l - m));
            r /= std::sqrt(fact_exact(lp + m));
            r /= std::sqrt(fact_exact(lp - m));
        }
        return pref * r;
    }
    return std::exp(coupling_coeff_log(l, lp, m));
}

Geometry Geometry::from_radius_gap(double radius_nm, double gap_nm) {
    if (!(radius_nm > 0.0))
        throw std::domain_error("Geometry: radius must be positive");
    if (!(gap_nm > 0.0))
        throw std::domain_error("Geometry: gap must be positive");
    Geometry g;
    g.radius_nm = radius_nm;
    g.gap_nm = gap_nm;
    g.z_over_r = gap_nm / radius_nm;
    g.xi = 1.0 / (2.0 * (1.0 + g.z_over_r));
    return g;
}

Geometry Geometry::from_ratio(double z_over_r, double radius_nm) {
    if (!(z_over_r > 0.0))
        throw std::domain_error("Geometry: z/R must be positive");
    if (!(radius_nm > 0.0))
        throw std::domain_error("Geometry: radius must be positive");
    Geometry g;
    g.radius_nm = radius_nm;
    g.gap_nm = z_over_r * radius_nm;
    g.z_over_r = z_over_r;
    g.xi = 1.0 / (2.0 * (1.0 + z_over_r));
    return g;
}

int Truncation::resolved_m_max() const {
    if (m_policy == MPolicy::fixed && m_max >= 0) return std::min(m_max, l_max);
    return l_max;
}

void Truncation::validate() const {
    // A fixed m_max above l_max is clamped by resolved_m_max(); internal
    // half-truncation evaluations rely on that, so it is not an error here.
    if (l_max < 1)
        throw std::domain_error("Truncation: l_max must be >= 1");
    if (!(tol >= 0.0))
        throw std::domain_error("Truncation: tol must be non-negative");
}

MBlock build_block(int m, const Geometry& geometry, double f_c, int l_max) {
    if (m < 0 || m > l_max)
        throw std::domain_error("build_block: need 0 <= m <= l_max");
    std::call_once(g_logfact_once, init_logfact);

    MBlock b;
    b.m = m;
    b.l_min = std::max(1, m);
    b.dim = l_max - b.l_min + 1;
    b.xi = geometry.xi;
    b.f_c = f_c;
    const std::size_t packed = static_cast<std::size_t>(b.dim) * (b.dim + 1) / 2;
    b.h_packed.resize(packed);
    b.dh_packed.resize(packed);

    const double log_xi = std::log(geometry.xi);
    std::size_t p = 0;
    for (int i = 0; i < b.dim; ++i) {
        const int l = b.l_min + i;
        for (int j = 0; j <= i; ++j, ++p) {
            const int lp = b.l_min + j;
            // xi^(l+l'+1) spans hundreds of orders of magnitude against the
            // factorial growth of K; only the combined exponent is safe.
            const double log_k = 0.5 * (std::log(static_cast<double>(l)) +
                                        std::log(static_cast<double>(lp)) -
                                        std::log(2.0 * l + 1.0) -
                                        std::log(2.0 * lp + 1.0)) +
                                 logfact(l + lp) -
                                 0.5 * (logfact(l + m) + logfact(l - m) +
                                        logfact(lp + m) + logfact(lp - m));
            const int pw = l + lp + 1;
            b.h_packed[p] = f_c * std::exp(log_k + pw * log_xi);
            b.dh_packed[p] = f_c * pw * std::exp(log_k + (pw - 1) * log_xi);
        }
        b.h_packed[MBlock::idx(i, i)] += n0(l);
    }
    return b;
}

} // namespace casmp

#include "casmp/analysis.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace casmp {

void SweepCurve::validate() const {
    for (std::size_t i = 1; i < points.size(); ++i)
        if (!(points[i].x > points[i - 1].x))
            throw std::invalid_argument("SweepCurve: x must be strictly increasing");
}

SlopeFit fit_slope(const SweepCurve& curve, double x_lo, double x_hi) {
    curve.validate();
    if (!(x_lo > 0.0 && x_hi > x_lo))
        throw std::invalid_argument("fit_slope: need 0 < x_lo < x_hi");

    std::vector<double> u;
    std::vector<double> v;
    bool has_pos = false;
    bool has_neg = false;
    for (const SweepPoint& p : curve.points) {
        if (p.x < x_lo || p.x > x_hi) continue;
        if (p.y == 0.0 || !std::isfinite(p.y))
            throw std::invalid_argument("fit_slope: zero or non-finite y inside window");
        (p.y > 0.0 ? has_pos : has_neg) = true;
        u.push_back(std::log(p.x));
        v.push_back(std::log(std::abs(p.y)));
    }
    if (u.size() < 5)
        throw std::invalid_argument("fit_slope: need at least 5 points in window, have " +
                                    std::to_string(u.size()));
    if (has_pos && has_neg)
        throw std::invalid_argument(
            "fit_slope: y changes sign inside window (regime boundary)");

    const std::size_t n = u.size();
    double u_mean = 0.0;
    double v_mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        u_mean += u[i];
        v_mean += v[i];
    }
    u_mean /= static_cast<double>(n);
    v_mean /= static_cast<double>(n);

    double suu = 0.0;
    double suv = 0.0;
    double svv = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double du = u[i] - u_mean;
        const double dv = v[i] - v_mean;
        suu += du * du;
        suv += du * dv;
        svv += dv * dv;
    }

    SlopeFit fit;
    fit.exponent = suv / suu;
    fit.x_lo = x_lo;
    fit.x_hi = x_hi;
    fit.n_points = static_cast<int>(n);

    double ss_res = 0.0;
    const double intercept = v_mean - fit.exponent * u_mean;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = v[i] - (intercept + fit.exponent * u[i]);
        ss_res += r * r;
    }
    fit.stderr_exponent = n > 2 ? std::sqrt(ss_res / (static_cast<double>(n) - 2.0) / suu) : 0.0;
    fit.r_squared = svv > 0.0 ? 1.0 - ss_res / svv : 1.0;
    return fit;
}

SweepCurve enhancement_ratio(const SweepCurve& full, const SweepCurve& reference) {
    full.validate();
    reference.validate();
    if (full.points.size() != reference.points.size())
        throw std::invalid_argument("enhancement_ratio: curves have different lengths");

    SweepCurve ratio;
    ratio.points.reserve(full.points.size());
    for (std::size_t i = 0; i < full.points.size(); ++i) {
        const SweepPoint& a = full.points[i];
        const SweepPoint& b = reference.points[i];
        const double scale = std::max(std::abs(a.x), std::abs(b.x));
        if (std::abs(a.x - b.x) > 1e-12 * scale)
            throw std::invalid_argument("enhancement_ratio: x grids do not align at index " +
                                        std::to_string(i));
        SweepPoint p;
        p.x = a.x;
        p.y = std::abs(a.y / b.y);
        p.l_used = a.l_used;
        p.m_used = a.m_used;
        p.converged = a.converged && b.converged;
        ratio.points.push_back(p);
    }
    return ratio;
}

bool monotone_nonincreasing(const SweepCurve& curve, double rel_tol) {
    for (std::size_t i = 1; i < curve.points.size(); ++i) {
        const double prev = curve.points[i - 1].y;
        const double next = curve.points[i].y;
        if (next > prev * (1.0 + rel_tol)) return false;
    }
    return true;
}

} // namespace casmp

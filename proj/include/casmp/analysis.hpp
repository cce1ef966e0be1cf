#pragma once

#include <vector>

namespace casmp {

/// One point of an energy or force sweep.
struct SweepPoint {
    double x = 0.0;        ///< z/R or z [nm]
    double y = 0.0;        ///< energy or force
    int l_used = 0;
    int m_used = 0;
    bool converged = true;
};

/// Ordered sweep curve; x must be strictly increasing.
struct SweepCurve {
    std::vector<SweepPoint> points;

    void validate() const;  ///< throws std::invalid_argument
};

/// Power-law fit y ~ x^exponent on a log-log window.
struct SlopeFit {
    double exponent = 0.0;
    double stderr_exponent = 0.0;
    double x_lo = 0.0;
    double x_hi = 0.0;
    double r_squared = 0.0;
    int n_points = 0;
};

/// Ordinary least squares of log|y| against log x over the points with
/// x in [x_lo, x_hi]. Requires at least 5 points in the window, all y of
/// one sign (a sign change marks a regime boundary inside the window).
/// The exponent is invariant under positive rescaling of y.
SlopeFit fit_slope(const SweepCurve& curve, double x_lo, double x_hi);

/// Pointwise |y_full / y_reference| on identical x grids (relative grid
/// mismatch beyond 1e-12 throws std::invalid_argument).
SweepCurve enhancement_ratio(const SweepCurve& full, const SweepCurve& reference);

/// True when y never increases with x beyond the tolerance, i.e. the ratio
/// grows monotonically as the gap shrinks.
bool monotone_nonincreasing(const SweepCurve& curve, double rel_tol = 1e-9);

} // namespace casmp

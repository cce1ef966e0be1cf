#include "casmp/materials.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "casmp/errors.hpp"

namespace casmp {

DrudeMaterial::DrudeMaterial(double omega_p_ev_, double gamma_ratio_)
    : omega_p_ev(omega_p_ev_), gamma_ratio(gamma_ratio_) {
    if (!(omega_p_ev > 0.0))
        throw std::domain_error("DrudeMaterial: omega_p must be positive");
    if (!(gamma_ratio >= 0.0))
        throw std::domain_error("DrudeMaterial: gamma_ratio must be non-negative");
}

SubstrateMaterial SubstrateMaterial::from_epsilon(double epsilon) {
    return SubstrateMaterial{epsilon, contrast_factor(epsilon)};
}

double contrast_factor(double epsilon) {
    if (!(epsilon > 0.0))
        throw std::domain_error("contrast_factor: epsilon must be positive, got " +
                                std::to_string(epsilon));
    return (1.0 - epsilon) / (1.0 + epsilon);
}

double n0(int l) {
    if (l < 1)
        throw std::domain_error("n0: multipole order must be >= 1, got " +
                                std::to_string(l));
    return static_cast<double>(l) / (2.0 * l + 1.0);
}

std::complex<double> u_of_omega(const DrudeMaterial& m, std::complex<double> omega_ev) {
    const std::complex<double> damping(0.0, m.gamma_ratio * m.omega_p_ev);
    return omega_ev * (omega_ev + damping) / (m.omega_p_ev * m.omega_p_ev);
}

std::complex<double> drude_epsilon(const DrudeMaterial& m, std::complex<double> omega_ev) {
    return 1.0 - 1.0 / u_of_omega(m, omega_ev);
}

ModeOmega omega_of_n(const DrudeMaterial& m, double n) {
    bool overdamped = false;
    const double w = mode_omega_reduced(n, m.gamma_ratio, overdamped);
    return ModeOmega{w * m.omega_p_ev, overdamped};
}

std::complex<double> polarizability_dielectric(std::complex<double> eps_sphere,
                                               int l, double radius) {
    if (l < 1)
        throw std::domain_error("polarizability: multipole order must be >= 1");
    if (!(radius > 0.0))
        throw std::domain_error("polarizability: radius must be positive");
    const double dl = static_cast<double>(l);
    return dl * (eps_sphere - 1.0) / (dl * (eps_sphere + 1.0) + 1.0) *
           std::pow(radius, 2 * l + 1);
}

std::complex<double> polarizability_spectral(std::complex<double> u, int l, double radius) {
    if (l < 1)
        throw std::domain_error("polarizability: multipole order must be >= 1");
    if (!(radius > 0.0))
        throw std::domain_error("polarizability: radius must be positive");
    const double nl = n0(l);
    const std::complex<double> denom = nl - u;
    if (denom == std::complex<double>(0.0, 0.0))
        throw SolverError("polarizability: u coincides with the mode constant n0(" +
                          std::to_string(l) + ") -- resonant (infinite) response");
    return nl / denom * std::pow(radius, 2 * l + 1);
}

std::complex<double> polarizability(const DrudeMaterial& m, int l,
                                    std::complex<double> omega_ev, double radius) {
    return polarizability_spectral(u_of_omega(m, omega_ev), l, radius);
}

} // namespace casmp

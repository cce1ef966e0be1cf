#pragma once

#include <cmath>
#include <complex>

namespace casmp {

/// Drude metal described by its plasma energy and relative damping.
///
/// The dielectric function is eps(w) = 1 - wp^2 / (w (w + i/tau)), which in
/// terms of the spectral variable reads u(w) = w (w + i/tau) / wp^2.
/// `gamma_ratio` is the dimensionless damping 1/(tau wp); zero means the
/// undamped limit.
struct DrudeMaterial {
    double omega_p_ev;    ///< plasma energy, hbar*omega_p in eV (> 0)
    double gamma_ratio;   ///< 1/(tau*omega_p), >= 0

    DrudeMaterial(double omega_p_ev_, double gamma_ratio_);
};

/// Planar substrate with a real, frequency-independent permittivity.
/// The derived contrast factor f_c = (1 - eps)/(1 + eps) sets the strength
/// of the image response; eps > 1 gives f_c in (-1, 0).
struct SubstrateMaterial {
    double epsilon;  ///< relative permittivity (> 0)
    double f_c;      ///< contrast factor, derived

    static SubstrateMaterial from_epsilon(double epsilon);
};

/// Contrast factor (1 - eps)/(1 + eps) of a planar interface.
/// Strictly decreasing in eps; maps (0, inf) into (-1, 1).
/// Throws std::domain_error for eps <= 0.
double contrast_factor(double epsilon);

/// Depolarization constant n0(l) = l/(2l+1) of the isolated sphere's l-th
/// multipole mode. Strictly increasing in l, in [1/3, 1/2).
/// Throws std::domain_error for l < 1.
double n0(int l);

/// Spectral variable of a Drude sphere at (complex) energy omega [eV]:
/// u = omega (omega + i*gamma_ratio*omega_p) / omega_p^2.
std::complex<double> u_of_omega(const DrudeMaterial& m, std::complex<double> omega_ev);

/// Dielectric function eps(w) = 1 - 1/u(w) of a Drude sphere.
std::complex<double> drude_epsilon(const DrudeMaterial& m, std::complex<double> omega_ev);

/// Frequency of the proper mode with spectral value n, i.e. the real part of
/// the root of u(omega) = n.
struct ModeOmega {
    double omega_ev;  ///< omega_p*sqrt(n - (gamma/2)^2), or 0 if overdamped
    bool overdamped;  ///< true when n <= (gamma_ratio/2)^2
};
ModeOmega omega_of_n(const DrudeMaterial& m, double n);

/// Same map in reduced units (omega/omega_p); the inner loop of the energy
/// sum. Returns 0 and sets `overdamped` for n <= (gamma_ratio/2)^2.
inline double mode_omega_reduced(double n, double gamma_ratio, bool& overdamped) {
    const double c = 0.25 * gamma_ratio * gamma_ratio;
    if (n <= c) {
        overdamped = true;
        return 0.0;
    }
    overdamped = false;
    return std::sqrt(n - c);
}

/// Multipolar polarizability in the dielectric form
/// alpha_l = l (eps - 1) / (l (eps + 1) + 1) * R^(2l+1).
std::complex<double> polarizability_dielectric(std::complex<double> eps_sphere,
                                               int l, double radius);

/// Multipolar polarizability in the spectral form
/// alpha_l = n0(l) / (n0(l) - u) * R^(2l+1).
/// Throws SolverError exactly on the pole u == n0(l) (mode resonance).
std::complex<double> polarizability_spectral(std::complex<double> u, int l, double radius);

/// Drude-sphere polarizability via the spectral form. Validation-only
/// convenience; the energy path never evaluates polarizabilities.
std::complex<double> polarizability(const DrudeMaterial& m, int l,
                                    std::complex<double> omega_ev, double radius);

} // namespace casmp

#pragma once

#include <vector>

#include "casmp/exec.hpp"

namespace casmp {

/// Sphere-substrate geometry. The coupling depends on (radius, gap) only
/// through the ratio gap/radius, via the dimensionless strength
/// xi = 1 / (2 (1 + z/R)) = R / (2 (z + R)), which runs from 0 (far) to
/// 1/2 (contact). xi is always computed from the ratio so that two
/// geometries with the same z/R produce bitwise-equal matrices.
struct Geometry {
    double radius_nm;  ///< sphere radius R [nm]
    double gap_nm;     ///< minimum sphere-substrate distance z [nm]
    double z_over_r;   ///< z/R
    double xi;         ///< coupling strength, in (0, 1/2)

    /// Build from physical radius and gap (both > 0).
    static Geometry from_radius_gap(double radius_nm, double gap_nm);

    /// Build from the ratio z/R alone (> 0); radius defaults to 1 nm so
    /// that per-radius force units remain well defined.
    static Geometry from_ratio(double z_over_r, double radius_nm = 1.0);
};

/// Multipole truncation and azimuthal-block policy.
struct Truncation {
    enum class MPolicy {
        fixed,     ///< use blocks m = 0 .. min(m_max, l_max)
        adaptive   ///< add blocks until their weighted energy contribution
                   ///< falls below tol/10 (relative)
    };

    int l_max = 64;
    MPolicy m_policy = MPolicy::adaptive;
    int m_max = -1;      ///< fixed policy only; -1 means l_max
    double tol = 1e-6;   ///< relative energy tolerance

    int resolved_m_max() const;   ///< fixed-policy upper m (clamped to l_max)
    void validate() const;        ///< throws std::domain_error
};

/// One azimuthal block of the interaction matrix: the real symmetric
/// H(l,l') = n0(l) delta + f_c K(l,l',m) xi^(l+l'+1) for l, l' in
/// [max(1,m), l_max], stored as a packed lower triangle together with its
/// analytic xi-derivative.
struct MBlock {
    int m = 0;
    int l_min = 1;
    int dim = 0;
    double xi = 0.0;
    double f_c = 0.0;
    std::vector<double> h_packed;    ///< H, lower triangle, row-major
    std::vector<double> dh_packed;   ///< dH/dxi, same layout

    double h(int i, int j) const {
        return i >= j ? h_packed[idx(i, j)] : h_packed[idx(j, i)];
    }
    double dh(int i, int j) const {
        return i >= j ? dh_packed[idx(i, j)] : dh_packed[idx(j, i)];
    }
    int l_of(int i) const { return l_min + i; }
    int weight() const { return m == 0 ? 1 : 2; }

    static std::size_t idx(int i, int j) {
        return static_cast<std::size_t>(i) * (i + 1) / 2 + j;
    }
};

/// Image-multipole coupling coefficient K(l,l',m): the H entry in block m is
/// n0(l) delta_{ll'} + f_c K(l,l',m) xi^(l+l'+1), with
///
///   K = sqrt(l l' / ((2l+1)(2l'+1))) * (l+l')! /
///       sqrt((l+m)! (l-m)! (l'+m)! (l'-m)!)
///
/// Symmetric in (l,l'). K(1,1,0) = 2/3 and K(1,1,1) = 1/3 reproduce the
/// electrostatic image-dipole energies (perpendicular twice parallel), and
/// the summed dipole channel matches the particle-plane Lifshitz limit.
/// Overflows double precision around l+l' ~ 510; block assembly therefore
/// combines log K with (l+l'+1) log xi before exponentiating.
double coupling_coeff(int l, int lp, int m);

/// log K(l,l',m); always finite for valid arguments.
double coupling_coeff_log(int l, int lp, int m);

/// Assemble the m-block for the given geometry, contrast factor and l_max.
MBlock build_block(int m, const Geometry& geometry, double f_c, int l_max);

/// Assemble all blocks m = 0, 1, ..., ordered by m ascending. Blocks for -m
/// equal blocks for +m and are stored once (weight 2 for m > 0). Under the
/// adaptive policy, blocks are added until the stopping rule of the energy
/// sum is met; the result is independent of the execution policy.
///
/// Materializes every block; memory grows as l_max^3. Intended for
/// inspection and moderate l_max -- the energy path streams blocks instead.
std::vector<MBlock> build_all_blocks(const Geometry& geometry, double f_c,
                                     const Truncation& truncation,
                                     Exec exec = Exec::parallel);

} // namespace casmp

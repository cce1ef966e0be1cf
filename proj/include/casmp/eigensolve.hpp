#pragma once

#include <vector>

#include "casmp/coupling.hpp"

namespace casmp {

/// Spectrum of one m-block. Eigenvalues are sorted ascending; eigenvectors
/// (when requested) are orthonormal, stored column-major, with the sign
/// convention that each vector's largest-magnitude component is positive.
struct EigenResult {
    int dim = 0;
    std::vector<double> eigenvalues;   ///< ascending
    std::vector<double> eigenvectors;  ///< dim*dim, column-major; empty if not requested
    double residual_bound = 0.0;       ///< max_i ||H v_i - lambda_i v_i||_2 when
                                       ///< vectors are present, else an a-priori
                                       ///< dim*eps*||H||_F bound

    bool has_vectors() const { return !eigenvectors.empty(); }
    double vec(int i, int comp) const {
        return eigenvectors[static_cast<std::size_t>(i) * dim + comp];
    }
};

/// Diagonalize a block: Householder tridiagonalization followed by
/// implicit-shift QL. Returns all eigenvalues (and optionally vectors).
/// Deterministic for identical input. Throws SolverError on non-finite
/// entries or if the QL iteration fails to converge.
EigenResult eig_sym(const MBlock& block, bool want_vectors);

/// Eigenvalue derivatives dn_i/dxi via first-order perturbation theory,
/// dn_i = v_i^T (dH/dxi) v_i, aligned with the sorted eigenvalue order.
/// For eigenvalue clusters with gaps below 1e-12 the per-vector formula is
/// ill-defined and the affected entries fall back to central finite
/// differences of the sorted spectra of H +/- h dH.
/// Throws std::invalid_argument if `result` carries no vectors.
std::vector<double> eigen_derivative(const MBlock& block, const EigenResult& result);

} // namespace casmp

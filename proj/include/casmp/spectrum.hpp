#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "casmp/coupling.hpp"
#include "casmp/materials.hpp"

namespace casmp {

/// One proper electromagnetic mode of the coupled system.
struct ModeEntry {
    double n;              ///< eigenvalue of H (spectral value)
    double omega_reduced;  ///< mode frequency in omega_p units (0 if overdamped)
    int weight;            ///< azimuthal degeneracy: 1 for m=0, 2 for m>0
    int l_label;           ///< adiabatic label l_min + index (equals l as xi -> 0)
};

/// Modes of one m-block, ascending in n.
struct BlockModes {
    int m = 0;
    std::vector<ModeEntry> modes;
};

/// Full mode spectrum with degeneracy weights and anomaly counters.
struct ModeSpectrum {
    std::vector<BlockModes> blocks;       ///< ascending m
    std::int64_t overdamped_count = 0;    ///< modes with n <= (gamma/2)^2
    std::int64_t out_of_range_count = 0;  ///< flagged anomalies: n < 0 or n >= 1

    /// Total number of modes counting +/-m degeneracy; equals
    /// l_max (l_max + 2) at full truncation (m_max = l_max).
    std::int64_t weighted_count() const;
};

/// Diagonalize every block and map eigenvalues to mode frequencies through
/// u(omega) = n. The isolated-sphere reference spectrum is the same map
/// applied with f_c = 0 (blocks become diagonal with entries n0(l)).
ModeSpectrum modes_from_blocks(std::span<const MBlock> blocks,
                               const DrudeMaterial& material,
                               Exec exec = Exec::parallel);

/// Isolated-sphere spectrum at matched truncation: per block m, the modes
/// are n0(l) for l = max(1,m) .. l_max with the same weights.
ModeSpectrum isolated_spectrum(int l_max, int m_used, const DrudeMaterial& material);

} // namespace casmp

#pragma once

// Internal: per-block energy contribution shared by the energy path and the
// adaptive stopping rule of build_all_blocks.

#include <cstdint>

#include "casmp/coupling.hpp"

namespace casmp::detail {

struct BlockEnergyTerm {
    double energy = 0.0;               ///< weighted 1/2 sum of frequency shifts
    std::int64_t overdamped = 0;       ///< weighted count of clipped modes
};

/// Diagonalize the block (values only), pair its eigenvalues with the
/// isolated-sphere constants at matched truncation, and sum the weighted
/// frequency shifts in ascending shift magnitude.
BlockEnergyTerm block_energy_term(const MBlock& block, double gamma_ratio);

} // namespace casmp::detail

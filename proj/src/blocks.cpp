#include "casmp/coupling.hpp"

#include "detail/block_energy.hpp"
#include "detail/run_blocks.hpp"

namespace casmp {

std::vector<MBlock> build_all_blocks(const Geometry& geometry, double f_c,
                                     const Truncation& truncation, Exec exec) {
    // The adaptive stopping rule weighs each block's undamped energy
    // contribution, so block selection stays independent of the material.
    return detail::run_blocks<MBlock>(
        truncation.l_max, truncation, exec,
        [&](int m) { return build_block(m, geometry, f_c, truncation.l_max); },
        [](const MBlock& b) { return detail::block_energy_term(b, 0.0).energy; });
}

} // namespace casmp

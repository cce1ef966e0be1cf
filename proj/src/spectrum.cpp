#include "casmp/spectrum.hpp"

#include <algorithm>

#include "casmp/eigensolve.hpp"
#include "detail/run_blocks.hpp"

namespace casmp {

std::int64_t ModeSpectrum::weighted_count() const {
    std::int64_t count = 0;
    for (const BlockModes& b : blocks)
        for (const ModeEntry& mode : b.modes) count += mode.weight;
    return count;
}

ModeSpectrum modes_from_blocks(std::span<const MBlock> blocks,
                               const DrudeMaterial& material, Exec exec) {
    const int n_blocks = static_cast<int>(blocks.size());
    auto solved = detail::eval_batch<BlockModes>(0, n_blocks - 1, exec, [&](int bi) {
        const MBlock& block = blocks[static_cast<std::size_t>(bi)];
        const EigenResult eig = eig_sym(block, false);
        BlockModes out;
        out.m = block.m;
        out.modes.reserve(static_cast<std::size_t>(block.dim));
        for (int i = 0; i < block.dim; ++i) {
            bool od = false;
            const double n = eig.eigenvalues[i];
            const double omega = mode_omega_reduced(n, material.gamma_ratio, od);
            out.modes.push_back(ModeEntry{n, omega, block.weight(), block.l_of(i)});
        }
        return out;
    });

    ModeSpectrum spectrum;
    spectrum.blocks = std::move(solved);
    for (const BlockModes& b : spectrum.blocks) {
        for (const ModeEntry& mode : b.modes) {
            const double c = 0.25 * material.gamma_ratio * material.gamma_ratio;
            if (mode.n <= c) spectrum.overdamped_count += mode.weight;
            if (mode.n < 0.0 || mode.n >= 1.0) spectrum.out_of_range_count += mode.weight;
        }
    }
    return spectrum;
}

ModeSpectrum isolated_spectrum(int l_max, int m_used, const DrudeMaterial& material) {
    ModeSpectrum spectrum;
    for (int m = 0; m <= m_used; ++m) {
        BlockModes b;
        b.m = m;
        const int w = m == 0 ? 1 : 2;
        for (int l = std::max(1, m); l <= l_max; ++l) {
            bool od = false;
            const double n = n0(l);
            const double omega = mode_omega_reduced(n, material.gamma_ratio, od);
            b.modes.push_back(ModeEntry{n, omega, w, l});
            if (od) spectrum.overdamped_count += w;
        }
        spectrum.blocks.push_back(std::move(b));
    }
    return spectrum;
}

} // namespace casmp

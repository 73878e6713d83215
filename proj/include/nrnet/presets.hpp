#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "nrnet/emit.hpp"
#include "nrnet/sweep.hpp"

namespace nrnet {

/// fig2a, fig2b, fig2c, fig3a, fig3b, fig4a, fig4b.
const std::vector<std::string>& preset_names();

/// N = 40, Γ = 1, κ from ζ; γ ∈ [−1.2, 1.6] × ζ ∈ [0.5, 10⁴] log-spaced.
SweepGrid fig4a_grid();

/// N = 40, Γ = 1, ζ = 10⁹, κ from ζ; γ × Δω plane.
SweepGrid fig4b_grid();

/// Computes the preset and writes `<out_dir>/<name>.<ext>` for each format.
std::vector<std::filesystem::path> run_preset(const std::string& name, const std::filesystem::path& out_dir,
                                              const std::vector<Format>& formats, int threads = 1);

}  // namespace nrnet

#pragma once

#include <cstdint>
#include <random>

#include "nrnet/params.hpp"

namespace nrnet {

/// Random stable parameters: N ∈ [2, max_n], Γ ∈ [0.5, 2], κ ∈ [0.05, 1.5]·Γ,
/// γ at least 0.02·Γ below κ + Γ, ζ log-uniform in [0.3, 10⁶·N],
/// Δω ∈ [−2Γ, 2Γ], φ ∈ [0, 2π).
NetworkParams draw_stable_params(std::mt19937_64& rng, int max_n = 64);

/// max |a − b| / max(1, max |S|) between the three magnitude computations.
struct EquivalenceErrors {
  double numeric_vs_svd = 0.0;
  double numeric_vs_analytic = 0.0;
  double svd_vs_analytic = 0.0;
  [[nodiscard]] double worst() const;
};

EquivalenceErrors scattering_equivalence(const NetworkParams& params);

struct EquivalenceSummary {
  int draws = 0;
  EquivalenceErrors worst;
  NetworkParams worst_params;
};

EquivalenceSummary run_equivalence(std::uint64_t seed, int draws, int max_n = 64);

}  // namespace nrnet

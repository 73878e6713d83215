#include "nrnet/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "nrnet/scattering.hpp"

namespace nrnet {

namespace {

double scaled_difference(const RMatrix& a, const RMatrix& b) {
  const double scale = std::max({1.0, a.maxCoeff(), b.maxCoeff()});
  return (a - b).cwiseAbs().maxCoeff() / scale;
}

}  // namespace

NetworkParams draw_stable_params(std::mt19937_64& rng, int max_n) {
  auto uniform = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };
  NetworkParams p;
  p.n_cavities = std::uniform_int_distribution<int>(2, max_n)(rng);
  p.coupling_rate = uniform(0.5, 2.0);
  p.io_rate = uniform(0.05, 1.5) * p.coupling_rate;
  const double ceiling = p.io_rate + p.coupling_rate;
  p.pump_rate = uniform(ceiling - 2.5 * p.coupling_rate, ceiling - 0.02 * p.coupling_rate);
  p.coherence_length = std::exp(uniform(std::log(0.3), std::log(1e6 * p.n_cavities)));
  p.detuning = uniform(-2.0, 2.0) * p.coupling_rate;
  p.phase_per_site = uniform(0.0, 2.0 * std::numbers::pi);
  return p;
}

double EquivalenceErrors::worst() const {
  return std::max({numeric_vs_svd, numeric_vs_analytic, svd_vs_analytic});
}

EquivalenceErrors scattering_equivalence(const NetworkParams& params) {
  const RMatrix numeric = scattering_numeric(params).entries.cwiseAbs();
  const RMatrix svd = scattering_svd(params).scattering.entries.cwiseAbs();
  const RMatrix analytic = scattering_analytic(params).magnitudes;
  return {scaled_difference(numeric, svd), scaled_difference(numeric, analytic), scaled_difference(svd, analytic)};
}

EquivalenceSummary run_equivalence(std::uint64_t seed, int draws, int max_n) {
  std::mt19937_64 rng(seed);
  EquivalenceSummary s;
  for (int i = 0; i < draws; ++i) {
    const auto p = draw_stable_params(rng, max_n);
    const auto e = scattering_equivalence(p);
    if (s.draws == 0 || e.worst() > s.worst.worst()) {
      s.worst = e;
      s.worst_params = p;
    }
    ++s.draws;
  }
  return s;
}

}  // namespace nrnet

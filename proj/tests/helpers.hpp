#pragma once

#include <cmath>

#include "nrnet/params.hpp"

namespace nrnet::test {

// Γ = 1, κ = 0.25, the default test chain.
inline NetworkParams chain(int n, double gamma, double zeta = 1e9) {
  NetworkParams p;
  p.n_cavities = n;
  p.coupling_rate = 1.0;
  p.io_rate = 0.25;
  p.pump_rate = gamma;
  p.coherence_length = zeta;
  return p;
}

inline double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace nrnet::test

#pragma once

#include "nrnet/params.hpp"
#include "nrnet/types.hpp"

namespace nrnet {

enum class Boundary { open, periodic };

/// M = H + iΔω·𝕀 in the rotating frame. Open chains give a lower-triangular
/// Toeplitz matrix (the bus only carries signal downstream); the periodic
/// closure wraps every coupling around the ring and is circulant.
struct DynamicMatrix {
  CMatrix entries;
  Boundary boundary = Boundary::open;
  NetworkParams params;
};

DynamicMatrix build_dynamic_matrix(const NetworkParams& params, Boundary boundary = Boundary::open);

struct StabilityReport {
  double eigen_real_part = 0.0;  ///< (γ−κ−Γ)/2, shared by every eigenvalue
  bool stable = false;           ///< γ < κ + Γ, strictly
  double margin = 0.0;           ///< κ + Γ − γ
};

StabilityReport stability(const NetworkParams& params);

}  // namespace nrnet

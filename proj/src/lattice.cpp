#include "nrnet/lattice.hpp"

#include <vector>

namespace nrnet {

DynamicMatrix build_dynamic_matrix(const NetworkParams& params, Boundary boundary) {
  params.validate();
  const int n = params.n_cavities;
  std::vector<Complex> mu(static_cast<std::size_t>(n));
  for (int m = 0; m < n; ++m) mu[m] = coupling_coefficient(params, m);

  CMatrix entries = CMatrix::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    for (int l = 0; l < n; ++l) {
      if (boundary == Boundary::open) {
        if (j >= l) entries(j, l) = mu[j - l];
      } else {
        entries(j, l) = mu[((j - l) % n + n) % n];
      }
    }
  }
  return {std::move(entries), boundary, params};
}

StabilityReport stability(const NetworkParams& params) {
  params.validate();
  StabilityReport r;
  r.eigen_real_part = (params.pump_rate - params.io_rate - params.coupling_rate) / 2.0;
  r.margin = params.io_rate + params.coupling_rate - params.pump_rate;
  r.stable = params.pump_rate < params.io_rate + params.coupling_rate;
  return r;
}

}  // namespace nrnet

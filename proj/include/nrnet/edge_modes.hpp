#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "nrnet/params.hpp"
#include "nrnet/types.hpp"

namespace nrnet {

/// 𝓜 = M ⊗ σ₊ + M† ⊗ σ₋ for the open chain, 2N×2N Hermitian.
CMatrix auxiliary_matrix(const NetworkParams& params);

/// Eigenvalues of the auxiliary matrix, ascending. Dense Hermitian solve;
/// intended for small N.
RVector auxiliary_eigenvalues(const NetworkParams& params);

struct EdgeReport {
  RVector singular_values;  ///< descending
  double lambda_min = 0.0;
  double lambda_next = 0.0;
  double lambda_min_probe = 0.0;  ///< λ_min of the chain with N + 10 sites
  /// λ_min decays faster than 1/N under N → N + 10, the hallmark of an
  /// exponentially small edge gap. A gapped bulk keeps λ_min finite and a
  /// critical chain gives λ_min ∝ 1/N, so neither trips it.
  bool zero_mode = false;
  bool zero_mode_analytic = false;  ///< ζ > ξ > 0
  double xi_prime_fit_left = 0.0;   ///< NaN when the fit is degenerate
  double xi_prime_fit_right = 0.0;
  double xi_prime_analytic = 0.0;   ///< NaN unless Δω = 0 and ξ′ > 0
  CVector right_edge_vector;  ///< V column paired with λ_min, peaked at site N
  CVector left_edge_vector;   ///< U column paired with λ_min, peaked at site 1
};

/// Singular spectrum of the open-chain M and the zero-mode classification.
EdgeReport auxiliary_spectrum(const NetworkParams& params);

/// ξ′ = 1/(1/ξ − 1/ζ); may be negative or infinite.
double edge_localization_length(const NetworkParams& params);

struct AnalyticEdgeState {
  RVector u_profile;  ///< |U_l| = N0 e^{−(l−1)/ξ′}
  RVector v_profile;  ///< |V_j| = N0 e^{−(N−j)/ξ′}
  double xi_prime = 0.0;
  double lambda_pm = 0.0;
  double n0 = 0.0;
};

/// Requires Δω = 0 and ζ > ξ > 0, else NoEdgeStateError.
AnalyticEdgeState analytic_edge_state(const NetworkParams& params);

/// κ|V_j| λ₊⁻¹ |U_l| from the analytic edge state for j ≥ l, zero above the diagonal.
RMatrix scattering_from_edge(const NetworkParams& params);

/// Same rank-one truncation built from numerically computed edge vectors.
RMatrix edge_rank_one(const EdgeReport& report, double io_rate);

/// −1/slope of ln|v_j| against distance from the edge where |v| peaks, fitted
/// over the half chain nearest that edge; entries below 1e-12·max|v| are
/// dropped. Returns +inf for a profile that does not decay. Throws
/// FitDegenerateError with fewer than 4 usable points.
double localization_fit(const CVector& vector);

/// γ at which `zero_mode` switches on, scanning [gamma_lo, gamma_hi] and then
/// bisecting to `tolerance`. Throws NotFoundError when it never switches.
double zero_mode_onset(const NetworkParams& params, double gamma_lo, double gamma_hi, int scan_points = 16,
                       double tolerance = 1e-5);

nlohmann::json to_json_value(const EdgeReport& r);

/// One row per γ: gamma, lambda_1 … lambda_N.
std::string spectrum_csv(const std::vector<double>& gammas, const std::vector<RVector>& spectra);

}  // namespace nrnet

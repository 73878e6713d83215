#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "nrnet/params.hpp"
#include "nrnet/svd.hpp"
#include "nrnet/types.hpp"

namespace nrnet {

/// S(ω) = 𝕀 + κ M⁻¹ for the open chain; lower triangular and Toeplitz.
struct ScatteringMatrix {
  CMatrix entries;
  NetworkParams params;
};

/// Forward substitution on the Toeplitz structure, O(N²).
/// Throws SingularityError when μ0 = 0.
ScatteringMatrix scattering_numeric(const NetworkParams& params);

/// Closed-form magnitudes. For j > l, |S_jl| = B·exp((j−l)(1/ξ − 1/ζ)).
struct AnalyticScattering {
  RMatrix magnitudes;
  double prefactor = 0.0;  ///< B = 4κΓ / (|γ+Γ−κ+2iΔω|·|γ−Γ−κ+2iΔω|)
  double xi = 0.0;         ///< signed, +inf when the two moduli coincide
};

AnalyticScattering scattering_analytic(const NetworkParams& params);

struct SvdScattering {
  ScatteringMatrix scattering;
  linalg::SvdTriple svd;
};

/// S_jl = δ_jl + κ Σ_n V_jn λ_n⁻¹ U*_ln.
SvdScattering scattering_svd(const NetworkParams& params);

/// 1/ξ = ln(|γ+Γ−κ+2iΔω| / |γ−Γ−κ+2iΔω|). Throws SingularityError on a zero modulus.
double inverse_decay_length(const NetworkParams& params);

/// Log-gain per site, 1/ξ − 1/ζ. Positive in the amplifying phase.
double growth_rate(const NetworkParams& params);

/// γ* = κ + Γ tanh(1/(2ζ)). Requires Δω = 0.
double amplification_threshold(const NetworkParams& params);

struct GainProfile {
  std::vector<double> detuning;
  std::vector<double> gain;
  std::optional<double> fwhm;
  std::string diagnostic;  ///< empty unless the grid failed to resolve the half maximum
  double peak_gain = 0.0;  ///< gain at Δω = 0
};

/// |S_jl(Δω)|² on the grid, 0-based j > l. The grid must be symmetric about 0.
GainProfile gain_bandwidth(const NetworkParams& params, int j, int l, const std::vector<double>& grid);

// Row-major [re, im] pairs, with the parameters alongside.
nlohmann::json to_json_value(const ScatteringMatrix& s);
std::string magnitudes_csv(const ScatteringMatrix& s);
std::string gain_profile_csv(const GainProfile& g);

}  // namespace nrnet

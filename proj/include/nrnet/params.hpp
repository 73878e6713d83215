#pragma once

#include <filesystem>
#include <limits>

#include <json.hpp>

#include "nrnet/types.hpp"

namespace nrnet {

/// Physical parameters of a chain of identical driven-dissipative cavities
/// coupled through a one-way bus. Rates share one unit (typically Γ = 1);
/// lengths are in units of the cavity spacing. The carrier frequency is
/// removed by the rotating frame, so only the detuning appears.
struct NetworkParams {
  int n_cavities = 20;
  double coupling_rate = 1.0;   ///< Γ, cavity-bus coupling
  double io_rate = 0.25;        ///< κ, input/output port coupling
  double pump_rate = 0.5;       ///< γ, net gain including internal loss
  double coherence_length = std::numeric_limits<double>::infinity();  ///< ζ
  double detuning = 0.0;        ///< Δω = ω − ω0
  double phase_per_site = 0.0;  ///< φ = k_ω·d

  /// Throws ParameterError unless N ≥ 2, Γ ≥ 0, κ > 0, ζ > 0 and the rest are finite.
  void validate() const;

  /// ζ = +inf, or ζ ≥ 10⁶·N.
  [[nodiscard]] bool infinite_range() const;

  /// e^{−m/ζ}; exactly 1 only for ζ = +inf, never below the smallest normal double.
  [[nodiscard]] double coupling_decay(int separation) const;

  [[nodiscard]] NetworkParams with_pump(double gamma) const;
  [[nodiscard]] NetworkParams with_size(int n) const;
  [[nodiscard]] NetworkParams with_detuning(double delta) const;
};

/// Coefficient μ_m of the dynamic matrix: μ0 = (γ−κ−Γ)/2 + iΔω on the
/// diagonal, μ_m = −Γ e^{−m/ζ} e^{iφm} for the coupling m sites downstream.
[[nodiscard]] Complex coupling_coefficient(const NetworkParams& p, int separation);

[[nodiscard]] inline Complex diagonal_rate(const NetworkParams& p) {
  return coupling_coefficient(p, 0);
}

/// κ for which the downstream prefactor B equals one at the threshold:
/// κ = Γ e^{−1/ζ} / (1 + e^{−1/ζ})².
[[nodiscard]] double unity_prefactor_io_rate(double coupling_rate, double coherence_length);

// JSON: flat object {n, gamma_pump, kappa, Gamma, zeta, delta_omega, phi}.
// An infinite zeta is written as the string "inf".
void to_json(nlohmann::json& j, const NetworkParams& p);
void from_json(const nlohmann::json& j, NetworkParams& p);

NetworkParams load_params(const std::filesystem::path& path);

}  // namespace nrnet

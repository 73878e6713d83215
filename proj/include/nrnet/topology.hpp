#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "nrnet/params.hpp"
#include "nrnet/types.hpp"

namespace nrnet {

/// h_p(k) = Σ_{m=0}^{N−1} μ_m e^{−ikm}, the finite sum of the periodic chain.
Complex symbol_value(const NetworkParams& params, double k);

/// N → ∞ limit of the same sum, μ0 − Γ w e^{−ik} / (1 − w e^{−ik}) with
/// w = e^{−1/ζ + iφ}. Only meaningful for finite ζ.
Complex symbol_value_infinite(const NetworkParams& params, double k);

struct SymbolCurve {
  std::vector<double> k;   ///< uniform in [0, 2π)
  std::vector<Complex> h;
  NetworkParams params;
  int n_terms = 0;         ///< terms in the finite sum (= N)
};

/// n_samples ≥ 16.
SymbolCurve symbol_curve(const NetworkParams& params, int n_samples);

struct WindingResult {
  int nu = 0;
  double min_abs_h = 0.0;
  double k_at_min = 0.0;
  int samples_used = 0;
};

/// Argument-principle winding of h_p over k: 0 → 2π. Every uniform interval is
/// bisected until the curve provably cannot reach the origin inside it, so the
/// count is exact whenever it returns. Throws AtTransitionError when
/// min |h_p| < 1e-8·Γ (κ if Γ = 0).
WindingResult winding_number(const NetworkParams& params, int n_samples = 4096);

struct TptResult {
  double gamma = 0.0;
  int nu_below = 0;
  int nu_above = 0;
};

/// Scans γ over [gamma_lo, gamma_hi] for the first change of ν and bisects it
/// to 1e-6·Γ. Requires Δω = 0. Throws NotFoundError when ν never changes.
TptResult tpt_locator(const NetworkParams& params, double gamma_lo, double gamma_hi, int scan_points = 64);

std::string symbol_curve_csv(const SymbolCurve& curve);
nlohmann::json to_json_value(const WindingResult& w);

}  // namespace nrnet

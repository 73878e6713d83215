#include "nrnet/topology.hpp"

#include <cmath>
#include <numbers>
#include <optional>
#include <sstream>

#include "nrnet/errors.hpp"
#include "nrnet/format.hpp"

namespace nrnet {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kGapTolerance = 1e-8;
constexpr double kMinStep = 1e-13;

double rate_scale(const NetworkParams& p) {
  return p.coupling_rate > 0.0 ? p.coupling_rate : p.io_rate;
}

std::vector<Complex> coefficients(const NetworkParams& p) {
  std::vector<Complex> mu(static_cast<std::size_t>(p.n_cavities));
  for (int m = 0; m < p.n_cavities; ++m) mu[m] = coupling_coefficient(p, m);
  return mu;
}

Complex horner(const std::vector<Complex>& mu, double k) {
  const Complex z = std::polar(1.0, -k);
  Complex h = 0.0;
  for (auto it = mu.rbegin(); it != mu.rend(); ++it) h = h * z + *it;
  return h;
}

struct Tracker {
  const std::vector<Complex>& mu;
  double lipschitz;  // bound on |dh/dk|
  double min_abs = std::numeric_limits<double>::infinity();
  double k_at_min = 0.0;
  int evaluations = 0;

  Complex eval(double k) {
    const Complex h = horner(mu, k);
    ++evaluations;
    if (std::abs(h) < min_abs) {
      min_abs = std::abs(h);
      k_at_min = k;
    }
    return h;
  }

  // Phase change of h over [ka, kb]. Every point of the segment lies within
  // lipschitz·(kb−ka)/2 of an endpoint; once lipschitz·(kb−ka) ≤ min(|ha|, |hb|)
  // the segment cannot wind around the origin and the principal difference is exact.
  std::optional<double> phase_change(double ka, Complex ha, double kb, Complex hb) {
    const double reach = lipschitz * (kb - ka);
    if (reach <= std::min(std::abs(ha), std::abs(hb))) return std::arg(hb / ha);
    if (kb - ka < kMinStep) return std::nullopt;
    const double km = 0.5 * (ka + kb);
    const Complex hm = eval(km);
    auto left = phase_change(ka, ha, km, hm);
    if (!left) return std::nullopt;
    auto right = phase_change(km, hm, kb, hb);
    if (!right) return std::nullopt;
    return *left + *right;
  }
};

}  // namespace

Complex symbol_value(const NetworkParams& params, double k) {
  params.validate();
  return horner(coefficients(params), k);
}

Complex symbol_value_infinite(const NetworkParams& params, double k) {
  params.validate();
  const Complex w = std::polar(std::exp(-1.0 / params.coherence_length), params.phase_per_site);
  const Complex wz = w * std::polar(1.0, -k);
  return diagonal_rate(params) - params.coupling_rate * wz / (1.0 - wz);
}

SymbolCurve symbol_curve(const NetworkParams& params, int n_samples) {
  params.validate();
  if (n_samples < 16) throw ParameterError("symbol curve needs at least 16 samples");
  const auto mu = coefficients(params);
  SymbolCurve out;
  out.params = params;
  out.n_terms = params.n_cavities;
  out.k.reserve(static_cast<std::size_t>(n_samples));
  out.h.reserve(static_cast<std::size_t>(n_samples));
  for (int i = 0; i < n_samples; ++i) {
    const double k = kTwoPi * i / n_samples;
    out.k.push_back(k);
    out.h.push_back(horner(mu, k));
  }
  return out;
}

WindingResult winding_number(const NetworkParams& params, int n_samples) {
  params.validate();
  if (n_samples < 16) throw ParameterError("winding number needs at least 16 samples");
  const auto mu = coefficients(params);
  double lipschitz = 0.0;
  for (std::size_t m = 1; m < mu.size(); ++m) lipschitz += static_cast<double>(m) * std::abs(mu[m]);

  Tracker tr{mu, lipschitz};
  const double tolerance = kGapTolerance * rate_scale(params);
  double total = 0.0;
  double ka = 0.0;
  Complex ha = tr.eval(ka);
  const Complex h0 = ha;
  for (int i = 1; i <= n_samples; ++i) {
    const double kb = kTwoPi * i / n_samples;
    const Complex hb = i == n_samples ? h0 : tr.eval(kb);
    const auto step = tr.min_abs < tolerance ? std::nullopt : tr.phase_change(ka, ha, kb, hb);
    if (!step || tr.min_abs < tolerance) {
      throw AtTransitionError("symbol gap closes: min |h_p| = " + format_double(tr.min_abs) +
                                  " at k = " + format_double(tr.k_at_min),
                              tr.min_abs, tr.k_at_min);
    }
    total += *step;
    ka = kb;
    ha = hb;
  }

  WindingResult out;
  out.nu = static_cast<int>(std::lround(total / kTwoPi));
  out.min_abs_h = tr.min_abs;
  out.k_at_min = tr.k_at_min;
  out.samples_used = tr.evaluations;
  return out;
}

TptResult tpt_locator(const NetworkParams& params, double gamma_lo, double gamma_hi, int scan_points) {
  params.validate();
  if (params.detuning != 0.0) throw UnsupportedRegimeError("TPT locator requires delta_omega = 0");
  if (!(gamma_hi > gamma_lo) || scan_points < 2) throw ParameterError("TPT scan needs gamma_hi > gamma_lo and at least 2 points");

  auto nu_at = [&](double g) -> std::optional<int> {
    try {
      return winding_number(params.with_pump(g)).nu;
    } catch (const AtTransitionError&) {
      return std::nullopt;
    }
  };

  std::optional<int> prev_nu;
  double prev_gamma = gamma_lo;
  for (int i = 0; i < scan_points; ++i) {
    const double g = gamma_lo + (gamma_hi - gamma_lo) * i / (scan_points - 1);
    const auto nu = nu_at(g);
    if (!nu) continue;
    if (prev_nu && *nu != *prev_nu) {
      double lo = prev_gamma;
      double hi = g;
      const double tol = 1e-6 * rate_scale(params);
      while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        const auto m = nu_at(mid);
        if (!m) return {mid, *prev_nu, *nu};  // landed on the gap closing itself
        (*m == *prev_nu ? lo : hi) = mid;
      }
      return {0.5 * (lo + hi), *prev_nu, *nu};
    }
    prev_nu = nu;
    prev_gamma = g;
  }
  throw NotFoundError("winding number does not change for gamma_pump in [" + format_double(gamma_lo) + ", " +
                      format_double(gamma_hi) + "]");
}

std::string symbol_curve_csv(const SymbolCurve& curve) {
  std::ostringstream out;
  out << "k,re_h,im_h\n";
  for (std::size_t i = 0; i < curve.k.size(); ++i) {
    out << format_double(curve.k[i]) << ',' << format_double(curve.h[i].real()) << ','
        << format_double(curve.h[i].imag()) << '\n';
  }
  return out.str();
}

nlohmann::json to_json_value(const WindingResult& w) {
  return {{"nu", w.nu}, {"min_abs_h", w.min_abs_h}, {"k_at_min", w.k_at_min}, {"samples_used", w.samples_used}};
}

}  // namespace nrnet

#include "nrnet/scattering.hpp"

#include <cmath>
#include <sstream>

#include "nrnet/errors.hpp"
#include "nrnet/format.hpp"
#include "nrnet/lattice.hpp"

namespace nrnet {

namespace {

// |γ+Γ−κ+2iΔω| and |γ−Γ−κ+2iΔω|
std::pair<double, double> decay_moduli(const NetworkParams& p) {
  const double upper = std::hypot(p.pump_rate + p.coupling_rate - p.io_rate, 2.0 * p.detuning);
  const double lower = std::hypot(p.pump_rate - p.coupling_rate - p.io_rate, 2.0 * p.detuning);
  return {upper, lower};
}

void require_nonsingular(const NetworkParams& p) {
  if (diagonal_rate(p) == Complex(0.0)) {
    throw SingularityError("dynamic matrix is singular: gamma_pump = kappa + Gamma with delta_omega = 0");
  }
}

double analytic_gain(const NetworkParams& p, int separation) {
  const auto [upper, lower] = decay_moduli(p);
  if (upper == 0.0 || lower == 0.0) return std::numeric_limits<double>::infinity();
  const double b = 4.0 * p.io_rate * p.coupling_rate / (upper * lower);
  const double rate = std::log(upper / lower) - 1.0 / p.coherence_length;
  const double mag = b * std::exp(separation * rate);
  return mag * mag;
}

}  // namespace

ScatteringMatrix scattering_numeric(const NetworkParams& params) {
  params.validate();
  require_nonsingular(params);
  const int n = params.n_cavities;
  std::vector<Complex> mu(static_cast<std::size_t>(n));
  for (int m = 0; m < n; ++m) mu[m] = coupling_coefficient(params, m);

  // First column of M⁻¹; the inverse of a lower-triangular Toeplitz matrix is
  // again lower-triangular Toeplitz.
  std::vector<Complex> c(static_cast<std::size_t>(n));
  c[0] = 1.0 / mu[0];
  for (int m = 1; m < n; ++m) {
    Complex s = 0.0;
    for (int k = 1; k <= m; ++k) s += mu[k] * c[m - k];
    c[m] = -s / mu[0];
  }

  CMatrix s = CMatrix::Identity(n, n);
  for (int j = 0; j < n; ++j) {
    for (int l = 0; l <= j; ++l) s(j, l) += params.io_rate * c[j - l];
  }
  return {std::move(s), params};
}

double inverse_decay_length(const NetworkParams& params) {
  const auto [upper, lower] = decay_moduli(params);
  if (upper == 0.0) throw SingularityError("gamma_pump + Gamma - kappa = 0 with delta_omega = 0");
  if (lower == 0.0) throw SingularityError("gamma_pump - Gamma - kappa = 0 with delta_omega = 0");
  return std::log(upper / lower);
}

double growth_rate(const NetworkParams& params) {
  return inverse_decay_length(params) - 1.0 / params.coherence_length;
}

AnalyticScattering scattering_analytic(const NetworkParams& params) {
  params.validate();
  const auto [upper, lower] = decay_moduli(params);
  const double inv_xi = inverse_decay_length(params);
  AnalyticScattering out;
  out.prefactor = 4.0 * params.io_rate * params.coupling_rate / (upper * lower);
  out.xi = inv_xi == 0.0 ? std::numeric_limits<double>::infinity() : 1.0 / inv_xi;

  const double diag = std::hypot(params.pump_rate + params.io_rate - params.coupling_rate, 2.0 * params.detuning) / lower;
  const double rate = inv_xi - 1.0 / params.coherence_length;
  const int n = params.n_cavities;
  out.magnitudes = RMatrix::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    out.magnitudes(j, j) = diag;
    for (int l = 0; l < j; ++l) out.magnitudes(j, l) = out.prefactor * std::exp((j - l) * rate);
  }
  return out;
}

SvdScattering scattering_svd(const NetworkParams& params) {
  params.validate();
  require_nonsingular(params);
  const auto m = build_dynamic_matrix(params);
  SvdScattering out{{CMatrix(), params}, linalg::svd(m.entries)};
  const auto& t = out.svd;
  const RVector inv = t.singular_values.cwiseInverse();
  out.scattering.entries = CMatrix::Identity(params.n_cavities, params.n_cavities) +
                           params.io_rate * (t.right_vectors * inv.cast<Complex>().asDiagonal() * t.left_vectors.adjoint());
  return out;
}

double amplification_threshold(const NetworkParams& params) {
  params.validate();
  if (params.detuning != 0.0) {
    throw UnsupportedRegimeError("amplification threshold is defined at delta_omega = 0; use gain_bandwidth for detuned gain");
  }
  const double half_inverse = std::isinf(params.coherence_length) ? 0.0 : 0.5 / params.coherence_length;
  return params.io_rate + params.coupling_rate * std::tanh(half_inverse);
}

GainProfile gain_bandwidth(const NetworkParams& params, int j, int l, const std::vector<double>& grid) {
  params.validate();
  if (j <= l) throw ParameterError("gain_bandwidth needs j > l (downstream output)");
  if (j >= params.n_cavities || l < 0) throw ParameterError("site index out of range");
  if (grid.size() < 2) throw ParameterError("detuning grid needs at least two points");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double mirror = grid[grid.size() - 1 - i];
    if (std::abs(grid[i] + mirror) > 1e-12 * std::max(1.0, std::abs(grid[i]))) {
      throw ParameterError("detuning grid must be symmetric about 0");
    }
    if (i > 0 && !(grid[i] > grid[i - 1])) throw ParameterError("detuning grid must be increasing");
  }

  const int sep = j - l;
  auto gain_at = [&](double delta) { return analytic_gain(params.with_detuning(delta), sep); };

  GainProfile out;
  out.detuning = grid;
  out.gain.reserve(grid.size());
  for (double d : grid) out.gain.push_back(gain_at(d));
  out.peak_gain = gain_at(0.0);
  const double half = out.peak_gain / 2.0;

  // Positive half of the grid, walked outward from the centre.
  std::vector<double> outward{0.0};
  for (double d : grid) {
    if (d > 0.0) outward.push_back(d);
  }
  std::size_t hit = 0;
  for (std::size_t i = 1; i < outward.size(); ++i) {
    if (gain_at(outward[i]) < half) {
      hit = i;
      break;
    }
  }
  if (hit == 0) {
    out.diagnostic = "gain never falls below half maximum on the grid; widen the detuning range";
    return out;
  }
  double lo = outward[hit - 1];
  double hi = outward[hit];
  while (hi - lo > 1e-9) {
    const double mid = 0.5 * (lo + hi);
    (gain_at(mid) >= half ? lo : hi) = mid;
  }
  out.fwhm = lo + hi;  // twice the half width, by symmetry
  if (hit == 1) {
    out.diagnostic = "half maximum lies within the first grid step; grid too coarse to resolve the bandwidth";
  }
  return out;
}

nlohmann::json to_json_value(const ScatteringMatrix& s) {
  nlohmann::json rows = nlohmann::json::array();
  for (Index j = 0; j < s.entries.rows(); ++j) {
    nlohmann::json row = nlohmann::json::array();
    for (Index l = 0; l < s.entries.cols(); ++l) row.push_back({s.entries(j, l).real(), s.entries(j, l).imag()});
    rows.push_back(std::move(row));
  }
  return {{"params", s.params}, {"entries", std::move(rows)}};
}

std::string magnitudes_csv(const ScatteringMatrix& s) {
  std::ostringstream out;
  for (Index j = 0; j < s.entries.rows(); ++j) {
    for (Index l = 0; l < s.entries.cols(); ++l) {
      if (l) out << ',';
      out << format_double(std::abs(s.entries(j, l)));
    }
    out << '\n';
  }
  return out.str();
}

std::string gain_profile_csv(const GainProfile& g) {
  std::ostringstream out;
  out << "delta_omega,gain\n";
  for (std::size_t i = 0; i < g.detuning.size(); ++i) {
    out << format_double(g.detuning[i]) << ',' << format_double(g.gain[i]) << '\n';
  }
  return out.str();
}

}  // namespace nrnet

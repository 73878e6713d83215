#include "nrnet/edge_modes.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "nrnet/errors.hpp"
#include "nrnet/format.hpp"
#include "nrnet/lattice.hpp"
#include "nrnet/scattering.hpp"
#include "nrnet/svd.hpp"

namespace nrnet {

namespace {

constexpr int kProbeExtra = 10;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double smallest_singular_value(const NetworkParams& params) {
  const auto t = linalg::svd(build_dynamic_matrix(params).entries);
  return t.singular_values(t.singular_values.size() - 1);
}

double fit_or_nan(const CVector& v) {
  try {
    return localization_fit(v);
  } catch (const FitDegenerateError&) {
    return kNaN;
  }
}

}  // namespace

CMatrix auxiliary_matrix(const NetworkParams& params) {
  const CMatrix m = build_dynamic_matrix(params).entries;
  const Index n = m.rows();
  CMatrix aux = CMatrix::Zero(2 * n, 2 * n);
  for (Index j = 0; j < n; ++j) {
    for (Index l = 0; l < n; ++l) {
      aux(2 * j, 2 * l + 1) = m(j, l);
      aux(2 * j + 1, 2 * l) = std::conj(m(l, j));
    }
  }
  return aux;
}

RVector auxiliary_eigenvalues(const NetworkParams& params) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(auxiliary_matrix(params), Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

double edge_localization_length(const NetworkParams& params) {
  const double rate = growth_rate(params);
  return rate == 0.0 ? std::numeric_limits<double>::infinity() : 1.0 / rate;
}

EdgeReport auxiliary_spectrum(const NetworkParams& params) {
  params.validate();
  const int n = params.n_cavities;
  const auto t = linalg::svd(build_dynamic_matrix(params).entries);
  EdgeReport r;
  r.singular_values = t.singular_values;
  r.lambda_min = t.singular_values(n - 1);
  r.lambda_next = t.singular_values(n - 2);
  r.lambda_min_probe = smallest_singular_value(params.with_size(n + kProbeExtra));
  r.zero_mode = (n + kProbeExtra) * r.lambda_min_probe < n * r.lambda_min;
  r.right_edge_vector = t.right_vectors.col(n - 1);
  r.left_edge_vector = t.left_vectors.col(n - 1);
  r.xi_prime_fit_left = fit_or_nan(r.left_edge_vector);
  r.xi_prime_fit_right = fit_or_nan(r.right_edge_vector);

  r.xi_prime_analytic = kNaN;
  try {
    const double inv_xi = inverse_decay_length(params);
    r.zero_mode_analytic = inv_xi > 0.0 && 1.0 / inv_xi < params.coherence_length;
    if (params.detuning == 0.0 && r.zero_mode_analytic) r.xi_prime_analytic = edge_localization_length(params);
  } catch (const SingularityError&) {
    r.zero_mode_analytic = false;
  }
  return r;
}

AnalyticEdgeState analytic_edge_state(const NetworkParams& params) {
  params.validate();
  if (params.detuning != 0.0) throw NoEdgeStateError("analytic edge state is defined at delta_omega = 0 only");
  const double inv_xi = inverse_decay_length(params);
  const double rate = inv_xi - 1.0 / params.coherence_length;
  if (!(inv_xi > 0.0) || !(rate > 0.0)) {
    throw NoEdgeStateError("no edge state: localization length xi' = " + format_double(1.0 / rate) + " is not positive");
  }
  const int n = params.n_cavities;
  AnalyticEdgeState s;
  s.xi_prime = 1.0 / rate;
  s.n0 = std::sqrt(-std::expm1(-2.0 * rate) / -std::expm1(-2.0 * n * rate));
  s.u_profile.resize(n);
  s.v_profile.resize(n);
  for (int i = 0; i < n; ++i) {
    s.u_profile(i) = s.n0 * std::exp(-i * rate);
    s.v_profile(i) = s.n0 * std::exp(-(n - 1 - i) * rate);
  }
  const double g = params.pump_rate + params.coupling_rate - params.io_rate;
  s.lambda_pm = params.coupling_decay(1) * g * g / (4.0 * params.coupling_rate) * s.n0 * s.n0 * std::exp(-n * rate);
  return s;
}

RMatrix scattering_from_edge(const NetworkParams& params) {
  const auto s = analytic_edge_state(params);
  const int n = params.n_cavities;
  RMatrix out = RMatrix::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    for (int l = 0; l <= j; ++l) out(j, l) = params.io_rate * s.v_profile(j) * s.u_profile(l) / s.lambda_pm;
  }
  return out;
}

RMatrix edge_rank_one(const EdgeReport& report, double io_rate) {
  const Index n = report.right_edge_vector.size();
  RMatrix out = RMatrix::Zero(n, n);
  for (Index j = 0; j < n; ++j) {
    for (Index l = 0; l <= j; ++l) {
      out(j, l) = io_rate * std::abs(report.right_edge_vector(j)) * std::abs(report.left_edge_vector(l)) / report.lambda_min;
    }
  }
  return out;
}

double localization_fit(const CVector& vector) {
  const Index n = vector.size();
  if (n == 0) throw FitDegenerateError("empty vector");
  const RVector mag = vector.cwiseAbs();
  Index peak = 0;
  const double top = mag.maxCoeff(&peak);
  if (!(top > 0.0)) throw FitDegenerateError("zero vector");
  const bool left = peak < n - 1 - peak || (peak == n - 1 - peak && peak < n / 2);

  std::vector<double> xs;
  std::vector<double> ys;
  for (Index d = 0; d < (n + 1) / 2; ++d) {
    const double v = mag(left ? d : n - 1 - d);
    if (v < 1e-12 * top) continue;
    xs.push_back(static_cast<double>(d));
    ys.push_back(std::log(v));
  }
  if (xs.size() < 4) throw FitDegenerateError("fewer than 4 usable points in the localization window");

  const double count = static_cast<double>(xs.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= count;
  my /= count;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  const double slope = sxy / sxx;
  if (!(slope < 0.0)) return std::numeric_limits<double>::infinity();
  return -1.0 / slope;
}

double zero_mode_onset(const NetworkParams& params, double gamma_lo, double gamma_hi, int scan_points,
                       double tolerance) {
  params.validate();
  if (!(gamma_hi > gamma_lo) || scan_points < 2) throw ParameterError("zero-mode scan needs gamma_hi > gamma_lo and at least 2 points");
  auto flag = [&](double g) { return auxiliary_spectrum(params.with_pump(g)).zero_mode; };

  double prev = gamma_lo;
  bool prev_flag = flag(gamma_lo);
  for (int i = 1; i < scan_points; ++i) {
    const double g = gamma_lo + (gamma_hi - gamma_lo) * i / (scan_points - 1);
    const bool f = flag(g);
    if (!prev_flag && f) {
      double lo = prev;
      double hi = g;
      while (hi - lo > tolerance) {
        const double mid = 0.5 * (lo + hi);
        (flag(mid) ? hi : lo) = mid;
      }
      return 0.5 * (lo + hi);
    }
    prev = g;
    prev_flag = f;
  }
  throw NotFoundError("zero mode never appears for gamma_pump in [" + format_double(gamma_lo) + ", " +
                      format_double(gamma_hi) + "]");
}

nlohmann::json to_json_value(const EdgeReport& r) {
  auto vec = [](const CVector& v) {
    nlohmann::json a = nlohmann::json::array();
    for (Index i = 0; i < v.size(); ++i) a.push_back({v(i).real(), v(i).imag()});
    return a;
  };
  auto number = [](double x) { return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr); };
  nlohmann::json sv = nlohmann::json::array();
  for (Index i = 0; i < r.singular_values.size(); ++i) sv.push_back(r.singular_values(i));
  return {{"singular_values", sv},
          {"lambda_min", r.lambda_min},
          {"lambda_next", r.lambda_next},
          {"lambda_min_probe", r.lambda_min_probe},
          {"zero_mode", r.zero_mode},
          {"zero_mode_analytic", r.zero_mode_analytic},
          {"xi_prime_fit_left", number(r.xi_prime_fit_left)},
          {"xi_prime_fit_right", number(r.xi_prime_fit_right)},
          {"xi_prime_analytic", number(r.xi_prime_analytic)},
          {"right_edge_vector", vec(r.right_edge_vector)},
          {"left_edge_vector", vec(r.left_edge_vector)}};
}

std::string spectrum_csv(const std::vector<double>& gammas, const std::vector<RVector>& spectra) {
  std::ostringstream out;
  out << "gamma";
  const Index n = spectra.empty() ? 0 : spectra.front().size();
  for (Index i = 1; i <= n; ++i) out << ",lambda_" << i;
  out << '\n';
  for (std::size_t g = 0; g < gammas.size(); ++g) {
    out << format_double(gammas[g]);
    for (Index i = 0; i < spectra[g].size(); ++i) out << ',' << format_double(spectra[g](i));
    out << '\n';
  }
  return out.str();
}

}  // namespace nrnet

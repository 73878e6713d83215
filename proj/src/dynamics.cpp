#include "nrnet/dynamics.hpp"

#include <cmath>
#include <sstream>

#include <boost/numeric/odeint.hpp>
#include <unsupported/Eigen/MatrixFunctions>

#include "nrnet/format.hpp"

namespace nrnet {

namespace {

using State = std::vector<Complex>;

void check_drive(const NetworkParams& params, const DriveSpec& drive) {
  if (drive.drive_site < 0 || drive.drive_site >= params.n_cavities) {
    throw ParameterError("drive site out of range");
  }
  if (!std::isfinite(drive.detuning) || !std::isfinite(std::abs(drive.amplitude))) {
    throw ParameterError("drive must be finite");
  }
}

}  // namespace

double max_stable_step(const NetworkParams& params) {
  const double reach = std::min(params.coherence_length, static_cast<double>(params.n_cavities));
  return 0.1 / (std::abs(diagonal_rate(params)) + params.coupling_rate * reach);
}

TimeSeries integrate(const NetworkParams& params, const DriveSpec& drive, double t_max, double dt, int stride) {
  params.validate();
  check_drive(params, drive);
  const auto report = stability(params);
  if (!report.stable) {
    throw UnstableError("refusing to integrate unstable parameters: gamma_pump >= kappa + Gamma (margin " +
                            format_double(report.margin) + ")",
                        report);
  }
  const double limit = max_stable_step(params);
  if (!(dt > 0.0) || dt > limit) {
    throw ParameterError("time step " + format_double(dt) + " outside (0, " + format_double(limit) + "]");
  }
  if (!(t_max > 0.0) || !std::isfinite(t_max)) throw ParameterError("t_max must be positive");
  if (stride < 1) throw ParameterError("stride must be at least 1");

  const CMatrix h = build_dynamic_matrix(params.with_detuning(0.0)).entries;
  const int n = params.n_cavities;
  const double root_kappa = std::sqrt(params.io_rate);
  const auto steps = static_cast<long>(std::ceil(t_max / dt - 1e-9));

  auto rhs = [&](const State& x, State& dxdt, double t) {
    for (int j = 0; j < n; ++j) {
      Complex s = 0.0;
      for (int l = 0; l <= j; ++l) s += h(j, l) * x[l];
      dxdt[j] = s;
    }
    dxdt[drive.drive_site] -= root_kappa * drive.amplitude * std::polar(1.0, -drive.detuning * t);
  };

  std::vector<long> stored;
  for (long i = 0; i <= steps; i += stride) stored.push_back(i);
  if (stored.back() != steps) stored.push_back(steps);

  TimeSeries out;
  out.drive = drive;
  out.io_rate = params.io_rate;
  out.times.reserve(stored.size());
  out.amplitudes = CMatrix::Zero(n, static_cast<Index>(stored.size()));
  out.outputs = CMatrix::Zero(n, static_cast<Index>(stored.size()));

  State x(static_cast<std::size_t>(n), Complex(0.0));
  boost::numeric::odeint::runge_kutta4<State> stepper;
  std::size_t next = 0;
  for (long i = 0; i <= steps; ++i) {
    const double t = static_cast<double>(i) * dt;
    if (next < stored.size() && stored[next] == i) {
      const auto col = static_cast<Index>(next);
      out.times.push_back(t);
      for (int j = 0; j < n; ++j) {
        out.amplitudes(j, col) = x[j];
        out.outputs(j, col) = root_kappa * x[j];
      }
      out.outputs(drive.drive_site, col) += drive.amplitude * std::polar(1.0, -drive.detuning * t);
      ++next;
    }
    if (i < steps) stepper.do_step(rhs, x, t, dt);
  }
  return out;
}

CVector analytic_trajectory(const NetworkParams& params, const DriveSpec& drive, double t) {
  params.validate();
  check_drive(params, drive);
  const CMatrix h = build_dynamic_matrix(params.with_detuning(0.0)).entries;
  const int n = params.n_cavities;
  CVector rhs = CVector::Zero(n);
  rhs(drive.drive_site) = std::sqrt(params.io_rate) * drive.amplitude;
  const CMatrix shifted = h + Complex(0.0, drive.detuning) * CMatrix::Identity(n, n);
  const CVector x = shifted.triangularView<Eigen::Lower>().solve(rhs);
  const CMatrix propagator = (h * t).exp();
  return x * std::polar(1.0, -drive.detuning * t) - propagator * x;
}

Complex steady_state_gain(const TimeSeries& series, int probe_site) {
  const Index n = series.outputs.rows();
  const Index count = series.outputs.cols();
  if (probe_site < 0 || probe_site >= n) throw ParameterError("probe site out of range");
  if (series.drive.amplitude == Complex(0.0)) throw ParameterError("gain undefined for zero drive amplitude");
  const Index window = std::max<Index>(1, count / 10);
  if (2 * window > count) throw ConvergenceError("time series too short for two averaging windows", INFINITY);

  auto average = [&](Index begin) {
    Complex s = 0.0;
    for (Index c = begin; c < begin + window; ++c) {
      const Complex input = series.drive.amplitude * std::polar(1.0, -series.drive.detuning * series.times[c]);
      s += series.outputs(probe_site, c) / input;
    }
    return s / static_cast<double>(window);
  };
  const Complex last = average(count - window);
  const Complex prev = average(count - 2 * window);
  const double change = std::abs(last - prev);
  if (change == 0.0 || change <= 1e-8 * std::abs(last)) return last;
  throw ConvergenceError("steady state not reached: relative change " +
                             format_double(change / std::abs(last)) + " between the last two windows",
                         change / std::abs(last));
}

std::string time_series_csv(const TimeSeries& series) {
  std::ostringstream out;
  out << 't';
  for (Index j = 1; j <= series.amplitudes.rows(); ++j) out << ",re_" << j << ",im_" << j;
  out << '\n';
  for (std::size_t c = 0; c < series.times.size(); ++c) {
    out << format_double(series.times[c]);
    for (Index j = 0; j < series.amplitudes.rows(); ++j) {
      const Complex a = series.amplitudes(j, static_cast<Index>(c));
      out << ',' << format_double(a.real()) << ',' << format_double(a.imag());
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace nrnet

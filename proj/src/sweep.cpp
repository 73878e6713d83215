#include "nrnet/sweep.hpp"

#include <atomic>
#include <cmath>
#include <functional>
#include <mutex>
#include <sstream>
#include <thread>

#include "nrnet/edge_modes.hpp"
#include "nrnet/errors.hpp"
#include "nrnet/lattice.hpp"
#include "nrnet/scattering.hpp"
#include "nrnet/topology.hpp"

namespace nrnet {

namespace {

const std::set<std::string> kAxisNames{"n", "gamma_pump", "kappa", "Gamma", "zeta", "delta_omega", "phi"};

void set_field(NetworkParams& p, const std::string& name, double v) {
  if (name == "n") {
    p.n_cavities = static_cast<int>(std::lround(v));
  } else if (name == "gamma_pump") {
    p.pump_rate = v;
  } else if (name == "kappa") {
    p.io_rate = v;
  } else if (name == "Gamma") {
    p.coupling_rate = v;
  } else if (name == "zeta") {
    p.coherence_length = v;
  } else if (name == "delta_omega") {
    p.detuning = v;
  } else if (name == "phi") {
    p.phase_per_site = v;
  } else {
    throw ParameterError("unknown sweep axis '" + name + "'");
  }
}

void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& body) {
  const auto workers = static_cast<std::size_t>(std::max(1, threads));
  if (workers == 1 || count < 2) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < std::min(workers, count); ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

std::optional<double> finite_or_none(double v) {
  if (!std::isfinite(v)) return std::nullopt;
  return v;
}

template <class F>
std::optional<double> guarded(F&& f) {
  try {
    return finite_or_none(f());
  } catch (const Error&) {
    return std::nullopt;
  }
}

int out_site(const SweepGrid& g, const NetworkParams& p) {
  return g.out_site < 0 ? p.n_cavities - 1 : g.out_site;
}

// |S_out,in| from the closed form, used for contour root finding.
double analytic_magnitude(const NetworkParams& p, int separation) {
  const double b = 4.0 * p.io_rate * p.coupling_rate /
                   (std::hypot(p.pump_rate + p.coupling_rate - p.io_rate, 2.0 * p.detuning) *
                    std::hypot(p.pump_rate - p.coupling_rate - p.io_rate, 2.0 * p.detuning));
  return b * std::exp(separation * growth_rate(p));
}

// Largest Δω in [0, limit] with f(Δω) ≥ level, for f decreasing in |Δω|.
std::optional<double> detuning_crossing(const std::function<double(double)>& f, double level, double limit) {
  if (!(f(0.0) > level) || f(limit) >= level) return std::nullopt;
  double lo = 0.0;
  double hi = limit;
  while (hi - lo > 1e-9 * std::max(1.0, limit)) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) >= level ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

struct PlaneAxes {
  bool gamma_first = true;  // gamma_pump is axis1
  const SweepAxis* gamma = nullptr;
  const SweepAxis* other = nullptr;
};

std::optional<PlaneAxes> plane_with(const SweepGrid& g, const std::string& other) {
  if (g.axis1.name == "gamma_pump" && g.axis2.name == other) return PlaneAxes{true, &g.axis1, &g.axis2};
  if (g.axis2.name == "gamma_pump" && g.axis1.name == other) return PlaneAxes{false, &g.axis2, &g.axis1};
  return std::nullopt;
}

std::pair<double, double> oriented(const PlaneAxes& a, double gamma, double other) {
  return a.gamma_first ? std::pair{gamma, other} : std::pair{other, gamma};
}

std::vector<OverlayCurve> zeta_plane_overlays(const SweepGrid& g, const PlaneAxes& a, int threads) {
  const auto others = a.other->values();
  const double g_lo = a.gamma->min;
  const double g_hi = a.gamma->max;
  struct Row {
    std::optional<double> threshold, tpt, stability, onset;
  };
  std::vector<Row> rows(others.size());
  parallel_for(others.size(), threads, [&](std::size_t i) {
    const double z = others[i];
    const NetworkParams p = a.gamma_first ? cell_params(g, g_lo, z) : cell_params(g, z, g_lo);
    Row& r = rows[i];
    r.threshold = guarded([&] { return amplification_threshold(p); });
    r.stability = p.io_rate + p.coupling_rate;
    r.tpt = guarded([&] { return tpt_locator(p, g_lo, g_hi, 64).gamma; });
    const double onset_hi = std::min(g_hi, p.io_rate + p.coupling_rate - 1e-6);
    r.onset = guarded([&] { return onset_hi > g_lo ? zero_mode_onset(p, g_lo, onset_hi, 16, 1e-4) : NAN; });
  });

  std::vector<OverlayCurve> out{{"amplification_transition", {}},
                                {"topological_transition", {}},
                                {"stability_boundary", {}},
                                {"zero_mode_onset", {}}};
  for (std::size_t i = 0; i < others.size(); ++i) {
    const Row& r = rows[i];
    const std::optional<double>* values[] = {&r.threshold, &r.tpt, &r.stability, &r.onset};
    for (std::size_t c = 0; c < 4; ++c) {
      if (*values[c]) out[c].points.push_back(oriented(a, **values[c], others[i]));
    }
  }
  return out;
}

std::vector<OverlayCurve> detuning_plane_overlays(const SweepGrid& g, const PlaneAxes& a, int threads) {
  const auto gammas = a.gamma->values();
  const double limit = std::max(std::abs(a.other->min), std::abs(a.other->max));
  struct Row {
    std::optional<double> unity, half;
  };
  std::vector<Row> rows(gammas.size());
  parallel_for(gammas.size(), threads, [&](std::size_t i) {
    const NetworkParams p = a.gamma_first ? cell_params(g, gammas[i], 0.0) : cell_params(g, 0.0, gammas[i]);
    if (!stability(p).stable) return;
    const int sep = out_site(g, p) - g.in_site;
    auto mag = [&](double d) { return analytic_magnitude(p.with_detuning(d), sep); };
    try {
      rows[i].unity = detuning_crossing(mag, 1.0, limit);
      const double peak = mag(0.0);
      rows[i].half = detuning_crossing([&](double d) { return mag(d) * mag(d); }, peak * peak / 2.0, limit);
    } catch (const Error&) {
    }
  });

  auto contour = [&](std::optional<double> Row::*member, const std::string& name) {
    OverlayCurve c{name, {}};
    for (std::size_t i = 0; i < gammas.size(); ++i) {
      if (rows[i].*member) c.points.push_back(oriented(a, gammas[i], *(rows[i].*member)));
    }
    for (std::size_t i = gammas.size(); i-- > 0;) {
      if (rows[i].*member) c.points.push_back(oriented(a, gammas[i], -*(rows[i].*member)));
    }
    return c;
  };
  std::vector<OverlayCurve> out{contour(&Row::unity, "amplification_transition"), contour(&Row::half, "half_maximum")};

  const NetworkParams p = a.gamma_first ? cell_params(g, gammas.front(), 0.0) : cell_params(g, 0.0, gammas.front());
  const double edge = p.io_rate + p.coupling_rate;
  OverlayCurve stab{"stability_boundary", {}};
  if (edge >= a.gamma->min && edge <= a.gamma->max) {
    stab.points.push_back(oriented(a, edge, a.other->min));
    stab.points.push_back(oriented(a, edge, a.other->max));
  }
  out.push_back(std::move(stab));
  return out;
}

}  // namespace

std::vector<double> SweepAxis::values() const {
  std::vector<double> v(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    const double f = count == 1 ? 0.0 : static_cast<double>(i) / (count - 1);
    if (log_spaced) {
      v[i] = std::exp(std::log(min) + f * (std::log(max) - std::log(min)));
    } else {
      v[i] = min + f * (max - min);
    }
  }
  v.front() = min;
  v.back() = max;
  return v;
}

SweepAxis parse_axis(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream in(text);
  for (std::string piece; std::getline(in, piece, ':');) parts.push_back(piece);
  if (parts.size() != 4 && parts.size() != 5) throw ParameterError("axis must look like name:min:max:count[:log], got '" + text + "'");
  SweepAxis a;
  a.name = parts[0];
  try {
    std::size_t used = 0;
    a.min = std::stod(parts[1], &used);
    a.max = std::stod(parts[2], &used);
    a.count = std::stoi(parts[3], &used);
  } catch (const std::logic_error&) {
    throw ParameterError("malformed axis '" + text + "'");
  }
  if (parts.size() == 5) {
    if (parts[4] != "log" && parts[4] != "lin") throw ParameterError("axis spacing must be 'log' or 'lin'");
    a.log_spaced = parts[4] == "log";
  }
  return a;
}

Quantity parse_quantity(const std::string& name) {
  for (auto q : {Quantity::gain, Quantity::winding, Quantity::lambda_min, Quantity::zero_mode, Quantity::stability,
                 Quantity::threshold_curves}) {
    if (quantity_name(q) == name) return q;
  }
  throw ParameterError("unknown sweep quantity '" + name + "'");
}

std::string quantity_name(Quantity q) {
  switch (q) {
    case Quantity::gain: return "gain";
    case Quantity::winding: return "winding";
    case Quantity::lambda_min: return "lambda_min";
    case Quantity::zero_mode: return "zero_mode";
    case Quantity::stability: return "stability";
    case Quantity::threshold_curves: return "threshold_curves";
  }
  return "";
}

std::string phase_name(Phase p) {
  switch (p) {
    case Phase::attenuation: return "attenuation";
    case Phase::amplification: return "amplification";
    case Phase::unstable: return "unstable";
  }
  return "";
}

void SweepGrid::validate() const {
  for (const auto* a : {&axis1, &axis2}) {
    if (!kAxisNames.count(a->name)) throw ParameterError("sweep axis '" + a->name + "' is not a parameter field");
    if (a->count < 2) throw ParameterError("sweep axis '" + a->name + "' needs count >= 2");
    if (!std::isfinite(a->min) || !std::isfinite(a->max) || a->max < a->min) {
      throw ParameterError("sweep axis '" + a->name + "' needs finite min <= max");
    }
    if (a->log_spaced && !(a->min > 0.0)) throw ParameterError("log-spaced axis '" + a->name + "' needs min > 0");
  }
  if (axis1.name == axis2.name) throw ParameterError("sweep axes must differ");
  if (kappa_from_zeta && (axis1.name == "kappa" || axis2.name == "kappa")) {
    throw ParameterError("kappa cannot be swept while it is derived from zeta");
  }
  for (double v1 : {axis1.min, axis1.max}) {
    for (double v2 : {axis2.min, axis2.max}) {
      const NetworkParams p = cell_params(*this, v1, v2);
      const int out = out_site < 0 ? p.n_cavities - 1 : out_site;
      if (in_site < 0 || out >= p.n_cavities || in_site >= p.n_cavities) throw ParameterError("observable site out of range");
    }
  }
}

const std::vector<std::optional<double>>* PhaseDiagram::field(const std::string& name) const {
  for (std::size_t i = 0; i < field_names.size(); ++i) {
    if (field_names[i] == name) return &fields[i];
  }
  return nullptr;
}

NetworkParams cell_params(const SweepGrid& grid, double v1, double v2) {
  NetworkParams p = grid.fixed;
  set_field(p, grid.axis1.name, v1);
  set_field(p, grid.axis2.name, v2);
  if (grid.kappa_from_zeta) p.io_rate = unity_prefactor_io_rate(p.coupling_rate, p.coherence_length);
  p.validate();
  return p;
}

PhaseDiagram run_sweep(const SweepGrid& grid, int threads) {
  grid.validate();
  PhaseDiagram d;
  d.grid = grid;
  d.axis1_values = grid.axis1.values();
  d.axis2_values = grid.axis2.values();
  const std::size_t n1 = d.axis1_values.size();
  const std::size_t cells = n1 * d.axis2_values.size();

  const auto& q = grid.quantities;
  const bool want_gain = q.count(Quantity::gain) > 0;
  const bool want_winding = q.count(Quantity::winding) > 0;
  const bool want_lambda = q.count(Quantity::lambda_min) > 0;
  const bool want_zero = q.count(Quantity::zero_mode) > 0;
  const bool want_stability = q.count(Quantity::stability) > 0;
  if (want_gain) d.field_names.push_back("gain");
  if (want_winding) d.field_names.push_back("winding");
  if (want_lambda) d.field_names.push_back("lambda_min");
  if (want_zero) d.field_names.push_back("zero_mode");
  if (want_stability) d.field_names.push_back("stable");
  d.fields.assign(d.field_names.size(), std::vector<std::optional<double>>(cells));
  d.phase.assign(cells, Phase::attenuation);

  parallel_for(cells, threads, [&](std::size_t c) {
    const NetworkParams p = cell_params(grid, d.axis1_values[c % n1], d.axis2_values[c / n1]);
    const int out = out_site(grid, p);
    const auto stab = stability(p);
    std::optional<double> magnitude = guarded([&] { return std::abs(scattering_numeric(p).entries(out, grid.in_site)); });
    if (!stab.stable) {
      d.phase[c] = Phase::unstable;
    } else if (magnitude && *magnitude > 1.0) {
      d.phase[c] = Phase::amplification;
    }

    std::size_t f = 0;
    if (want_gain) d.fields[f++][c] = magnitude ? std::optional(*magnitude * *magnitude) : std::nullopt;
    if (want_winding) d.fields[f++][c] = guarded([&] { return static_cast<double>(winding_number(p).nu); });
    if (want_lambda || want_zero) {
      std::optional<EdgeReport> edge;
      try {
        edge = auxiliary_spectrum(p);
      } catch (const Error&) {
      }
      if (want_lambda) d.fields[f++][c] = edge ? finite_or_none(edge->lambda_min) : std::nullopt;
      if (want_zero) d.fields[f++][c] = edge ? std::optional(edge->zero_mode ? 1.0 : 0.0) : std::nullopt;
    }
    if (want_stability) d.fields[f++][c] = stab.stable ? 1.0 : 0.0;
  });

  if (q.count(Quantity::threshold_curves)) {
    if (auto a = plane_with(grid, "zeta")) {
      d.overlays = zeta_plane_overlays(grid, *a, threads);
    } else if (auto b = plane_with(grid, "delta_omega")) {
      d.overlays = detuning_plane_overlays(grid, *b, threads);
    }
  }
  return d;
}

}  // namespace nrnet

// nrnet: command-line front end for the nonreciprocal cavity-network simulator.

#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "nrnet/dynamics.hpp"
#include "nrnet/edge_modes.hpp"
#include "nrnet/emit.hpp"
#include "nrnet/errors.hpp"
#include "nrnet/format.hpp"
#include "nrnet/presets.hpp"
#include "nrnet/scattering.hpp"
#include "nrnet/sweep.hpp"
#include "nrnet/topology.hpp"
#include "nrnet/verify.hpp"

namespace {

using namespace nrnet;

struct Globals {
  std::string params_file;
  std::string out_dir;
  std::string format = "json";
  int threads = 1;
  std::uint64_t seed = 1;
  // per-field overrides of the parameter file
  std::optional<int> n;
  std::optional<double> gamma_pump, kappa, coupling, zeta, delta_omega, phi;
};

NetworkParams resolve_params(const Globals& g) {
  NetworkParams p;
  if (!g.params_file.empty()) p = load_params(g.params_file);
  if (g.n) p.n_cavities = *g.n;
  if (g.gamma_pump) p.pump_rate = *g.gamma_pump;
  if (g.kappa) p.io_rate = *g.kappa;
  if (g.coupling) p.coupling_rate = *g.coupling;
  if (g.zeta) p.coherence_length = *g.zeta;
  if (g.delta_omega) p.detuning = *g.delta_omega;
  if (g.phi) p.phase_per_site = *g.phi;
  p.validate();
  return p;
}

std::vector<Format> formats(const std::string& list) {
  std::vector<Format> out;
  std::stringstream in(list);
  for (std::string item; std::getline(in, item, ',');) out.push_back(parse_format(item));
  if (out.empty()) throw ParameterError("no output format given");
  return out;
}

// Writes to <out>/<name> when --out is set, stdout otherwise.
void deliver(const Globals& g, const std::string& name, const std::string& text) {
  if (g.out_dir.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
    return;
  }
  const auto path = std::filesystem::path(g.out_dir) / name;
  write_text_file(path, text);
  std::cerr << "wrote " << path.string() << '\n';
}

std::string text_for(Format f, const std::string& csv, const std::string& json) {
  if (f == Format::csv) return csv;
  if (f == Format::json) return json;
  throw ParameterError("svg output is only available for sweep and preset");
}

int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::parameter: return 2;
    case ErrorKind::singular: return 3;
    case ErrorKind::numerical: return 3;
    case ErrorKind::io: return 4;
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nonreciprocal cavity-network simulator"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--params", g.params_file, "JSON parameter file {n, gamma_pump, kappa, Gamma, zeta, delta_omega, phi}");
  app.add_option("--out", g.out_dir, "Output directory (stdout when omitted, except for preset and sweep)");
  app.add_option("--format", g.format, "csv, json or svg; a comma list for sweep and preset");
  app.add_option("--threads", g.threads, "Worker threads for sweeps")->check(CLI::PositiveNumber);
  app.add_option("--seed", g.seed, "Seed for randomized drivers (verify)");
  app.add_option("--n", g.n, "Override: number of cavities");
  app.add_option("--gamma", g.gamma_pump, "Override: pumping rate gamma");
  app.add_option("--kappa", g.kappa, "Override: input/output rate kappa");
  app.add_option("--Gamma", g.coupling, "Override: bus coupling Gamma");
  app.add_option("--zeta", g.zeta, "Override: coherence length zeta");
  app.add_option("--delta-omega", g.delta_omega, "Override: detuning");
  app.add_option("--phi", g.phi, "Override: phase per site");

  auto* scatter = app.add_subcommand("scatter", "Scattering matrix S = I + kappa M^-1");
  std::string method = "numeric";
  int bw_out = 0;
  int bw_in = 0;
  double bw_max = 2.0;
  int bw_count = 201;
  scatter->add_option("--method", method, "numeric, svd or analytic")->check(CLI::IsMember({"numeric", "svd", "analytic"}));
  scatter->add_option("--bandwidth-out", bw_out, "Gain profile output site j (1-based); enables the bandwidth scan");
  scatter->add_option("--bandwidth-in", bw_in, "Gain profile input site l (1-based)");
  scatter->add_option("--detuning-max", bw_max, "Half width of the detuning grid");
  scatter->add_option("--detuning-count", bw_count, "Points in the detuning grid")->check(CLI::Range(2, 1000000));

  auto* winding = app.add_subcommand("winding", "Winding number of the periodic-chain symbol");
  int samples = 4096;
  std::vector<double> tpt_range;
  bool curve = false;
  winding->add_option("--samples", samples, "Uniform k samples before refinement")->check(CLI::Range(16, 1 << 26));
  winding->add_option("--tpt", tpt_range, "Locate the transition in gamma over LO HI")->expected(2);
  winding->add_flag("--curve", curve, "Emit the sampled symbol curve instead (csv)");

  auto* edge = app.add_subcommand("edge", "Singular spectrum, zero modes and edge states");
  bool analytic_edge = false;
  std::vector<double> onset_range;
  edge->add_flag("--analytic", analytic_edge, "Include the analytic edge state and rank-one scattering");
  edge->add_option("--onset", onset_range, "Locate the zero-mode onset in gamma over LO HI")->expected(2);

  auto* dynamics = app.add_subcommand("dynamics", "Time-domain integration with a monochromatic drive");
  int drive_site = 1;
  int probe_site = 0;
  double t_max = 200.0;
  std::optional<double> dt;
  int stride = 100;
  double drive_re = 1.0;
  double drive_im = 0.0;
  dynamics->add_option("--drive-site", drive_site, "Driven cavity (1-based)");
  dynamics->add_option("--probe-site", probe_site, "Probe cavity (1-based, default N)");
  dynamics->add_option("--t-max", t_max, "Integration time");
  dynamics->add_option("--dt", dt, "Step (default: the stability bound)");
  dynamics->add_option("--stride", stride, "Store every stride-th step in the csv")->check(CLI::PositiveNumber);
  dynamics->add_option("--amplitude-re", drive_re, "Drive amplitude, real part");
  dynamics->add_option("--amplitude-im", drive_im, "Drive amplitude, imaginary part");

  auto* sweep = app.add_subcommand("sweep", "Two-parameter sweep and phase classification");
  std::string axis1 = "gamma_pump:-1.2:1.6:29";
  std::string axis2 = "zeta:0.5:10000:17:log";
  std::vector<std::string> quantities{"gain"};
  bool kappa_rule = false;
  int out_site = 0;
  int in_site = 1;
  std::string stem = "sweep";
  sweep->add_option("--axis1", axis1, "name:min:max:count[:log]");
  sweep->add_option("--axis2", axis2, "name:min:max:count[:log]");
  sweep->add_option("--quantities", quantities, "gain winding lambda_min zero_mode stability threshold_curves")->delimiter(',');
  sweep->add_flag("--kappa-from-zeta", kappa_rule, "Set kappa = Gamma e^{-1/zeta}/(1+e^{-1/zeta})^2 in every cell");
  sweep->add_option("--out-site", out_site, "Observable output site j (1-based, default N)");
  sweep->add_option("--in-site", in_site, "Observable input site l (1-based)");
  sweep->add_option("--name", stem, "File stem");

  auto* preset = app.add_subcommand("preset", "Run a named preset");
  std::string preset_name;
  preset->add_option("name", preset_name, "Preset")->required()->check(CLI::IsMember(preset_names()));

  auto* verify = app.add_subcommand("verify", "Randomized three-way scattering equivalence check");
  int draws = 200;
  double tolerance = 1e-9;
  verify->add_option("--draws", draws, "Random stable parameter sets")->check(CLI::PositiveNumber);
  verify->add_option("--tolerance", tolerance, "Pass threshold on the scaled magnitude error");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*preset) {
      const auto dir = g.out_dir.empty() ? std::filesystem::path(".") : std::filesystem::path(g.out_dir);
      for (const auto& path : run_preset(preset_name, dir, formats(g.format), g.threads)) {
        std::cerr << "wrote " << path.string() << '\n';
      }
      return 0;
    }
    if (*verify) {
      const auto s = run_equivalence(g.seed, draws);
      nlohmann::json j{{"seed", g.seed},
                       {"draws", s.draws},
                       {"numeric_vs_svd", s.worst.numeric_vs_svd},
                       {"numeric_vs_analytic", s.worst.numeric_vs_analytic},
                       {"svd_vs_analytic", s.worst.svd_vs_analytic},
                       {"worst_params", s.worst_params},
                       {"pass", s.worst.worst() <= tolerance}};
      deliver(g, "verify.json", j.dump(2));
      return s.worst.worst() <= tolerance ? 0 : 3;
    }

    const NetworkParams p = resolve_params(g);
    if (*sweep) {
      SweepGrid grid;
      grid.axis1 = parse_axis(axis1);
      grid.axis2 = parse_axis(axis2);
      grid.fixed = p;
      grid.quantities.clear();
      for (const auto& q : quantities) grid.quantities.insert(parse_quantity(q));
      grid.kappa_from_zeta = kappa_rule;
      grid.out_site = out_site > 0 ? out_site - 1 : -1;
      grid.in_site = in_site - 1;
      const auto diagram = run_sweep(grid, g.threads);
      const auto dir = g.out_dir.empty() ? std::filesystem::path(".") : std::filesystem::path(g.out_dir);
      for (auto f : formats(g.format)) std::cerr << "wrote " << emit(diagram, f, dir, stem).string() << '\n';
      return 0;
    }

    const Format f = parse_format(g.format);
    if (*scatter) {
      if (bw_out > 0) {
        std::vector<double> grid(static_cast<std::size_t>(bw_count));
        for (int i = 0; i < bw_count; ++i) grid[i] = -bw_max + 2.0 * bw_max * i / (bw_count - 1);
        const auto profile = gain_bandwidth(p, bw_out - 1, bw_in > 0 ? bw_in - 1 : 0, grid);
        nlohmann::json j{{"params", p},
                         {"peak_gain", profile.peak_gain},
                         {"fwhm", profile.fwhm ? nlohmann::json(*profile.fwhm) : nlohmann::json(nullptr)},
                         {"diagnostic", profile.diagnostic},
                         {"detuning", profile.detuning},
                         {"gain", profile.gain}};
        deliver(g, "bandwidth." + format_extension(f), text_for(f, gain_profile_csv(profile), j.dump(2)));
        if (!profile.diagnostic.empty()) std::cerr << "note: " << profile.diagnostic << '\n';
        return 0;
      }
      ScatteringMatrix s;
      if (method == "numeric") {
        s = scattering_numeric(p);
      } else if (method == "svd") {
        s = scattering_svd(p).scattering;
      } else {
        const auto a = scattering_analytic(p);
        s = {a.magnitudes.cast<Complex>(), p};
        if (f == Format::json) {
          auto j = to_json_value(s);
          j["prefactor"] = a.prefactor;
          j["xi"] = std::isfinite(a.xi) ? nlohmann::json(a.xi) : nlohmann::json("inf");
          j["magnitudes_only"] = true;
          deliver(g, "scatter.json", j.dump(2));
          return 0;
        }
      }
      deliver(g, "scatter." + format_extension(f), text_for(f, magnitudes_csv(s), to_json_value(s).dump(2)));
      return 0;
    }
    if (*winding) {
      if (curve) {
        deliver(g, "symbol.csv", symbol_curve_csv(symbol_curve(p, samples)));
        return 0;
      }
      nlohmann::json j;
      if (!tpt_range.empty()) {
        const auto t = tpt_locator(p, tpt_range[0], tpt_range[1]);
        j = {{"gamma_tpt", t.gamma}, {"nu_below", t.nu_below}, {"nu_above", t.nu_above}};
        if (p.detuning == 0.0) j["amplification_threshold"] = amplification_threshold(p);
      } else {
        j = to_json_value(winding_number(p, samples));
      }
      deliver(g, "winding.json", j.dump(2));
      return 0;
    }
    if (*edge) {
      if (!onset_range.empty()) {
        nlohmann::json j{{"zero_mode_onset", zero_mode_onset(p, onset_range[0], onset_range[1])}};
        if (p.detuning == 0.0) j["amplification_threshold"] = amplification_threshold(p);
        deliver(g, "edge_onset.json", j.dump(2));
        return 0;
      }
      const auto r = auxiliary_spectrum(p);
      if (f == Format::csv) {
        deliver(g, "edge.csv", spectrum_csv({p.pump_rate}, {r.singular_values}));
        return 0;
      }
      auto j = to_json_value(r);
      if (analytic_edge) {
        const auto a = analytic_edge_state(p);
        j["analytic"] = {{"xi_prime", a.xi_prime}, {"lambda_pm", a.lambda_pm}, {"n0", a.n0}};
        const RMatrix approx = scattering_from_edge(p);
        j["analytic"]["s_n1_edge"] = approx(p.n_cavities - 1, 0);
      }
      deliver(g, "edge.json", j.dump(2));
      return 0;
    }
    if (*dynamics) {
      DriveSpec drive{drive_site - 1, Complex(drive_re, drive_im), p.detuning};
      const double step = dt ? *dt : max_stable_step(p);
      const auto series = integrate(p, drive, t_max, step, stride);
      const int probe = probe_site > 0 ? probe_site - 1 : p.n_cavities - 1;
      const Complex gain = steady_state_gain(series, probe);
      if (f == Format::csv) {
        deliver(g, "dynamics.csv", time_series_csv(series));
      } else {
        nlohmann::json j{{"params", p},
                         {"dt", step},
                         {"t_max", t_max},
                         {"drive_site", drive_site},
                         {"probe_site", probe + 1},
                         {"gain", {gain.real(), gain.imag()}},
                         {"gain_abs", std::abs(gain)}};
        if (diagonal_rate(p) != Complex(0.0)) {
          const Complex s = scattering_numeric(p).entries(probe, drive_site - 1);
          j["frequency_domain"] = {s.real(), s.imag()};
        }
        deliver(g, "dynamics.json", j.dump(2));
      }
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

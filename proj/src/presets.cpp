#include "nrnet/presets.hpp"

#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <sstream>

#include "nrnet/edge_modes.hpp"
#include "nrnet/errors.hpp"
#include "nrnet/format.hpp"
#include "nrnet/scattering.hpp"
#include "nrnet/svd.hpp"
#include "nrnet/svg.hpp"
#include "nrnet/lattice.hpp"

namespace nrnet {

namespace {

constexpr double kLongRange = 1e9;

NetworkParams chain(int n, double gamma) {
  NetworkParams p;
  p.n_cavities = n;
  p.coupling_rate = 1.0;
  p.io_rate = 0.25;
  p.pump_rate = gamma;
  p.coherence_length = kLongRange;
  return p;
}

std::vector<double> linspace(double lo, double hi, int count) {
  std::vector<double> v(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) v[i] = lo + (hi - lo) * i / (count - 1);
  return v;
}

std::string json_array(const std::vector<double>& v) {
  std::string out = "[";
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + (std::isfinite(v[i]) ? format_double(v[i]) : "null");
  return out + "]";
}

struct Rendered {
  std::string csv;
  std::string json;
  std::function<std::string()> svg;
};

Rendered scattering_preset(double gamma, const std::string& title) {
  const auto s = scattering_numeric(chain(20, gamma));
  Rendered r;
  r.csv = magnitudes_csv(s);
  r.json = to_json_value(s).dump(2) + "\n";
  r.svg = [s, title] {
    plot::Heatmap h;
    const int n = static_cast<int>(s.entries.rows());
    h.cols = n;
    h.rows = n;
    h.x = {"l (input)", 1, static_cast<double>(n), false};
    h.y = {"j (output)", 1, static_cast<double>(n), false};
    h.title = title;
    h.color_label = "log10 |S_jl|";
    for (int j = 0; j < n; ++j) {
      for (int l = 0; l < n; ++l) {
        const double m = std::abs(s.entries(j, l));
        h.values.emplace_back(m > 0.0 ? std::optional(std::log10(m)) : std::nullopt);
      }
    }
    return plot::heatmap_svg(h);
  };
  return r;
}

Rendered gain_vs_size() {
  const std::vector<int> sizes{5, 10, 20, 40};
  const auto gammas = linspace(0.0, 1.2, 121);
  std::vector<std::vector<double>> gains(sizes.size());
  for (std::size_t s = 0; s < sizes.size(); ++s) {
    for (double g : gammas) {
      const auto m = scattering_numeric(chain(sizes[s], g));
      gains[s].push_back(std::norm(m.entries(sizes[s] - 1, 0)));
    }
  }
  Rendered r;
  std::ostringstream csv;
  csv << "gamma";
  for (int n : sizes) csv << ",gain_n" << n;
  csv << '\n';
  for (std::size_t i = 0; i < gammas.size(); ++i) {
    csv << format_double(gammas[i]);
    for (const auto& g : gains) csv << ',' << format_double(g[i]);
    csv << '\n';
  }
  r.csv = csv.str();
  std::ostringstream json;
  json << "{\n  \"gamma\": " << json_array(gammas) << ",\n  \"threshold\": "
       << format_double(amplification_threshold(chain(2, 0.0))) << ",\n  \"stability_limit\": 1.25,\n  \"gain\": {";
  for (std::size_t s = 0; s < sizes.size(); ++s) {
    json << (s ? ",\n    " : "\n    ") << "\"" << sizes[s] << "\": " << json_array(gains[s]);
  }
  json << "\n  }\n}\n";
  r.json = json.str();
  r.svg = [=] {
    plot::LinePlot p;
    p.title = "gain |S_N1|^2 vs pumping";
    p.x = {"gamma", 0.0, 1.2, false};
    p.y = {"gain", 1e-4, 1e130, true};
    for (std::size_t s = 0; s < sizes.size(); ++s) {
      plot::Polyline line{"N = " + std::to_string(sizes[s]), {}};
      for (std::size_t i = 0; i < gammas.size(); ++i) line.points.emplace_back(gammas[i], gains[s][i]);
      p.series.push_back(std::move(line));
    }
    p.series.push_back({"threshold", {{0.25, 1e-4}, {0.25, 1e130}}});
    return plot::line_plot_svg(p);
  };
  return r;
}

Rendered spectrum_vs_gamma() {
  const int n = 40;
  const auto gammas = linspace(0.0, 1.2, 61);
  std::vector<RVector> spectra;
  std::vector<double> flags;
  for (double g : gammas) {
    const auto rep = auxiliary_spectrum(chain(n, g));
    spectra.push_back(rep.singular_values);
    flags.push_back(rep.zero_mode ? 1.0 : 0.0);
  }
  Rendered r;
  r.csv = spectrum_csv(gammas, spectra);
  std::ostringstream json;
  json << "{\n  \"gamma\": " << json_array(gammas) << ",\n  \"zero_mode\": " << json_array(flags)
       << ",\n  \"singular_values\": [";
  for (std::size_t i = 0; i < spectra.size(); ++i) {
    json << (i ? ",\n    " : "\n    ")
         << json_array(std::vector<double>(spectra[i].data(), spectra[i].data() + spectra[i].size()));
  }
  json << "\n  ]\n}\n";
  r.json = json.str();
  r.svg = [=] {
    double top = 0.0;
    for (const auto& s : spectra) top = std::max(top, s(0));
    plot::LinePlot p;
    p.title = "auxiliary spectrum +/- lambda_n";
    p.x = {"gamma", 0.0, 1.2, false};
    p.y = {"energy", -top, top, false};
    for (Index k = 0; k < n; ++k) {
      for (double sign : {1.0, -1.0}) {
        plot::Polyline line{(sign > 0 ? "+lambda_" : "-lambda_") + std::to_string(k + 1), {}};
        for (std::size_t i = 0; i < gammas.size(); ++i) line.points.emplace_back(gammas[i], sign * spectra[i](k));
        p.series.push_back(std::move(line));
      }
    }
    return plot::line_plot_svg(p);
  };
  return r;
}

Rendered edge_profiles() {
  const NetworkParams p = chain(40, 0.5);
  const auto rep = auxiliary_spectrum(p);
  const auto a = analytic_edge_state(p);
  const int n = p.n_cavities;
  Rendered r;
  std::ostringstream csv;
  csv << "site,u_numeric,v_numeric,u_analytic,v_analytic\n";
  for (int i = 0; i < n; ++i) {
    csv << i + 1 << ',' << format_double(std::abs(rep.left_edge_vector(i))) << ','
        << format_double(std::abs(rep.right_edge_vector(i))) << ',' << format_double(a.u_profile(i)) << ','
        << format_double(a.v_profile(i)) << '\n';
  }
  r.csv = csv.str();
  nlohmann::json j = to_json_value(rep);
  j["xi_prime_analytic"] = a.xi_prime;
  j["lambda_pm_analytic"] = a.lambda_pm;
  j["n0"] = a.n0;
  r.json = j.dump(2) + "\n";
  r.svg = [=] {
    plot::LinePlot plt;
    plt.title = "edge state profiles";
    plt.x = {"site", 1, static_cast<double>(n), false};
    plt.y = {"amplitude", 1e-12, 1.0, true};
    const std::pair<const char*, std::function<double(int)>> cols[] = {
        {"|U_l| numeric", [&](int i) { return std::abs(rep.left_edge_vector(i)); }},
        {"|V_j| numeric", [&](int i) { return std::abs(rep.right_edge_vector(i)); }},
        {"|U_l| analytic", [&](int i) { return a.u_profile(i); }},
        {"|V_j| analytic", [&](int i) { return a.v_profile(i); }}};
    for (const auto& [name, f] : cols) {
      plot::Polyline line{name, {}};
      for (int i = 0; i < n; ++i) line.points.emplace_back(i + 1, f(i));
      plt.series.push_back(std::move(line));
    }
    return plot::line_plot_svg(plt);
  };
  return r;
}

Rendered sweep_preset(const SweepGrid& grid, int threads) {
  auto d = std::make_shared<PhaseDiagram>(run_sweep(grid, threads));
  return {diagram_csv(*d), diagram_json(*d), [d] { return diagram_svg(*d); }};
}

}  // namespace

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names{"fig2a", "fig2b", "fig2c", "fig3a", "fig3b", "fig4a", "fig4b"};
  return names;
}

SweepGrid fig4a_grid() {
  SweepGrid g;
  g.axis1 = {"gamma_pump", -1.2, 1.6, 57, false};
  g.axis2 = {"zeta", 0.5, 1e4, 33, true};
  g.fixed = chain(40, 0.0);
  g.kappa_from_zeta = true;
  g.quantities = {Quantity::gain, Quantity::winding, Quantity::zero_mode, Quantity::stability, Quantity::threshold_curves};
  return g;
}

SweepGrid fig4b_grid() {
  SweepGrid g;
  g.axis1 = {"gamma_pump", 0.0, 1.2, 49, false};
  g.axis2 = {"delta_omega", -1.0, 1.0, 41, false};
  g.fixed = chain(40, 0.0);
  g.kappa_from_zeta = true;
  g.quantities = {Quantity::gain, Quantity::stability, Quantity::threshold_curves};
  return g;
}

std::vector<std::filesystem::path> run_preset(const std::string& name, const std::filesystem::path& out_dir,
                                              const std::vector<Format>& formats, int threads) {
  Rendered r;
  if (name == "fig2a") {
    r = scattering_preset(0.2, "|S_jl|, gamma = 0.2 (attenuation)");
  } else if (name == "fig2b") {
    r = scattering_preset(0.5, "|S_jl|, gamma = 0.5 (amplification)");
  } else if (name == "fig2c") {
    r = gain_vs_size();
  } else if (name == "fig3a") {
    r = spectrum_vs_gamma();
  } else if (name == "fig3b") {
    r = edge_profiles();
  } else if (name == "fig4a") {
    r = sweep_preset(fig4a_grid(), threads);
  } else if (name == "fig4b") {
    r = sweep_preset(fig4b_grid(), threads);
  } else {
    throw ParameterError("unknown preset '" + name + "'");
  }
  std::vector<std::filesystem::path> written;
  for (auto f : formats) {
    const auto path = out_dir / (name + "." + format_extension(f));
    switch (f) {
      case Format::csv: write_text_file(path, r.csv); break;
      case Format::json: write_text_file(path, r.json); break;
      case Format::svg: write_text_file(path, r.svg()); break;
    }
    written.push_back(path);
  }
  return written;
}

}  // namespace nrnet

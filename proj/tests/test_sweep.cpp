#include <doctest.h>

#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "helpers.hpp"
#include "nrnet/edge_modes.hpp"
#include "nrnet/emit.hpp"
#include "nrnet/errors.hpp"
#include "nrnet/presets.hpp"
#include "nrnet/scattering.hpp"
#include "nrnet/sweep.hpp"
#include "nrnet/topology.hpp"

using namespace nrnet;
using test::chain;

namespace {

std::size_t count_of(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto p = text.find(needle); p != std::string::npos; p = text.find(needle, p + 1)) ++n;
  return n;
}

SweepGrid small_grid() {
  SweepGrid g;
  g.axis1 = {"gamma_pump", -0.5, 1.5, 5, false};
  g.axis2 = {"zeta", 1.0, 4.0, 2, true};
  g.fixed = chain(10, 0.0);
  g.quantities = {Quantity::gain, Quantity::winding, Quantity::lambda_min, Quantity::zero_mode, Quantity::stability,
                  Quantity::threshold_curves};
  return g;
}

SweepGrid masked_grid() {
  SweepGrid g;
  g.axis1 = {"gamma_pump", 0.25, 1.25, 5, false};
  g.axis2 = {"delta_omega", -0.5, 0.5, 3, false};
  g.fixed = chain(8, 0.0);
  g.quantities = {Quantity::gain, Quantity::stability};
  return g;
}

}  // namespace

TEST_CASE("sweep cells match direct calls") {
  const auto g = small_grid();
  const auto d = run_sweep(g, 1);
  REQUIRE(d.cell_count() == 10);
  CHECK(d.field_names == std::vector<std::string>{"gain", "winding", "lambda_min", "zero_mode", "stable"});
  for (std::size_t c = 0; c < d.cell_count(); ++c) {
    const double gamma = d.axis1_values[c % 5];
    const double zeta = d.axis2_values[c / 5];
    const auto p = chain(10, gamma, zeta);
    CAPTURE(c);
    const double s = std::abs(scattering_numeric(p).entries(9, 0));
    CHECK(*(*d.field("gain"))[c] == s * s);
    const bool stable = gamma < 1.25;
    CHECK(*(*d.field("stable"))[c] == (stable ? 1.0 : 0.0));
    CHECK(d.phase[c] == (!stable ? Phase::unstable : s > 1.0 ? Phase::amplification : Phase::attenuation));
    CHECK(*(*d.field("winding"))[c] == winding_number(p).nu);
    const auto edge = auxiliary_spectrum(p);
    CHECK(*(*d.field("lambda_min"))[c] == edge.lambda_min);
    CHECK(*(*d.field("zero_mode"))[c] == (edge.zero_mode ? 1.0 : 0.0));
  }
  CHECK(d.axis2_values[1] == 4.0);
  CHECK(d.phase[0] == Phase::attenuation);
  CHECK(d.phase[3] == Phase::amplification);
  CHECK(d.phase[4] == Phase::unstable);
}

TEST_CASE("zeta-plane overlays") {
  const auto d = run_sweep(small_grid(), 1);
  REQUIRE(d.overlays.size() == 4);
  CHECK(d.overlays[0].name == "amplification_transition");
  CHECK(d.overlays[1].name == "topological_transition");
  CHECK(d.overlays[2].name == "stability_boundary");
  CHECK(d.overlays[3].name == "zero_mode_onset");
  for (std::size_t i = 0; i < 2; ++i) {
    const double zeta = d.axis2_values[i];
    const double star = 0.25 + std::tanh(0.5 / zeta);
    CHECK(d.overlays[0].points[i].first == doctest::Approx(star).epsilon(1e-14));
    CHECK(d.overlays[0].points[i].second == zeta);
    CHECK(d.overlays[1].points[i].first == tpt_locator(chain(10, 0.0, zeta), -0.5, 1.5, 64).gamma);
    CHECK(d.overlays[2].points[i].first == 1.25);
  }
}

TEST_CASE("thread count does not change the output") {
  const auto g = small_grid();
  const auto a = run_sweep(g, 1);
  const auto b = run_sweep(g, 4);
  CHECK(diagram_csv(a) == diagram_csv(b));
  CHECK(diagram_json(a) == diagram_json(b));
  CHECK(diagram_svg(a) == diagram_svg(b));
}

TEST_CASE("csv round trip is exact") {
  const auto d = run_sweep(small_grid(), 2);
  const auto t = parse_csv(diagram_csv(d));
  REQUIRE(t.rows.size() == d.cell_count());
  CHECK(t.header.front() == "gamma_pump");
  for (std::size_t c = 0; c < d.cell_count(); ++c) {
    CHECK(*t.number(c, "gamma_pump") == d.axis1_values[c % 5]);
    CHECK(*t.number(c, "zeta") == d.axis2_values[c / 5]);
    CHECK(t.rows[c][t.column("phase")] == phase_name(d.phase[c]));
    for (std::size_t f = 0; f < d.field_names.size(); ++f) CHECK(t.number(c, d.field_names[f]) == d.fields[f][c]);
  }
}

TEST_CASE("singular cells are masked, not dropped") {
  const auto d = run_sweep(masked_grid(), 1);
  REQUIRE(d.cell_count() == 15);
  const std::size_t singular = 1 * 5 + 4;  // γ = κ + Γ at Δω = 0
  const auto& gain = *d.field("gain");
  CHECK_FALSE(gain[singular]);
  for (std::size_t c = 0; c < 15; ++c) {
    if (c != singular) CHECK(gain[c]);
  }
  const auto t = parse_csv(diagram_csv(d));
  CHECK_FALSE(t.number(singular, "gain"));
  CHECK(t.rows[singular][t.column("phase")] == "unstable");
  const auto j = nlohmann::json::parse(diagram_json(d));
  CHECK(j["fields"]["gain"][1][4].is_null());
  CHECK(j["fields"]["gain"][1][3].is_number());
  CHECK(j["fields"]["stable"][1][4] == 0.0);
  CHECK(j["axes"][0]["values"].size() == 5);
}

TEST_CASE("svg heatmap structure") {
  const auto d = run_sweep(small_grid(), 1);
  const auto svg = diagram_svg(d);
  CHECK(count_of(svg, "<rect") == d.cell_count());
  CHECK(count_of(svg, "<polyline") == d.overlays.size());
  CHECK(svg.rfind("<svg", 0) != std::string::npos);
  CHECK(svg.find("</svg>") != std::string::npos);
}

TEST_CASE("detuning-plane half maximum narrows towards the stability edge") {
  auto g = fig4b_grid();
  g.axis1.count = 13;
  g.axis2.count = 5;
  const auto d = run_sweep(g, 1);
  const OverlayCurve* half = nullptr;
  for (const auto& o : d.overlays) {
    if (o.name == "half_maximum") half = &o;
  }
  REQUIRE(half != nullptr);
  REQUIRE(half->points.size() >= 4);
  // First half of the closed contour is the Δω > 0 branch in ascending γ.
  const std::size_t branch = half->points.size() / 2;
  for (std::size_t i = 1; i < branch; ++i) {
    CHECK(half->points[i].first > half->points[i - 1].first);
    CHECK(half->points[i].second < half->points[i - 1].second);
  }
  CHECK(half->points.front().second == -half->points.back().second);
}

TEST_CASE("axis parsing and grid validation") {
  const auto a = parse_axis("zeta:0.5:1e4:33:log");
  CHECK(a.name == "zeta");
  CHECK(a.count == 33);
  CHECK(a.log_spaced);
  const auto v = a.values();
  CHECK(v.front() == 0.5);
  CHECK(v.back() == 1e4);
  CHECK(v[16] == doctest::Approx(std::sqrt(0.5 * 1e4)).epsilon(1e-12));
  CHECK_FALSE(parse_axis("gamma_pump:0:1:3").log_spaced);
  CHECK_THROWS_AS(parse_axis("gamma_pump:0:1"), ParameterError);
  CHECK_THROWS_AS(parse_axis("gamma_pump:a:1:3"), ParameterError);
  CHECK_THROWS_AS(parse_axis("gamma_pump:0:1:3:cubic"), ParameterError);

  auto g = small_grid();
  g.axis1.name = "temperature";
  CHECK_THROWS_AS(g.validate(), ParameterError);
  g = small_grid();
  g.axis2.name = "gamma_pump";
  CHECK_THROWS_AS(g.validate(), ParameterError);
  g = small_grid();
  g.axis1.count = 1;
  CHECK_THROWS_AS(g.validate(), ParameterError);
  g = small_grid();
  g.axis2.min = 0.0;
  CHECK_THROWS_AS(g.validate(), ParameterError);
  g = small_grid();
  g.kappa_from_zeta = true;
  g.axis1.name = "kappa";
  g.axis1.min = 0.1;
  CHECK_THROWS_AS(g.validate(), ParameterError);
  g = small_grid();
  g.out_site = 10;
  CHECK_THROWS_AS(g.validate(), ParameterError);
  CHECK_THROWS_AS(parse_quantity("entropy"), ParameterError);
  CHECK(parse_quantity("lambda_min") == Quantity::lambda_min);
}

TEST_CASE("kappa follows zeta when requested") {
  auto g = small_grid();
  g.kappa_from_zeta = true;
  const auto p = cell_params(g, 0.3, 2.0);
  CHECK(p.io_rate == unity_prefactor_io_rate(1.0, 2.0));
  CHECK(p.pump_rate == 0.3);
  CHECK(p.coherence_length == 2.0);
}

TEST_CASE("emission to disk") {
  const auto dir = std::filesystem::temp_directory_path() / "nrnet_test_sweep";
  std::filesystem::remove_all(dir);
  const auto d = run_sweep(masked_grid(), 1);
  const auto path = emit(d, Format::csv, dir / "nested", "grid");
  CHECK(path.filename() == "grid.csv");
  std::ifstream in(path);
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  CHECK(text == diagram_csv(d));

  const auto blocker = dir / "file";
  std::ofstream(blocker) << "x";
  CHECK_THROWS_AS(emit(d, Format::json, blocker / "sub", "grid"), IoError);
  CHECK_THROWS_AS(parse_format("xml"), ParameterError);
  CHECK(parse_format("svg") == Format::svg);
  std::filesystem::remove_all(dir);
}

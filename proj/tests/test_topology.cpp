#include <doctest.h>

#include <numbers>

#include <Eigen/Eigenvalues>

#include "helpers.hpp"
#include "nrnet/errors.hpp"
#include "nrnet/lattice.hpp"
#include "nrnet/topology.hpp"

using namespace nrnet;
using test::chain;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

}  // namespace

TEST_CASE("long-range symbol at the lattice momenta") {
  // Σ_{m=1}^{N−1} e^{−2πiqm/N} = −1 for q ≠ 0.
  const auto p = chain(24, 0.5, INFINITY);
  const Complex mu0 = diagonal_rate(p);
  for (int q = 1; q < 24; ++q) CHECK(std::abs(symbol_value(p, kTwoPi * q / 24) - (mu0 + 1.0)) < 1e-12);
  CHECK(std::abs(symbol_value(p, 0.0) - (mu0 - 23.0)) < 1e-12);
}

TEST_CASE("decoupled symbol is the diagonal rate") {
  auto p = chain(10, 0.1, 2.0);
  p.coupling_rate = 0.0;
  for (double k : {0.0, 1.0, 4.0}) CHECK(symbol_value(p, k) == diagonal_rate(p));
  CHECK(winding_number(p).nu == 0);
  p.pump_rate = 0.25;
  CHECK_THROWS_AS(winding_number(p), AtTransitionError);
}

TEST_CASE("finite sum approaches the geometric series") {
  auto p = chain(200, 0.4, 5.0);
  p.phase_per_site = 0.3;
  const Complex w = std::polar(std::exp(-1.0 / 5.0), 0.3);
  for (int i = 0; i < 50; ++i) {
    const double k = kTwoPi * i / 50;
    const Complex z = w * std::polar(1.0, -k);
    const Complex mobius = diagonal_rate(p) - z / (1.0 - z);
    CHECK(std::abs(symbol_value_infinite(p, k) - mobius) < 1e-12);
    CHECK(std::abs(symbol_value(p, k) - mobius) < 1e-6);
  }
}

TEST_CASE("symbol curve is uniform and closes") {
  const auto c = symbol_curve(chain(30, 0.5, 2.0), 64);
  REQUIRE(c.k.size() == 64);
  CHECK(c.n_terms == 30);
  CHECK(c.k.front() == 0.0);
  CHECK(c.k[1] == doctest::Approx(kTwoPi / 64));
  CHECK(std::abs(symbol_value(c.params, kTwoPi) - c.h.front()) < 1e-12);
  CHECK_THROWS_AS(symbol_curve(c.params, 8), ParameterError);
  const auto csv = symbol_curve_csv(c);
  CHECK(csv.rfind("k,re_h,im_h\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 65);
}

TEST_CASE("winding on either side of the short-range transition") {
  CHECK(winding_number(chain(40, 1.0, 1.0)).nu == -1);
  CHECK(winding_number(chain(40, 0.3, 1.0)).nu == 0);
  CHECK(winding_number(chain(40, -0.74, INFINITY)).nu == -39);
  CHECK(winding_number(chain(40, -0.76, INFINITY)).nu == 0);
}

TEST_CASE("winding is independent of the phase and the sampling") {
  for (double gamma : {0.2, 0.6, 0.9, 1.1}) {
    auto p = chain(40, gamma, 1.5);
    const int nu = winding_number(p).nu;
    for (double phi : {0.4, 2.0, 5.5}) {
      p.phase_per_site = phi;
      CHECK(winding_number(p).nu == nu);
    }
    p.phase_per_site = 0.0;
    CHECK(winding_number(p, 97).nu == nu);
    CHECK(winding_number(p, 2 * 97).nu == nu);
  }
}

TEST_CASE("near-transition curve needs refined intervals") {
  const auto base = winding_number(chain(40, 0.7, 1.0), 64);
  CHECK(base.samples_used >= 64);
  const auto tight = winding_number(chain(40, 0.25 + std::tanh(0.5) + 1e-6, 1.0), 64);
  CHECK(tight.nu == -1);
  CHECK(tight.samples_used > 64);
  CHECK(tight.min_abs_h < 1e-5);
}

TEST_CASE("periodic eigenvalues are the symbol at lattice momenta") {
  auto p = chain(12, 0.3, 2.5);
  p.phase_per_site = 0.9;
  p.detuning = 0.2;
  const auto m = build_dynamic_matrix(p, Boundary::periodic).entries;
  const Eigen::ComplexEigenSolver<CMatrix> es(m);
  for (int q = 0; q < 12; ++q) {
    const Complex h = symbol_value(p, kTwoPi * q / 12);
    double best = INFINITY;
    for (Index i = 0; i < 12; ++i) best = std::min(best, std::abs(es.eigenvalues()(i) - h));
    CHECK(best < 1e-9);
  }
}

TEST_CASE("transition point, short range") {
  const auto t = tpt_locator(chain(40, 0.0, 1.0), 0.3, 1.2);
  CHECK(std::abs(t.gamma - 0.71212) < 1e-4);
  CHECK(std::abs(t.gamma - (0.25 + std::tanh(0.5))) < 1e-5);
  CHECK(t.nu_below == 0);
  CHECK(t.nu_above == -1);
}

TEST_CASE("transition point converges with chain length") {
  const double star = 0.25 + std::tanh(0.1);
  const auto small = tpt_locator(chain(40, 0.0, 5.0), 0.0, 1.0);
  const auto large = tpt_locator(chain(400, 0.0, 5.0), 0.0, 1.0);
  CHECK(std::abs(large.gamma - star) < 1e-5);
  CHECK(std::abs(small.gamma - star) < 1e-2);
  CHECK(std::abs(large.gamma - star) <= std::abs(small.gamma - star) + 1e-6);
}

TEST_CASE("transition point, long range") {
  const auto t = tpt_locator(chain(40, 0.0, INFINITY), -1.0, 0.0);
  CHECK(std::abs(t.gamma + 0.75) < 1e-3);
  CHECK(t.nu_below == 0);
  CHECK(t.nu_above == -39);
}

TEST_CASE("transition locator errors") {
  CHECK_THROWS_AS(tpt_locator(chain(40, 0.0, 1.0), 0.0, 0.5), NotFoundError);
  auto p = chain(40, 0.0, 1.0);
  p.detuning = 0.1;
  CHECK_THROWS_AS(tpt_locator(p, 0.3, 1.2), UnsupportedRegimeError);
  CHECK_THROWS_AS(tpt_locator(chain(40, 0.0, 1.0), 1.0, 0.5), ParameterError);
}

TEST_CASE("winding json") {
  const auto j = to_json_value(winding_number(chain(40, 1.0, 1.0)));
  CHECK(j["nu"] == -1);
  CHECK(j["min_abs_h"].get<double>() > 0.0);
}

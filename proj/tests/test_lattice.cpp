#include <doctest.h>

#include <random>
#include <set>

#include <Eigen/Eigenvalues>

#include "helpers.hpp"
#include "nrnet/errors.hpp"
#include "nrnet/lattice.hpp"

using namespace nrnet;
using test::chain;

namespace {

// Eigenvalues of a lower-triangular input. The transpose is upper triangular,
// which is already in Schur form, so the solver returns its diagonal.
CVector triangular_eigenvalues(const CMatrix& m) {
  Eigen::ComplexSchur<CMatrix> schur(m.transpose());
  return schur.matrixT().diagonal();
}

}  // namespace

TEST_CASE("three-site long-range chain") {
  const auto m = build_dynamic_matrix(chain(3, 0.5)).entries;
  for (int j = 0; j < 3; ++j) {
    CHECK(m(j, j).real() == doctest::Approx(-0.375).epsilon(1e-15));
    CHECK(m(j, j).imag() == 0.0);
    for (int l = 0; l < j; ++l) CHECK(std::abs(m(j, l) - Complex(-1.0)) < 1e-8);
    for (int l = j + 1; l < 3; ++l) CHECK(m(j, l) == Complex(0.0));
  }
}

TEST_CASE("zero coupling gives a multiple of the identity") {
  auto p = chain(6, 0.1, 2.0);
  p.coupling_rate = 0.0;
  p.detuning = 0.3;
  const auto m = build_dynamic_matrix(p).entries;
  const Complex mu0((0.1 - 0.25) / 2.0, 0.3);
  CHECK((m - mu0 * CMatrix::Identity(6, 6)).norm() == 0.0);
}

TEST_CASE("short-range coupling two sites apart") {
  const auto m = build_dynamic_matrix(chain(4, 0.5, 1.0)).entries;
  CHECK(m(2, 0).real() == doctest::Approx(-std::exp(-2.0)).epsilon(1e-15));
  CHECK(m(2, 0).real() == doctest::Approx(-0.13534).epsilon(1e-4));
}

TEST_CASE("structure of open and periodic matrices") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    NetworkParams p = chain(2 + trial, u(rng), 0.5 + 5 * u(rng));
    p.phase_per_site = 6 * u(rng);
    p.detuning = u(rng) - 0.5;
    const auto obc = build_dynamic_matrix(p, Boundary::open).entries;
    const auto pbc = build_dynamic_matrix(p, Boundary::periodic).entries;
    const int n = p.n_cavities;
    int nonzero = 0;
    std::set<std::pair<double, double>> distinct;
    for (int j = 0; j < n; ++j) {
      REQUIRE(obc(j, j) == coupling_coefficient(p, 0));
      REQUIRE(pbc(j, j) == coupling_coefficient(p, 0));
      for (int l = 0; l < n; ++l) {
        if (l > j) REQUIRE(obc(j, l) == Complex(0.0));
        if (l < j) {
          REQUIRE(obc(j, l) == coupling_coefficient(p, j - l));
          nonzero += obc(j, l) != Complex(0.0);
        }
        REQUIRE(pbc(j, l) == coupling_coefficient(p, ((j - l) % n + n) % n));
        REQUIRE(pbc((j + 1) % n, (l + 1) % n) == pbc(j, l));
        if (j != l) distinct.insert({pbc(j, l).real(), pbc(j, l).imag()});
      }
    }
    CHECK(nonzero == n * (n - 1) / 2);
    CHECK(static_cast<int>(distinct.size()) == n - 1);
  }
}

TEST_CASE("gauge transformation removes the phase per site") {
  auto p = chain(12, 0.4, 3.0);
  p.phase_per_site = 1.234;
  const auto m = build_dynamic_matrix(p).entries;
  const auto m0 = build_dynamic_matrix([&] { auto q = p; q.phase_per_site = 0.0; return q; }()).entries;
  CVector d(12);
  for (int j = 0; j < 12; ++j) d(j) = std::polar(1.0, -p.phase_per_site * j);
  const CMatrix g = d.asDiagonal() * m * d.conjugate().asDiagonal();
  CHECK((g - m0).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("stability report") {
  const auto a = stability(chain(5, 0.5));
  CHECK(a.eigen_real_part == doctest::Approx(-0.375));
  CHECK(a.stable);
  const auto b = stability(chain(5, 1.5));
  CHECK(b.eigen_real_part == doctest::Approx(0.125));
  CHECK_FALSE(b.stable);
  const auto c = stability(chain(5, 1.25));
  CHECK(c.margin == 0.0);
  CHECK_FALSE(c.stable);
}

TEST_CASE("numerical eigenvalues of the open chain sit on the diagonal rate") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int n : {2, 7, 16, 33, 64}) {
    NetworkParams p = chain(n, 2.0 * u(rng) - 0.5, std::exp(8.0 * u(rng) - 1.0));
    p.detuning = u(rng) - 0.5;
    const auto report = stability(p);
    const auto ev = triangular_eigenvalues(build_dynamic_matrix(p).entries);
    for (Index i = 0; i < ev.size(); ++i) {
      CHECK(std::abs(ev(i).real() - report.eigen_real_part) < 1e-12);
      CHECK(std::abs(ev(i) - diagonal_rate(p)) < 1e-8);
    }
  }
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(build_dynamic_matrix(chain(1, 0.5)), ParameterError);
  auto p = chain(4, 0.5);
  p.io_rate = 0.0;
  CHECK_THROWS_AS(p.validate(), ParameterError);
  p = chain(4, 0.5, -1.0);
  CHECK_THROWS_AS(p.validate(), ParameterError);
  p = chain(4, 0.5);
  p.coupling_rate = -1.0;
  CHECK_THROWS_AS(p.validate(), ParameterError);
  p = chain(4, NAN);
  CHECK_THROWS_AS(p.validate(), ParameterError);
}

TEST_CASE("infinite range flag and decay clamp") {
  CHECK(chain(40, 0.5, 1e9).infinite_range());
  CHECK(chain(40, 0.5, 4e7).infinite_range());
  CHECK_FALSE(chain(40, 0.5, 3.9e7).infinite_range());
  CHECK(chain(40, 0.5, INFINITY).coupling_decay(5) == 1.0);
  CHECK(chain(40, 0.5, 1e9).coupling_decay(5) < 1.0);
  CHECK(chain(40, 0.5, 1e-3).coupling_decay(39) == std::numeric_limits<double>::min());
}

TEST_CASE("json round trip") {
  auto p = chain(17, 0.3, 2.5);
  p.detuning = -0.125;
  p.phase_per_site = 0.7;
  const nlohmann::json j = p;
  const auto q = j.get<NetworkParams>();
  CHECK(q.n_cavities == 17);
  CHECK(q.pump_rate == p.pump_rate);
  CHECK(q.coherence_length == p.coherence_length);
  CHECK(q.detuning == p.detuning);
  CHECK(q.phase_per_site == p.phase_per_site);

  const auto inf = nlohmann::json::parse(R"({"n": 4, "gamma_pump": 0.5, "kappa": 0.25, "Gamma": 1, "zeta": "inf"})").get<NetworkParams>();
  CHECK(std::isinf(inf.coherence_length));
  CHECK(inf.detuning == 0.0);
  CHECK(nlohmann::json(inf)["zeta"] == "inf");

  CHECK_THROWS_AS(nlohmann::json::parse(R"({"n": 4, "gamma_pump": 0.5, "kappa": 0.25, "Gamma": 1, "zeta": 1, "extra": 2})").get<NetworkParams>(),
                  ParameterError);
  CHECK_THROWS_AS(nlohmann::json::parse(R"({"n": 4, "gamma_pump": 0.5, "kappa": 0.25, "zeta": 1})").get<NetworkParams>(),
                  ParameterError);
  CHECK_THROWS_AS(nlohmann::json::parse(R"({"n": 4.5, "gamma_pump": 0.5, "kappa": 0.25, "Gamma": 1, "zeta": 1})").get<NetworkParams>(),
                  ParameterError);
  CHECK_THROWS_AS(load_params("/nonexistent/params.json"), IoError);
}

TEST_CASE("unity prefactor rate") {
  CHECK(unity_prefactor_io_rate(1.0, INFINITY) == 0.25);
  const double r = std::exp(-1.0);
  CHECK(unity_prefactor_io_rate(2.0, 1.0) == doctest::Approx(2.0 * r / ((1 + r) * (1 + r))));
}

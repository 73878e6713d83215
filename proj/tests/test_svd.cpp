#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "nrnet/lattice.hpp"
#include "nrnet/svd.hpp"

using namespace nrnet;
using test::chain;

namespace {

// λ_min of the open chain with Δω = 0 in the edge-state regime,
// e^{−1/ζ}(γ+Γ−κ)²/(4Γ)·N0²·e^{−N/ξ′}; for ζ = ∞ and γ = 0.5 exactly
// (1.25²/4)·N0²·(3/5)^N with N0² = (1 − 0.36)/(1 − 0.36^N).
double long_range_lambda_min(int n) {
  const double n0sq = (1.0 - 0.36) / (1.0 - std::pow(0.36, n));
  return 1.25 * 1.25 / 4.0 * n0sq * std::pow(0.6, n);
}

double unitarity_defect(const CMatrix& q) {
  return (q.adjoint() * q - CMatrix::Identity(q.cols(), q.cols())).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("two-site chain by hand") {
  const auto t = linalg::svd(build_dynamic_matrix(chain(2, 0.5, INFINITY)).entries);
  // M = [[-3/8, 0], [-1, -3/8]]: σ1σ2 = |det M| = 9/64 and σ1² + σ2² = ‖M‖²_F = 41/32.
  CHECK(t.singular_values(0) == doctest::Approx(1.125).epsilon(1e-14));
  CHECK(t.singular_values(1) == doctest::Approx(0.125).epsilon(1e-14));
}

TEST_CASE("extended-precision refinement resolves the edge gap") {
  for (int n : {40, 60, 100, 160}) {
    const auto m = build_dynamic_matrix(chain(n, 0.5, INFINITY)).entries;
    const auto t = linalg::svd(m);
    CAPTURE(n);
    CHECK(t.refined >= 1);
    CHECK(test::rel(t.singular_values(n - 1), long_range_lambda_min(n)) < 1e-10);
    CHECK(linalg::reconstruction_error(t, m) < 1e-10);
    CHECK(unitarity_defect(t.left_vectors) < 1e-10);
    CHECK(unitarity_defect(t.right_vectors) < 1e-10);
  }
}

TEST_CASE("unrefined double SVD cannot see below the noise floor") {
  const int n = 100;
  const auto m = build_dynamic_matrix(chain(n, 0.5, INFINITY)).entries;
  const auto plain = linalg::svd(m, {.refine = false});
  CHECK(plain.refined == 0);
  CHECK(test::rel(plain.singular_values(n - 1), long_range_lambda_min(n)) > 0.5);
}

TEST_CASE("general (non-triangular) input goes through the pivoted path") {
  // Reversing the rows is an exact unitary change, so the singular values are
  // those of the triangular chain.
  const int n = 70;
  const CMatrix m = build_dynamic_matrix(chain(n, 0.5, INFINITY)).entries.colwise().reverse();
  const auto t = linalg::svd(m);
  CHECK(t.refined >= 1);
  CHECK(test::rel(t.singular_values(n - 1), long_range_lambda_min(n)) < 1e-10);
  CHECK(linalg::reconstruction_error(t, m) < 1e-10);
}

TEST_CASE("random well-conditioned matrices are left alone") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  for (int n : {3, 10, 25}) {
    CMatrix m(n, n);
    for (Index i = 0; i < n; ++i) {
      for (Index j = 0; j < n; ++j) m(i, j) = Complex(g(rng), g(rng));
    }
    const auto t = linalg::svd(m);
    CHECK(linalg::reconstruction_error(t, m) < 1e-12);
    for (Index i = 1; i < n; ++i) CHECK(t.singular_values(i) <= t.singular_values(i - 1));
  }
}

TEST_CASE("decoupled chain has a flat spectrum") {
  auto p = chain(9, 0.1);
  p.coupling_rate = 0.0;
  p.detuning = 0.2;
  const auto t = linalg::svd(build_dynamic_matrix(p).entries);
  for (Index i = 0; i < 9; ++i) CHECK(t.singular_values(i) == doctest::Approx(std::abs(diagonal_rate(p))).epsilon(1e-14));
}

TEST_CASE("exactly singular matrices are returned unrefined") {
  const auto m = build_dynamic_matrix(chain(30, 1.25, INFINITY)).entries;  // μ0 = 0
  const auto t = linalg::svd(m);
  CHECK(t.singular_values(29) < 1e-12);
  CHECK(linalg::reconstruction_error(t, m) < 1e-12);
}

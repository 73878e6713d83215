#include "nrnet/svd.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <vector>

#include <Eigen/SVD>
#include <boost/multiprecision/mpfr.hpp>

#include "nrnet/errors.hpp"

namespace nrnet::linalg {

namespace {

namespace mp = boost::multiprecision;

template <unsigned Digits>
using Real = mp::number<mp::mpfr_float_backend<Digits, mp::allocate_stack>, mp::et_off>;

// Minimal complex arithmetic over an MPFR real; std::complex<T> is
// unspecified for non-builtin T.
template <class R>
struct Cx {
  R re{0};
  R im{0};
};

template <class R>
Cx<R> operator+(const Cx<R>& a, const Cx<R>& b) { return {a.re + b.re, a.im + b.im}; }
template <class R>
Cx<R> operator-(const Cx<R>& a, const Cx<R>& b) { return {a.re - b.re, a.im - b.im}; }
template <class R>
Cx<R> operator*(const Cx<R>& a, const Cx<R>& b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
template <class R>
Cx<R> operator*(const R& s, const Cx<R>& a) { return {s * a.re, s * a.im}; }
template <class R>
Cx<R> conj(const Cx<R>& a) { return {a.re, -a.im}; }
template <class R>
R norm2(const Cx<R>& a) { return a.re * a.re + a.im * a.im; }
template <class R>
Cx<R> operator/(const Cx<R>& a, const Cx<R>& b) {
  const R d = norm2(b);
  return {(a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d};
}

template <class R>
using Column = std::vector<Cx<R>>;

template <class R>
Cx<R> to_cx(const Complex& z) { return {R(z.real()), R(z.imag())}; }

template <class R>
Complex to_complex(const Cx<R>& z) {
  return {static_cast<double>(z.re), static_cast<double>(z.im)};
}

template <class R>
Cx<R> dot(const Column<R>& a, const Column<R>& b) {  // a† b
  Cx<R> s;
  for (std::size_t i = 0; i < a.size(); ++i) s = s + conj(a[i]) * b[i];
  return s;
}

template <class R>
R norm(const Column<R>& a) {
  R s(0);
  for (const auto& z : a) s += norm2(z);
  return sqrt(s);
}

template <class R>
void axpy(const Cx<R>& alpha, const Column<R>& x, Column<R>& y) {  // y -= alpha x
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = y[i] - alpha * x[i];
}

// Modified Gram-Schmidt, two passes.
template <class R>
void orthonormalize(std::vector<Column<R>>& cols) {
  for (std::size_t c = 0; c < cols.size(); ++c) {
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t p = 0; p < c; ++p) axpy(dot(cols[p], cols[c]), cols[p], cols[c]);
    }
    const R nrm = norm(cols[c]);
    if (nrm == 0) throw NumericalError("refinement subspace collapsed");
    const R inv = R(1) / nrm;
    for (auto& z : cols[c]) z = inv * z;
  }
}

// Square matrix held in extended precision, with triangular solves when the
// input is lower triangular and an LU factorization otherwise.
template <class R>
class ExtendedOperator {
 public:
  explicit ExtendedOperator(const CMatrix& m) : n_(m.rows()), a_(static_cast<std::size_t>(n_ * n_)) {
    lower_ = true;
    for (Index i = 0; i < n_; ++i) {
      for (Index j = 0; j < n_; ++j) {
        at(a_, i, j) = to_cx<R>(m(i, j));
        if (j > i && m(i, j) != Complex(0.0)) lower_ = false;
      }
    }
    if (lower_) {
      for (Index i = 0; i < n_; ++i) {
        if (norm2(at(a_, i, i)) == 0) throw SingularityError("matrix is exactly singular");
      }
      factors_ = a_;
    } else {
      factor();
    }
  }

  [[nodiscard]] Column<R> apply(const Column<R>& x) const {
    Column<R> y(static_cast<std::size_t>(n_));
    for (Index i = 0; i < n_; ++i) {
      Cx<R> s;
      const Index end = lower_ ? i + 1 : n_;
      for (Index j = 0; j < end; ++j) s = s + at(a_, i, j) * x[j];
      y[i] = s;
    }
    return y;
  }

  // M⁻¹ b
  [[nodiscard]] Column<R> solve(const Column<R>& b) const {
    Column<R> x(static_cast<std::size_t>(n_));
    if (lower_) {
      for (Index i = 0; i < n_; ++i) {
        Cx<R> s = b[i];
        for (Index k = 0; k < i; ++k) s = s - at(factors_, i, k) * x[k];
        x[i] = s / at(factors_, i, i);
      }
      return x;
    }
    for (Index i = 0; i < n_; ++i) {
      Cx<R> s = b[perm_[i]];
      for (Index k = 0; k < i; ++k) s = s - at(factors_, i, k) * x[k];
      x[i] = s;
    }
    for (Index i = n_ - 1; i >= 0; --i) {
      Cx<R> s = x[i];
      for (Index k = i + 1; k < n_; ++k) s = s - at(factors_, i, k) * x[k];
      x[i] = s / at(factors_, i, i);
    }
    return x;
  }

  // M⁻† b
  [[nodiscard]] Column<R> solve_adjoint(const Column<R>& b) const {
    Column<R> x(static_cast<std::size_t>(n_));
    if (lower_) {
      for (Index i = n_ - 1; i >= 0; --i) {
        Cx<R> s = b[i];
        for (Index k = i + 1; k < n_; ++k) s = s - conj(at(factors_, k, i)) * x[k];
        x[i] = s / conj(at(factors_, i, i));
      }
      return x;
    }
    // M = Pᵀ L U, so M† = U† L† P.
    Column<R> w(static_cast<std::size_t>(n_));
    for (Index i = 0; i < n_; ++i) {
      Cx<R> s = b[i];
      for (Index k = 0; k < i; ++k) s = s - conj(at(factors_, k, i)) * w[k];
      w[i] = s / conj(at(factors_, i, i));
    }
    for (Index i = n_ - 1; i >= 0; --i) {
      Cx<R> s = w[i];
      for (Index k = i + 1; k < n_; ++k) s = s - conj(at(factors_, k, i)) * w[k];
      w[i] = s;
    }
    for (Index i = 0; i < n_; ++i) x[perm_[i]] = w[i];
    return x;
  }

 private:
  Cx<R>& at(std::vector<Cx<R>>& v, Index i, Index j) const { return v[static_cast<std::size_t>(i * n_ + j)]; }
  const Cx<R>& at(const std::vector<Cx<R>>& v, Index i, Index j) const { return v[static_cast<std::size_t>(i * n_ + j)]; }

  void factor() {
    factors_ = a_;
    perm_.resize(static_cast<std::size_t>(n_));
    std::iota(perm_.begin(), perm_.end(), Index{0});
    for (Index c = 0; c < n_; ++c) {
      Index pivot = c;
      R best = norm2(at(factors_, c, c));
      for (Index r = c + 1; r < n_; ++r) {
        const R v = norm2(at(factors_, r, c));
        if (v > best) {
          best = v;
          pivot = r;
        }
      }
      if (best == 0) throw SingularityError("matrix is exactly singular");
      if (pivot != c) {
        for (Index j = 0; j < n_; ++j) std::swap(at(factors_, c, j), at(factors_, pivot, j));
        std::swap(perm_[c], perm_[pivot]);
      }
      for (Index r = c + 1; r < n_; ++r) {
        const Cx<R> f = at(factors_, r, c) / at(factors_, c, c);
        at(factors_, r, c) = f;
        for (Index j = c + 1; j < n_; ++j) at(factors_, r, j) = at(factors_, r, j) - f * at(factors_, c, j);
      }
    }
  }

  Index n_;
  std::vector<Cx<R>> a_;
  std::vector<Cx<R>> factors_;
  std::vector<Index> perm_;
  bool lower_ = true;
};

// One-sided (Hestenes) Jacobi on the columns of b, accumulating the
// rotations into w. On return the columns of b are mutually orthogonal.
template <class R>
void jacobi_orthogonalize(std::vector<Column<R>>& b, std::vector<Column<R>>& w, const R& tol) {
  const std::size_t k = b.size();
  for (int sweep = 0; sweep < 60; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p < k; ++p) {
      for (std::size_t q = p + 1; q < k; ++q) {
        const R alpha = dot(b[p], b[p]).re;
        const R beta = dot(b[q], b[q]).re;
        const Cx<R> g = dot(b[p], b[q]);
        const R gabs = sqrt(norm2(g));
        if (gabs <= tol * sqrt(alpha * beta)) continue;
        rotated = true;
        const Cx<R> phase = conj(Cx<R>{g.re / gabs, g.im / gabs});  // e^{-iθ}
        const R zeta = (beta - alpha) / (2 * gabs);
        const R t = (zeta >= 0 ? R(1) : R(-1)) / (abs(zeta) + sqrt(R(1) + zeta * zeta));
        const R c = R(1) / sqrt(R(1) + t * t);
        const R s = c * t;
        auto rotate = [&](Column<R>& x, Column<R>& y) {
          for (std::size_t i = 0; i < x.size(); ++i) {
            const Cx<R> yq = y[i] * phase;
            const Cx<R> xp = x[i];
            x[i] = c * xp - s * yq;
            y[i] = s * xp + c * yq;
          }
        };
        rotate(b[p], b[q]);
        rotate(w[p], w[q]);
      }
    }
    if (!rotated) return;
  }
}

// Refines the trailing `k` triplets of `t` at `Digits` decimal digits.
// Returns false when the result shows that more digits are needed.
template <unsigned Digits>
bool refine_at(const CMatrix& m, SvdTriple& t, Index k, double target) {
  using R = Real<Digits>;
  const Index n = m.rows();
  const ExtendedOperator<R> op(m);

  std::vector<Column<R>> x(static_cast<std::size_t>(k), Column<R>(static_cast<std::size_t>(n)));
  for (Index c = 0; c < k; ++c) {
    for (Index i = 0; i < n; ++i) x[c][i] = to_cx<R>(t.right_vectors(i, n - k + c));
  }
  orthonormalize(x);

  const R converged(1e-30);
  for (int iter = 0; iter < 400; ++iter) {
    std::vector<Column<R>> z;
    z.reserve(x.size());
    for (const auto& col : x) z.push_back(op.solve(op.solve_adjoint(col)));
    orthonormalize(z);
    R change(0);
    for (auto col : z) {
      for (const auto& basis : x) axpy(dot(basis, col), basis, col);
      const R d = norm(col);
      change += d * d;
    }
    x = std::move(z);
    if (sqrt(change) < converged) break;
  }

  // Rayleigh-Ritz inside the converged subspace.
  std::vector<Column<R>> b;
  b.reserve(x.size());
  for (const auto& col : x) b.push_back(op.apply(col));
  std::vector<Column<R>> w(static_cast<std::size_t>(k), Column<R>(static_cast<std::size_t>(k)));
  for (Index c = 0; c < k; ++c) w[c][c] = Cx<R>{R(1), R(0)};
  jacobi_orthogonalize(b, w, R(std::pow(10.0, -static_cast<double>(Digits) + 5)));

  std::vector<R> sigma(static_cast<std::size_t>(k));
  for (Index c = 0; c < k; ++c) sigma[c] = norm(b[c]);
  std::vector<Index> order(static_cast<std::size_t>(k));
  std::iota(order.begin(), order.end(), Index{0});
  std::sort(order.begin(), order.end(), [&](Index a, Index c) { return sigma[a] > sigma[c]; });

  const R smallest = sigma[order.back()];
  if (smallest == 0) throw SingularityError("matrix is numerically singular at extended precision");
  const double needed = std::log10(static_cast<double>(n) * t.singular_values(0)) -
                        static_cast<double>(log10(smallest)) - std::log10(target) + 2.0;
  if (needed > static_cast<double>(Digits)) return false;

  for (Index slot = 0; slot < k; ++slot) {
    const Index c = order[slot];
    const Index dst = n - k + slot;
    const R inv = R(1) / sigma[c];
    t.singular_values(dst) = static_cast<double>(sigma[c]);
    for (Index i = 0; i < n; ++i) {
      t.left_vectors(i, dst) = to_complex(inv * b[c][i]);
      Cx<R> v;
      for (Index p = 0; p < k; ++p) v = v + x[p][i] * w[c][p];
      t.right_vectors(i, dst) = to_complex(v);
    }
  }
  t.refined = static_cast<int>(k);
  t.working_digits = static_cast<int>(Digits);
  return true;
}

}  // namespace

SvdTriple svd(const CMatrix& m, const SvdOptions& options) {
  Eigen::BDCSVD<CMatrix> dec(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  SvdTriple t{dec.matrixU(), dec.singularValues(), dec.matrixV()};
  const Index n = m.rows();
  if (!options.refine || n == 0 || m.rows() != m.cols()) return t;
  const double s0 = t.singular_values(0);
  if (!(s0 > 0.0)) return t;

  Index k = 0;
  while (k < n && t.singular_values(n - 1 - k) < options.refine_below * s0) ++k;
  if (k == 0) return t;
  // Keep the next bulk value at least a factor 2 above the block so that the
  // subspace iteration contracts quickly.
  while (k < n && t.singular_values(n - 1 - k) < 1e-2 * s0 &&
         t.singular_values(n - 1 - k) < 2.0 * t.singular_values(n - k)) {
    ++k;
  }

  try {
    if (refine_at<40>(m, t, k, options.target_accuracy)) return t;
    if (refine_at<80>(m, t, k, options.target_accuracy)) return t;
    if (refine_at<160>(m, t, k, options.target_accuracy)) return t;
    if (refine_at<320>(m, t, k, options.target_accuracy)) return t;
    if (refine_at<640>(m, t, k, options.target_accuracy)) return t;
  } catch (const SingularityError&) {
    return SvdTriple{dec.matrixU(), dec.singularValues(), dec.matrixV()};
  }
  throw NumericalError("singular spectrum spans more than ~620 decades; cannot refine");
}

double reconstruction_error(const SvdTriple& t, const CMatrix& m) {
  const CMatrix r = t.left_vectors * t.singular_values.cast<Complex>().asDiagonal() * t.right_vectors.adjoint();
  const double denom = m.norm();
  return denom > 0 ? (r - m).norm() / denom : (r - m).norm();
}

}  // namespace nrnet::linalg

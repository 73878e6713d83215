#pragma once

#include "nrnet/types.hpp"

namespace nrnet::linalg {

/// M = U·diag(λ)·V†, singular values descending.
struct SvdTriple {
  CMatrix left_vectors;
  RVector singular_values;
  CMatrix right_vectors;
  int refined = 0;          ///< trailing triplets recomputed in extended precision
  int working_digits = 16;  ///< decimal digits used for those triplets
};

struct SvdOptions {
  bool refine = true;
  /// Triplets with λ below this fraction of λ_max are recomputed.
  double refine_below = 1e-4;
  /// Requested relative accuracy of the smallest singular value.
  double target_accuracy = 1e-14;
};

/// Dense SVD. The bulk comes from a double-precision divide-and-conquer SVD;
/// singular values far below λ_max (which double precision resolves only to
/// ~1e-16·λ_max) are refined by subspace inverse iteration and a Rayleigh-Ritz
/// step in MPFR arithmetic, with the working precision raised until the
/// smallest value is resolved to `target_accuracy`. An exactly singular input
/// is returned unrefined.
SvdTriple svd(const CMatrix& m, const SvdOptions& options = {});

/// ‖U Λ V† − M‖_F / ‖M‖_F.
double reconstruction_error(const SvdTriple& t, const CMatrix& m);

}  // namespace nrnet::linalg

#pragma once

#include "ng/common.hpp"

namespace ng::la {

// Symmetrize; asymmetry above `repair_tol` (relative) is an error.
Mat symmetrized(const Mat& m, double repair_tol = 1e-6);

struct SymEig {
  Vec values;   // descending
  Mat vectors;  // columns
};
SymEig sym_eig(const Mat& m);

// f applied to the eigenvalues of a symmetric matrix.
Mat sym_exp(const Mat& m);
Mat sym_log(const Mat& spd);
Mat sym_sqrt(const Mat& spd);

Mat commutator(const Mat& a, const Mat& b);

// Haar-distributed element of SO(n).
Mat haar_orthogonal(int n, Rng& rng);
Mat gaussian(int rows, int cols, Rng& rng);
// exp(s X) with X random gaussian, rescaled to unit determinant.
Mat random_sl(int n, double spread, Rng& rng);
Vec random_unit(int n, Rng& rng);

// Orthonormalize columns of `basis` w.r.t. the scalar product `gram` in order.
Mat gram_schmidt(const Mat& basis, const Mat& gram);

// Numerical rank with a forbidden band: singular values in [lo, hi] raise.
int banded_rank(const Mat& m, double lo = 1e-8, double hi = 1e-6);

Mat orthonormal_complement(const Mat& cols);

double max_abs(const Mat& m);

}  // namespace ng::la

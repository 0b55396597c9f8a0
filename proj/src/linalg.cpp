#include "ng/linalg.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ng::la {

Mat symmetrized(const Mat& m, double repair_tol) {
  if (m.rows() != m.cols()) throw InputError("matrix is not square");
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (asym > repair_tol * scale) throw InputError("matrix is not symmetric");
  return 0.5 * (m + m.transpose());
}

SymEig sym_eig(const Mat& m) {
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (m + m.transpose()));
  if (es.info() != Eigen::Success) throw NumericalError("symmetric eigensolver failed");
  const int n = static_cast<int>(m.rows());
  SymEig out{Vec(n), Mat(n, n)};
  for (int i = 0; i < n; ++i) {
    out.values(i) = es.eigenvalues()(n - 1 - i);
    out.vectors.col(i) = es.eigenvectors().col(n - 1 - i);
  }
  return out;
}

namespace {
template <class F>
Mat spectral(const Mat& m, F f) {
  auto e = sym_eig(m);
  Vec fv = e.values.unaryExpr(f);
  return e.vectors * fv.asDiagonal() * e.vectors.transpose();
}
}  // namespace

Mat sym_exp(const Mat& m) { return spectral(m, [](double x) { return std::exp(x); }); }

Mat sym_log(const Mat& spd) {
  return spectral(spd, [](double x) {
    if (x <= 0) throw NumericalError("log of a non-positive eigenvalue");
    return std::log(x);
  });
}

Mat sym_sqrt(const Mat& spd) {
  return spectral(spd, [](double x) { return std::sqrt(std::max(x, 0.0)); });
}

Mat commutator(const Mat& a, const Mat& b) { return a * b - b * a; }

Mat gaussian(int rows, int cols, Rng& rng) {
  std::normal_distribution<double> nd;
  Mat g(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) g(i, j) = nd(rng);
  return g;
}

Mat haar_orthogonal(int n, Rng& rng) {
  Eigen::HouseholderQR<Mat> qr(gaussian(n, n, rng));
  Mat q = qr.householderQ();
  Mat r = qr.matrixQR();
  for (int i = 0; i < n; ++i)
    if (r(i, i) < 0) q.col(i) *= -1.0;
  if (q.determinant() < 0) q.col(n - 1) *= -1.0;
  return q;
}

Mat random_sl(int n, double spread, Rng& rng) {
  Mat x = gaussian(n, n, rng);
  x -= (x.trace() / n) * Mat::Identity(n, n);
  x *= spread / std::max(1e-12, x.norm());
  Mat acc = x.exp();
  return acc / std::pow(acc.determinant(), 1.0 / n);
}

Vec random_unit(int n, Rng& rng) {
  Vec v = gaussian(n, 1, rng);
  return v / v.norm();
}

Mat gram_schmidt(const Mat& basis, const Mat& gram) {
  const int n = static_cast<int>(basis.rows());
  const int k = static_cast<int>(basis.cols());
  Mat out(n, k);
  for (int j = 0; j < k; ++j) {
    Vec v = basis.col(j);
    for (int pass = 0; pass < 2; ++pass)
      for (int i = 0; i < j; ++i) v -= (out.col(i).dot(gram * v)) * out.col(i);
    const double nn = v.dot(gram * v);
    if (!(nn > 1e-24)) throw NumericalError("degenerate flag basis");
    out.col(j) = v / std::sqrt(nn);
  }
  return out;
}

int banded_rank(const Mat& m, double lo, double hi) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Mat> svd(m);
  int r = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i) {
    const double s = svd.singularValues()(i);
    if (s > hi) ++r;
    else if (s >= lo) throw NumericalError("ambiguous position: singular value " + std::to_string(s));
  }
  return r;
}

Mat orthonormal_complement(const Mat& cols) {
  const int n = static_cast<int>(cols.rows());
  Eigen::JacobiSVD<Mat> svd(cols.transpose(), Eigen::ComputeFullV);
  const int r = static_cast<int>((svd.singularValues().array() > 1e-12).count());
  return svd.matrixV().rightCols(n - r);
}

double max_abs(const Mat& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace ng::la

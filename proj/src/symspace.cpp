#include "ng/symspace.hpp"

#include "ng/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace ng {

SymPoint SymPoint::from_gram(const Mat& g) {
  SymPoint x{la::symmetrized(g)};
  const double det = x.gram.determinant();
  if (!(det > 0)) throw InputError("Gram matrix is not positive definite");
  if (std::abs(det - 1.0) > 1e-6) throw InputError("Gram matrix does not have determinant 1");
  x.gram /= std::pow(det, 1.0 / x.dim());
  validate(x);
  return x;
}

SymTangent SymTangent::make(const SymPoint& base, const Mat& m) {
  SymTangent v{base, m};
  validate(v);
  return v;
}

void validate(const SymPoint& x) {
  const Mat& g = x.gram;
  if (g.rows() != g.cols() || g.rows() < 1) throw InputError("Gram matrix must be square");
  if ((g - g.transpose()).cwiseAbs().maxCoeff() > 1e-10 * std::max(1.0, la::max_abs(g)))
    throw InputError("Gram matrix is not symmetric");
  Eigen::SelfAdjointEigenSolver<Mat> es(g, Eigen::EigenvaluesOnly);
  if (!(es.eigenvalues().minCoeff() > 0)) throw InputError("Gram matrix is not positive definite");
  if (std::abs(es.eigenvalues().array().log().sum()) > 1e-8) throw InputError("Gram matrix does not have determinant 1");
}

void validate(const SymTangent& v) {
  const Mat& g = v.base.gram;
  if (v.mat.rows() != g.rows() || v.mat.cols() != g.cols()) throw InputError("tangent has wrong shape");
  const double scale = std::max(1.0, la::max_abs(v.mat));
  if ((g * v.mat - v.mat.transpose() * g).cwiseAbs().maxCoeff() > 1e-9 * scale)
    throw InputError("tangent is not symmetric for its base point");
  if (std::abs(v.mat.trace()) > 1e-10 * scale) throw InputError("tangent is not trace-free");
}

SymPoint act(const Mat& g, const SymPoint& x) {
  Eigen::PartialPivLU<Mat> lu(g);
  if (std::abs(lu.determinant()) < 1e-300) throw InputError("group element is singular");
  const Mat gi = lu.inverse();
  Mat out = gi.transpose() * x.gram * gi;
  out = 0.5 * (out + out.transpose().eval());
  const double det = out.determinant();
  if (!(det > 0)) throw NumericalError("action produced a non-positive Gram matrix");
  out /= std::pow(det, 1.0 / x.dim());
  return {out};
}

SymTangent push(const Mat& g, const SymTangent& v) {
  const Mat gi = g.inverse();
  return {act(g, v.base), g * v.mat * gi};
}

double inner(const SymTangent& u, const SymTangent& v) {
  if ((u.base.gram - v.base.gram).cwiseAbs().maxCoeff() > 1e-9 * std::max(1.0, la::max_abs(u.base.gram)))
    throw InputError("tangent vectors have different base points");
  return 2.0 * u.dim() * (u.mat * v.mat).trace();
}

double norm(const SymTangent& v) { return std::sqrt(std::max(0.0, inner(v, v))); }

SymTangent normalized(const SymTangent& v) {
  const double n = norm(v);
  if (!(n > 0)) throw InputError("cannot normalize the zero tangent");
  return v.scaled(1.0 / n);
}

Mat to_origin(const SymPoint& x) {
  Eigen::LLT<Mat> llt(x.gram);
  if (llt.info() != Eigen::Success) throw NumericalError("Cholesky factorization failed");
  return Mat(llt.matrixL()).transpose();
}

Mat standard_form(const SymTangent& v) {
  const Mat lt = to_origin(v.base);
  Mat s = lt * v.mat * lt.inverse();
  return 0.5 * (s + s.transpose());
}

SymPoint geodesic(const SymPoint& x, const SymTangent& v, double t) {
  // gram(t) = gram . exp(-2 t v) = L exp(-2 t S) L^T with S the frame form of v.
  const Mat lt = to_origin(x);
  const Mat s = standard_form(v);
  Mat out = lt.transpose() * la::sym_exp(-2.0 * t * s) * lt;
  out = 0.5 * (out + out.transpose().eval());
  out /= std::pow(out.determinant(), 1.0 / x.dim());
  return {out};
}

SymTangent transport_velocity(const SymTangent& v, double s) { return {geodesic(v.base, v, s), v.mat}; }

SymTangent log_map(const SymPoint& x, const SymPoint& y) {
  const Mat lt = to_origin(x);
  const Mat lti = lt.inverse();
  const Mat m = lti.transpose() * y.gram * lti;  // y seen from an x-orthonormal frame
  const Mat s = -0.5 * la::sym_log(0.5 * (m + m.transpose()));
  Mat w = lti * s * lt;
  w -= (w.trace() / x.dim()) * Mat::Identity(x.dim(), x.dim());
  return {x, w};
}

namespace {

Vec relative_log_eigs(const SymPoint& x, const SymPoint& y) {
  Eigen::GeneralizedSelfAdjointEigenSolver<Mat> es(y.gram, x.gram, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericalError("relative eigenvalue solve failed");
  Vec w = -0.5 * es.eigenvalues().array().log();
  return w.array() - w.mean();
}

Vec sorted_desc(Vec v) {
  std::sort(v.data(), v.data() + v.size(), std::greater<double>());
  return v;
}

}  // namespace

double distance(const SymPoint& x, const SymPoint& y) {
  const Vec w = relative_log_eigs(x, y);
  return std::sqrt(2.0 * x.dim() * w.squaredNorm());
}

Vec cartan_projection(const SymTangent& v) {
  Vec ev = la::sym_eig(standard_form(v)).values;
  return ev.array() - ev.mean();
}

Vec generalized_distance(const SymPoint& x, const SymPoint& y) { return sorted_desc(relative_log_eigs(x, y)); }

Vec cartan_of(const Mat& g, const Mat& ginv) {
  const int n = static_cast<int>(g.rows());
  Eigen::JacobiSVD<Mat> sg(g), si(ginv);
  Vec out(n);
  const Vec& a = sg.singularValues();
  const Vec& b = si.singularValues();
  for (int i = 0; i < n; ++i) {
    // Small singular values of g are the inverses of large ones of g^-1; take the estimate with
    // the smaller rounding error, eps * (largest / this one).
    const double from_g = a(0) / a(i), from_inv = b(0) / b(n - 1 - i);
    out(i) = from_g <= from_inv ? std::log(a(i)) : -std::log(b(n - 1 - i));
  }
  return sorted_desc(Vec(out.array() - out.mean()));
}

Vec cartan_of(const Mat& g) { return cartan_of(g, g.inverse()); }

SymPoint random_point(int n, double spread, Rng& rng) { return act(la::random_sl(n, spread, rng), SymPoint::origin(n)); }

SymTangent random_tangent(const SymPoint& x, Rng& rng) {
  const int n = x.dim();
  Mat s = la::gaussian(n, n, rng);
  s = 0.5 * (s + s.transpose().eval());
  s -= (s.trace() / n) * Mat::Identity(n, n);
  const Mat lt = to_origin(x);
  SymTangent v{x, lt.inverse() * s * lt};
  return normalized(v);
}

}  // namespace ng

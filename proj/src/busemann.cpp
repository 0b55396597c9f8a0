#include "ng/busemann.hpp"

#include "ng/linalg.hpp"
#include "ng/parallel.hpp"
#include "ng/rootsys.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ng {

double constants::projective_coefficient(int n) { return n / std::sqrt(2.0 * (n - 1)); }

double constants::projective_coefficient_reference(int n) { return std::sqrt((n - 1.0) / n); }

double busemann_value(const IdealPoint& a, const SymPoint& o, const SymPoint& x) {
  // g = B^-1 carries (a, o) to (standard flag, q0); g.x has Gram B^T x B = L L^T and the
  // upper unipotent factor leaves exp(-log diag L) as the flat component.
  const Mat b = la::gram_schmidt(a.flag.basis, o.gram);
  const Mat m = la::symmetrized(b.transpose() * x.gram * b);
  Eigen::LLT<Mat> llt(m);
  if (llt.info() != Eigen::Success) throw NumericalError("Iwasawa factorization failed");
  const Vec d = Mat(llt.matrixL()).diagonal();
  if (d.minCoeff() < 1e-150 || d.maxCoeff() > 1e150) throw NumericalError("Iwasawa factorization is ill-conditioned");
  const int n = a.dim();
  return constants::metric_scale(n) * a.weights.dot(d.array().log().matrix());
}

double busemann_value_frame(const IdealPoint& a, const SymPoint& o, const Mat& hinv) {
  // Gram of h.q0 is hinv^T hinv, so the Cholesky factor of B^T gram B is R^T for hinv B = QR.
  const int n = a.dim();
  const Mat b = la::gram_schmidt(a.flag.basis, Mat::Identity(n, n));
  // Rows sorted by decreasing norm keep Householder accurate on row-graded matrices.
  const Mat m = hinv * b;
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int i, int j) { return m.row(i).norm() > m.row(j).norm(); });
  Mat sorted(n, n);
  for (int i = 0; i < n; ++i) sorted.row(i) = m.row(order[i]);
  const Mat r = Eigen::HouseholderQR<Mat>(sorted).matrixQR().triangularView<Eigen::Upper>();
  const Vec d = r.diagonal().cwiseAbs();
  if (d.minCoeff() < 1e-150 || d.maxCoeff() > 1e150) throw NumericalError("Iwasawa factorization is ill-conditioned");
  const double far = constants::metric_scale(n) * a.weights.dot(d.array().log().matrix());
  return far - busemann_value(a, SymPoint::origin(n), o);
}

SymTangent busemann_gradient(const IdealPoint& a, const SymPoint&, const SymPoint& x) {
  return direction_vector(a, x).scaled(-1.0);
}

BusemannEvaluation evaluate_busemann(const IdealPoint& a, const SymPoint& o, const SymPoint& x) {
  return {a, o, busemann_value(a, o, x), busemann_gradient(a, o, x)};
}

double hessian_from_standard(const Mat& s_a, const Mat& s_w) {
  const int n = static_cast<int>(s_a.rows());
  const la::SymEig e = la::sym_eig(s_a);
  const Mat w = e.vectors.transpose() * s_w * e.vectors;
  double out = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out += std::abs(e.values(i) - e.values(j)) * w(i, j) * w(i, j);
  return constants::metric_scale(n) * out;
}

double busemann_hessian(const IdealPoint& a, const SymTangent& w) {
  return hessian_from_standard(standard_form(direction_vector(a, w.base)), standard_form(w));
}

double busemann_asymptotic_slope(const IdealPoint& a, const SymPoint& o, const SymTangent& v, double t0, double t1,
                                 int samples) {
  const SymTangent u = normalized(v);
  // geodesic(x, u, t) = h.q0 with h^-1 = exp(-t S) lt up to a left rotation; S = Q diag(l) Q^T.
  const Mat lt = to_origin(u.base);
  const la::SymEig e = la::sym_eig(standard_form(u));
  const Mat qlt = e.vectors.transpose() * lt;
  double st = 0, sb = 0, stt = 0, stb = 0;
  for (int k = 0; k < samples; ++k) {
    const double t = t0 + (t1 - t0) * k / (samples - 1);
    const Mat hinv = (-t * e.values).array().exp().matrix().asDiagonal() * qlt;
    const double b = busemann_value_frame(a, o, hinv);
    st += t;
    sb += b;
    stt += t * t;
    stb += t * b;
  }
  const double slope = (samples * stb - st * sb) / (samples * stt - st * st);
  return -slope;
}

IdealPoint projective_ideal_point(const Vec& v) {
  const int n = static_cast<int>(v.size());
  if (v.norm() == 0) throw InputError("projective point needs a nonzero vector");
  return make_ideal(Mat(v.normalized()), fundamental_direction(RootSystem::sl(n), 0));
}

std::vector<double> busemann_batch(const std::vector<IdealPoint>& a, const SymPoint& o, const std::vector<SymPoint>& x,
                                   Exec exec) {
  if (a.size() != x.size()) throw InputError("batch sizes differ");
  std::vector<double> out(a.size());
  for_each_index(static_cast<long>(a.size()), exec, [&](long i) { out[i] = busemann_value(a[i], o, x[i]); });
  return out;
}

}  // namespace ng

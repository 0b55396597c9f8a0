#include "ng/flags.hpp"

#include "ng/linalg.hpp"
#include "ng/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace ng {

FlagPoint FlagPoint::standard(int n, std::vector<int> type) { return {std::move(type), Mat::Identity(n, n)}; }

FlagPoint FlagPoint::full(const Mat& basis) {
  const int n = static_cast<int>(basis.rows());
  std::vector<int> type(n - 1);
  for (int i = 0; i < n - 1; ++i) type[i] = i + 1;
  return from_vectors(basis, type);
}

FlagPoint FlagPoint::from_vectors(const Mat& vectors, std::vector<int> type) {
  const int n = static_cast<int>(vectors.rows());
  Mat cols = vectors;
  if (cols.cols() < n) {
    Mat extra = la::orthonormal_complement(vectors);
    cols.conservativeResize(n, n);
    cols.rightCols(extra.cols()) = extra;
  }
  Mat q = la::gram_schmidt(cols, Mat::Identity(n, n));
  FlagPoint f{std::move(type), q};
  validate(f);
  return f;
}

std::vector<int> type_of_weights(const Vec& tau, double tol) {
  std::vector<int> t;
  for (int i = 0; i + 1 < tau.size(); ++i)
    if (tau(i) - tau(i + 1) > tol) t.push_back(i + 1);
  return t;
}

void validate(const FlagPoint& f) {
  const int n = f.dim();
  if (f.basis.cols() != n) throw InputError("flag basis must be square");
  if ((f.basis.transpose() * f.basis - Mat::Identity(n, n)).cwiseAbs().maxCoeff() > 1e-10)
    throw InputError("flag basis is not orthonormal");
  for (std::size_t j = 0; j < f.type.size(); ++j) {
    if (f.type[j] < 1 || f.type[j] > n - 1) throw InputError("flag type out of range");
    if (j > 0 && f.type[j] <= f.type[j - 1]) throw InputError("flag type must be strictly increasing");
  }
}

void validate(const IdealPoint& a) {
  validate(a.flag);
  const int n = a.dim();
  if (a.weights.size() != n) throw InputError("weights have wrong dimension");
  if (std::abs(a.weights.sum()) > 1e-10) throw InputError("weights must be trace-free");
  if (std::abs(2.0 * n * a.weights.squaredNorm() - 1.0) > 1e-9) throw InputError("weights must be unit");
  if (type_of_weights(a.weights) != a.flag.type) throw InputError("weights do not match the flag type");
}

IdealPoint make_ideal(const FlagPoint& f, const Vec& weights) {
  IdealPoint a{f, weights};
  validate(a);
  return a;
}

IdealPoint make_ideal(const Mat& basis, const Vec& weights) {
  return make_ideal(FlagPoint::from_vectors(basis, type_of_weights(weights)), weights);
}

FlagPoint act(const Mat& g, const FlagPoint& f) {
  Mat q = la::gram_schmidt(g * f.basis, Mat::Identity(f.dim(), f.dim()));
  return {f.type, q};
}

IdealPoint act(const Mat& g, const IdealPoint& a) { return {act(g, a.flag), a.weights}; }

SymTangent direction_vector(const IdealPoint& a, const SymPoint& x) {
  const Mat b = la::gram_schmidt(a.flag.basis, x.gram);
  Mat v = b * a.weights.asDiagonal() * b.transpose() * x.gram;
  return {x, v};
}

WeylElement relative_position(const FlagPoint& f1, const FlagPoint& f2) {
  const int n = f1.dim();
  if (f2.dim() != n) throw InputError("flags live in different dimensions");
  // D(i, j) = dim(V_{i+1} cap W_{j+1}) with D(-1, .) = D(., -1) = 0.
  std::vector<std::vector<int>> d(n + 1, std::vector<int>(n + 1, 0));
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j) {
      if (i == n || j == n) {
        d[i][j] = std::min(i, j);
        continue;
      }
      Mat m(n, i + j);
      m << f1.basis.leftCols(i), f2.basis.leftCols(j);
      d[i][j] = i + j - la::banded_rank(m);
    }
  WeylElement w = WeylElement::identity(n);
  for (int i = 1; i <= n; ++i) {
    int found = -1;
    for (int j = 1; j <= n; ++j)
      if (d[i][j] - d[i - 1][j] - d[i][j - 1] + d[i - 1][j - 1] == 1) found = j - 1;
    if (found < 0) throw NumericalError("rank table is not a permutation table");
    w.perm[i - 1] = found;
  }
  return w;
}

namespace {

double sl_inner(const Vec& u, const Vec& v) { return 2.0 * u.size() * u.dot(v); }

std::vector<WeylElement> stabilizer(const RootSystem& sys, const Vec& tau) {
  std::vector<WeylElement> out;
  for (const auto& w : sys.weyl_group())
    if ((w.apply(tau) - tau).cwiseAbs().maxCoeff() < 1e-12) out.push_back(w);
  return out;
}

}  // namespace

double tits_angle_flat(const IdealPoint& a, const IdealPoint& b) {
  const int n = a.dim();
  const WeylElement w = relative_position(a.flag, b.flag);
  const RootSystem sys = RootSystem::sl(n);
  double best = -2.0;
  for (const auto& u : stabilizer(sys, a.weights))
    for (const auto& v : stabilizer(sys, b.weights)) {
      const WeylElement wp = u.compose(w).compose(v);
      best = std::max(best, sl_inner(a.weights, wp.apply(b.weights)));
    }
  return std::acos(std::clamp(best, -1.0, 1.0));
}

bool thickening_membership(const IdealPoint& a, const IdealPoint& f, double tol) {
  return tits_angle_flat(a, f) <= std::numbers::pi / 2 + tol;
}

namespace {

// Orthonormal basis (for 2n tr) of symmetric trace-free matrices.
std::vector<Mat> p_basis(int n) {
  std::vector<Mat> out;
  const double c = 1.0 / std::sqrt(2.0 * n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      Mat e = Mat::Zero(n, n);
      e(i, j) = e(j, i) = c / std::sqrt(2.0);
      out.push_back(e);
    }
  for (int k = 1; k < n; ++k) {
    Mat e = Mat::Zero(n, n);
    for (int i = 0; i < k; ++i) e(i, i) = 1.0;
    e(k, k) = -k;
    out.push_back(e * (c / std::sqrt(double(k) * (k + 1))));
  }
  return out;
}

struct Descent {
  double value;
  bool converged;
};

// The base point stays at q0; accepted steps move the flags by exp(-S) instead, so nothing
// becomes ill-conditioned when the common flat is far from the start.
Descent minimize_cos(IdealPoint a, IdealPoint b, const SymPoint& x0, const TitsNumericOptions& opt) {
  const int n = a.dim();
  const auto basis = p_basis(n);
  const int m = static_cast<int>(basis.size());
  const SymPoint q0 = SymPoint::origin(n);
  {
    const Mat lt = to_origin(x0);
    a = act(lt, a);
    b = act(lt, b);
  }
  auto sym = [&](const Vec& xi) {
    Mat s = Mat::Zero(n, n);
    for (int k = 0; k < m; ++k) s += xi(k) * basis[k];
    return s;
  };
  // The angle at x is largest on a common flat, where it equals the Tits angle.
  auto f = [&](const Vec& xi) {
    const SymPoint p = geodesic(q0, SymTangent{q0, sym(xi)}, 1.0);
    return inner(direction_vector(a, p), direction_vector(b, p));
  };
  const Vec zero = Vec::Zero(m);
  double fx = f(zero);
  const double h = 1e-4;
  for (int it = 0; it < opt.max_iter; ++it) {
    Vec g(m);
    Mat hess(m, m);
    for (int i = 0; i < m; ++i) {
      const Vec e = Vec::Unit(m, i) * h;
      const double fp = f(e), fm = f(-e);
      g(i) = (fp - fm) / (2 * h);
      hess(i, i) = (fp - 2 * fx + fm) / (h * h);
    }
    for (int i = 0; i < m; ++i)
      for (int j = i + 1; j < m; ++j) {
        const Vec ei = Vec::Unit(m, i) * h, ej = Vec::Unit(m, j) * h;
        hess(i, j) = hess(j, i) = (f(ei + ej) - f(ei - ej) - f(ej - ei) + f(-ei - ej)) / (4 * h * h);
      }
    const double gn = g.norm();
    if (gn < 1e-9) return {fx, true};
    // Newton on |eigenvalues|; flat directions of the degenerate minimum are damped.
    Eigen::SelfAdjointEigenSolver<Mat> es(hess);
    const double top = std::max(es.eigenvalues().cwiseAbs().maxCoeff(), 1e-8);
    const Vec lam = es.eigenvalues().cwiseAbs().cwiseMax(1e-6 * top);
    Vec step = -es.eigenvectors() * (es.eigenvectors().transpose() * g).cwiseQuotient(lam);
    if (step.norm() > 1.0) step *= 1.0 / step.norm();
    if (g.dot(step) >= 0) step = -g / gn;
    double t = 1.0;
    bool moved = false;
    while (t > 1e-12) {
      const double fy = f(t * step);
      if (fy <= fx + 1e-4 * t * g.dot(step)) {
        moved = fy < fx;
        const Mat back = la::sym_exp(-t * sym(step));
        a = act(back, a);
        b = act(back, b);
        fx = fy;
        break;
      }
      t *= 0.5;
    }
    if (!moved) return {fx, gn < 1e-6};
  }
  return {fx, false};
}

}  // namespace

double tits_angle_numeric(const IdealPoint& a, const IdealPoint& b, const TitsNumericOptions& opt) {
  const int n = a.dim();
  std::vector<Descent> results(opt.restarts);
  for_each_index(opt.restarts, opt.exec, [&](long r) {
    Rng rng = stream(opt.seed, r);
    SymPoint x0 = r == 0 ? SymPoint::origin(n) : random_point(n, opt.start_spread, rng);
    results[r] = minimize_cos(a, b, x0, opt);
  });
  double best = std::numeric_limits<double>::infinity();
  bool any = false;
  for (const auto& d : results) {
    best = std::min(best, d.value);
    any = any || d.converged;
  }
  if (!any)
    throw NumericalError("Tits angle minimization did not converge; best angle so far " +
                         std::to_string(std::acos(std::clamp(best, -1.0, 1.0))));
  return std::acos(std::clamp(best, -1.0, 1.0));
}

FlagPoint random_flag(int n, std::vector<int> type, Rng& rng) { return {std::move(type), la::haar_orthogonal(n, rng)}; }

double flag_distance(const FlagPoint& f1, const FlagPoint& f2) {
  double out = 0.0;
  for (int k : f1.type) {
    const Mat p1 = f1.basis.leftCols(k) * f1.basis.leftCols(k).transpose();
    const Mat p2 = f2.basis.leftCols(k) * f2.basis.leftCols(k).transpose();
    out = std::max(out, (p1 - p2).norm() / std::sqrt(2.0));
  }
  return out;
}

FlagPoint canonical(const FlagPoint& f) {
  FlagPoint out = f;
  for (int j = 0; j < out.basis.cols(); ++j) {
    for (int i = 0; i < out.basis.rows(); ++i) {
      if (std::abs(out.basis(i, j)) > 1e-12) {
        if (out.basis(i, j) < 0) out.basis.col(j) *= -1.0;
        break;
      }
    }
  }
  return out;
}

}  // namespace ng

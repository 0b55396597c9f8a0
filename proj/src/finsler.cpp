#include "ng/finsler.hpp"

#include "ng/busemann.hpp"
#include "ng/linalg.hpp"
#include "ng/parallel.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace ng {

FinslerContext make_finsler_context(const RootSystem& sys, const Vec& tau) {
  if (std::abs(sys.norm(tau) - 1.0) > 1e-9) throw InputError("tau must be a unit vector");
  return {sys, tau, weyl_orbit(sys, tau)};
}

double pseudo_norm(const FinslerContext& ctx, const Vec& v) {
  double out = -std::numeric_limits<double>::infinity();
  for (const auto& w : ctx.images) out = std::max(out, ctx.sys.inner(w, v));
  return out;
}

double finsler_distance(const FinslerContext& ctx, const SymPoint& x, const SymPoint& y) {
  return pseudo_norm(ctx, generalized_distance(x, y));
}

namespace {

Mat random_rotation_step(int n, double step, Rng& rng) {
  Mat k = la::gaussian(n, n, rng);
  k = 0.5 * (k - k.transpose().eval());
  return Mat((step / std::max(k.norm(), 1e-300)) * k).exp();
}

}  // namespace

BusemannSup busemann_sup(const FinslerContext& ctx, const SymPoint& x, const SymPoint& y, int samples,
                         std::uint64_t seed, Exec exec) {
  if (samples < 1) throw InputError("need at least one sample");
  const int n = x.dim();
  const std::vector<int> type = type_of_weights(ctx.tau);
  std::vector<double> values(samples);
  std::vector<Mat> frames(samples);
  for_each_index(samples, exec, [&](long i) {
    Rng rng = stream(seed, i);
    frames[i] = la::haar_orthogonal(n, rng);
    values[i] = busemann_value({{type, frames[i]}, ctx.tau}, x, y);
  });
  std::vector<int> order(samples);
  std::iota(order.begin(), order.end(), 0);
  const int top = std::min(samples, 5);
  std::partial_sort(order.begin(), order.begin() + top, order.end(), [&](int a, int b) { return values[a] > values[b]; });

  BusemannSup out{values[order[0]], values[order[0]], {{type, frames[order[0]]}, ctx.tau}};
  std::vector<std::pair<double, Mat>> refined(top);
  for_each_index(top, exec, [&](long r) {
    Rng rng = stream(seed ^ 0x9e3779b97f4a7c15ULL, r);
    Mat q = frames[order[r]];
    double best = values[order[r]];
    double step = 0.2;
    for (int it = 0; it < 2000 && step > 1e-9; ++it) {
      const Mat cand = la::gram_schmidt(random_rotation_step(n, step, rng) * q, Mat::Identity(n, n));
      const double v = busemann_value({{type, cand}, ctx.tau}, x, y);
      if (v > best) {
        best = v;
        q = cand;
        step = std::min(0.5, step * 1.5);
      } else {
        step *= 0.85;
      }
    }
    refined[r] = {best, q};
  });
  for (const auto& [v, q] : refined)
    if (v > out.refined) {
      out.refined = v;
      out.argmax = {{type, q}, ctx.tau};
    }
  return out;
}

Projection nearest_point_projection(const FinslerContext& ctx, const Surface& u, const SymPoint& x,
                                    const ProjectionOptions& opt) {
  auto f = [&](h2::Point z) { return finsler_distance(ctx, x, u.point(z)); };
  auto slope_residual = [&](h2::Point z, double fz) {
    const double h = 1e-7;
    double worst = 0.0;
    for (int k = 0; k < 64; ++k) {
      const double a = 2 * std::numbers::pi * k / 64;
      worst = std::max(worst, (fz - f(h2::exp_at(z, h * Vec2(std::cos(a), std::sin(a))))) / h);
    }
    return worst;
  };

  h2::Point z = opt.start;
  double fz = f(z);
  double step = 0.5;
  int it = 0;
  for (; it < opt.max_iter && step > 1e-11; ++it) {
    const double h = 1e-6;
    Vec2 g;
    for (int k = 0; k < 2; ++k) g(k) = (f(h2::exp_at(z, h * Vec2::Unit(k))) - f(h2::exp_at(z, -h * Vec2::Unit(k)))) / (2 * h);
    bool moved = false;
    if (g.norm() > 1e-12) {
      // Armijo along the negative gradient.
      for (double t = std::min(step * 4, 2.0); t > 1e-12; t *= 0.5) {
        const h2::Point zn = h2::exp_at(z, -t * g.normalized());
        const double fn = f(zn);
        if (fn < fz - 1e-4 * t * g.norm()) {
          z = zn;
          fz = fn;
          step = t;
          moved = true;
          break;
        }
      }
    }
    if (!moved) {
      // Kink of the max-type norm: rotating pattern search.
      const double offset = std::numbers::pi * (std::sqrt(5.0) - 1.0) * it;
      for (int k = 0; k < 16 && !moved; ++k) {
        const double a = offset + 2 * std::numbers::pi * k / 16;
        const h2::Point zn = h2::exp_at(z, step * Vec2(std::cos(a), std::sin(a)));
        const double fn = f(zn);
        if (fn < fz - 1e-14) {
          z = zn;
          fz = fn;
          moved = true;
        }
      }
      if (!moved) step *= 0.5;
    }
  }
  const double residual = slope_residual(z, fz);
  if (residual > opt.tol)
    throw NumericalError("nearest-point projection did not converge: z = (" + std::to_string(z.real()) + ", " +
                         std::to_string(z.imag()) + "), value " + std::to_string(fz) + ", residual " +
                         std::to_string(residual) + " after " + std::to_string(it) + " iterations");
  return {z, fz, residual, it};
}

}  // namespace ng

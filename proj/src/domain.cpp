#include "ng/domain.hpp"

#include "ng/busemann.hpp"
#include "ng/immersions.hpp"
#include "ng/linalg.hpp"
#include "ng/parallel.hpp"
#include "ng/pencils.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <set>

namespace ng {

std::string to_string(Membership m) {
  switch (m) {
    case Membership::Inside: return "inside";
    case Membership::Outside: return "outside";
    default: return "ambiguous";
  }
}

namespace {

struct LocalModel {
  double value;
  Vec2 grad;
  Mat2 hess;
};

// Value, gradient and Hessian of f o exp_z in normal coordinates at z.
template <class F>
LocalModel local_model(const F& f, h2::Point z, double h) {
  auto at = [&](double x, double y) { return f(h2::exp_at(z, Vec2(x, y))); };
  const double f0 = f(z);
  const double fp1 = at(h, 0), fm1 = at(-h, 0), fp2 = at(0, h), fm2 = at(0, -h);
  const double fpp = at(h, h), fpm = at(h, -h), fmp = at(-h, h), fmm = at(-h, -h);
  LocalModel m{f0, Vec2((fp1 - fm1) / (2 * h), (fp2 - fm2) / (2 * h)), Mat2()};
  m.hess(0, 0) = (fp1 - 2 * f0 + fm1) / (h * h);
  m.hess(1, 1) = (fp2 - 2 * f0 + fm2) / (h * h);
  m.hess(0, 1) = m.hess(1, 0) = (fpp - fpm - fmp + fmm) / (4 * h * h);
  return m;
}

h2::Point clamp_to_disk(h2::Point c, h2::Point z, double r) {
  const Vec2 xi = h2::log_at(c, z);
  const double len = xi.norm();
  return len <= r ? z : h2::exp_at(c, xi * (r / len));
}

}  // namespace

DomainQuery domain_membership(const IdealPoint& a, const Surface& u, const SymPoint& o, const DomainOptions& opt) {
  if (opt.radii.empty()) throw InputError("at least one disk radius is required");
  validate(a);
  if (a.dim() != u.dim()) throw InputError("ideal point and surface dimensions differ");
  auto f = [&](h2::Point z) { return busemann_value_frame(a, o, u.frame_inverse(z)); };
  // Around z, b_{a,o} o u(w) - b_{a,o} o u(z) = b_{h_z^-1 a, q0}(h_z^-1 h_w q0); far frames stay out of the stencil.
  const SymPoint q0 = SymPoint::origin(a.dim());
  auto recentered = [&](h2::Point z) -> std::function<double(h2::Point)> {
    const IdealPoint az = act(u.frame_inverse(z), a);
    return [&u, az, z, q0](h2::Point w) { return busemann_value_frame(az, q0, u.relative_frame_inverse(z, w)); };
  };
  const h2::Point c = opt.center;
  DomainQuery q;
  h2::Point z = c;
  for (double r : opt.radii) {
    q.radius = r;
    auto fz = recentered(z);
    LocalModel m = local_model(fz, z, opt.fd_step);
    bool stalled = false;
    for (int it = 0; it < opt.max_iter && m.grad.norm() >= opt.grad_tol; ++it) {
      ++q.iterations;
      Eigen::SelfAdjointEigenSolver<Mat2> es(m.hess);
      const double shift = std::max(0.0, -es.eigenvalues()(0)) + 1e-6;
      Vec2 step = -(m.hess + shift * Mat2::Identity()).ldlt().solve(m.grad);
      if (step.norm() > 1.0) step /= step.norm();
      if (step.dot(m.grad) >= 0) step = -m.grad / std::max(1.0, m.grad.norm());
      bool moved = false;
      for (double t = 1.0; t > 1e-10; t *= 0.5) {
        const h2::Point cand = clamp_to_disk(c, h2::exp_at(z, t * step), r);
        const double fc = fz(cand);
        if (fc < m.value - 1e-4 * t * std::abs(step.dot(m.grad)) || (fc < m.value && t < 1e-6)) {
          z = cand;
          moved = true;
          break;
        }
      }
      if (!moved) {
        stalled = true;
        break;
      }
      fz = recentered(z);
      m = local_model(fz, z, opt.fd_step);
    }
    m.value = f(z);
    const bool on_boundary = h2::distance(c, z) > r - 1e-6;
    if (!on_boundary && m.grad.norm() < opt.grad_tol) {
      Eigen::SelfAdjointEigenSolver<Mat2> es(m.hess);
      q.minimizer = z;
      q.value = m.value;
      q.gradient_norm = m.grad.norm();
      q.hessian_eigenvalues = es.eigenvalues();
      if (es.eigenvalues()(0) > opt.flat_tol) {
        q.result = Membership::Inside;
        q.reason = "critical point";
        return q;
      }
      // A degenerate minimum: not proper if the function stays flat along the soft direction.
      const Vec2 e = es.eigenvectors().col(0);
      const double rise = std::min(f(h2::exp_at(z, opt.flat_radius * e)), f(h2::exp_at(z, -opt.flat_radius * e))) - m.value;
      if (rise <= opt.escape_slope * opt.flat_radius) {
        q.result = Membership::Outside;
        q.reason = "flat minimum";
      } else {
        q.result = Membership::Ambiguous;
        q.reason = "no conclusion";
      }
      return q;
    }
    if (on_boundary || stalled) {
      const Vec2 dir = h2::log_at(c, z).normalized();
      const double outer = f(h2::exp_at(c, r * dir)), inner = f(h2::exp_at(c, 0.5 * r * dir));
      const double slope = (outer - inner) / (0.5 * r);
      const double local = (outer - f(h2::exp_at(c, (r - 0.5) * dir))) / 0.5;
      q.minimizer = z;
      q.value = m.value;
      q.gradient_norm = m.grad.norm();
      q.escape_slope = slope;
      q.escape_direction = dir;
      if (!(slope <= -opt.escape_slope && local <= -opt.escape_slope)) {
        q.result = Membership::Ambiguous;
        q.reason = "no conclusion";
        return q;
      }
      q.result = Membership::Outside;
      q.reason = "escape";
      continue;  // sustained to the next disk
    }
    q.minimizer = z;
    q.value = m.value;
    q.gradient_norm = m.grad.norm();
    q.result = Membership::Ambiguous;
    q.reason = "no conclusion";
    return q;
  }
  return q;
}

std::vector<DomainQuery> domain_membership_batch(const std::vector<IdealPoint>& a, const Surface& u, const SymPoint& o,
                                                 const DomainOptions& opt, Exec exec) {
  std::vector<DomainQuery> out(a.size());
  for_each_index(static_cast<long>(a.size()), exec, [&](long i) { out[i] = domain_membership(a[i], u, o, opt); });
  return out;
}

h2::Point fibration_project(const IdealPoint& a, const Surface& u, const SymPoint& o, const DomainOptions& opt) {
  const DomainQuery q = domain_membership(a, u, o, opt);
  if (q.result != Membership::Inside)
    throw NumericalError("ideal point is not in the domain (" + to_string(q.result) + ", " + q.reason + ")");
  return q.minimizer;
}

// ---- fibers ----

namespace {

std::vector<Mat> so_generators(int n) {
  std::vector<Mat> out;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      Mat e = Mat::Zero(n, n);
      e(i, j) = -1.0 / std::sqrt(2.0);
      e(j, i) = 1.0 / std::sqrt(2.0);
      out.push_back(e);
    }
  return out;
}

}  // namespace

FiberReport fiber_vs_pencil_base(const Surface& u, const Vec& tau, h2::Point y, const FiberOptions& opt) {
  const SurfaceJet jet = u.jet(y);
  const SymPoint& p = jet.point;
  const int n = p.dim();
  const std::vector<int> type = type_of_weights(tau);
  const Mat lt = to_origin(p), lti = lt.inverse();
  const std::vector<Mat> ks = so_generators(n);
  const SymPoint q0 = SymPoint::origin(n);
  DomainOptions dopt = opt.domain;
  dopt.center = y;

  auto ideal = [&](const Mat& r) { return make_ideal(FlagPoint::from_vectors(lti * r, type), tau); };
  // Surface gradient of b_a o u at y.
  auto grad = [&](const Mat& r) {
    const SymTangent v = direction_vector(ideal(r), p);
    return Vec2(inner(v, jet.d1), inner(v, jet.d2));
  };

  FiberReport rep;
  rep.y = y;
  std::vector<std::optional<IdealPoint>> found(opt.samples);
  std::vector<char> critical(opt.samples, 0);
  for_each_index(opt.samples, opt.exec, [&](long i) {
    Rng rng = stream(opt.seed, i);
    Mat r = la::haar_orthogonal(n, rng);
    Vec2 g = grad(r);
    const double h = 1e-6;
    for (int it = 0; it < 60 && g.norm() > 1e-11; ++it) {
      Mat j(2, ks.size());
      for (std::size_t b = 0; b < ks.size(); ++b) j.col(b) = (grad((h * ks[b]).exp() * r) - grad((-h * ks[b]).exp() * r)) / (2 * h);
      const Vec step = -j.completeOrthogonalDecomposition().solve(Vec(g));
      bool moved = false;
      for (double t = 1.0; t > 1e-4; t *= 0.5) {
        Mat k = Mat::Zero(n, n);
        for (std::size_t b = 0; b < ks.size(); ++b) k += t * step(b) * ks[b];
        const Mat cand = k.exp() * r;
        const Vec2 gc = grad(cand);
        if (gc.norm() < g.norm()) {
          r = cand;
          g = gc;
          moved = true;
          break;
        }
      }
      if (!moved) break;
    }
    if (g.norm() > 1e-9) return;
    critical[i] = 1;
    const IdealPoint a = ideal(r);
    const DomainQuery q = domain_membership(a, u, q0, dopt);
    if (q.result == Membership::Inside && h2::distance(q.minimizer, y) < opt.tol) found[i] = a;
  });
  for (int i = 0; i < opt.samples; ++i) {
    rep.candidates += critical[i];
    if (found[i]) rep.fiber.push_back(*found[i]);
    else if (critical[i]) ++rep.rejected;
  }
  if (rep.fiber.empty()) throw NumericalError("empty fiber sample at the requested point");

  const Pencil pencil = make_pencil(p, {jet.d1.mat, jet.d2.mat});
  BaseOptions bopt;
  bopt.seed = opt.seed + 1;
  bopt.exec = opt.exec;
  const FlagBase base = base_flags(pencil, tau, bopt);
  for (const FlagPoint& f : base.flags) {
    const IdealPoint a = make_ideal(f, tau);
    if (submersion_rank(pencil, a) == pencil.rank()) rep.base.push_back(a);
  }
  if (rep.base.empty()) throw NumericalError("the regular base is empty");

  std::vector<double> to_base(rep.fiber.size(), 0.0);
  for_each_index(static_cast<long>(rep.fiber.size()), opt.exec, [&](long i) {
    const auto proj = project_to_base(pencil, rep.fiber[i]);
    to_base[i] = proj ? flag_distance(rep.fiber[i].flag, proj->flag) : std::numeric_limits<double>::infinity();
  });
  const long checks = std::min<long>(opt.base_checks, static_cast<long>(rep.base.size()));
  std::vector<double> proj_dist(checks, 0.0);
  for_each_index(checks, opt.exec, [&](long i) {
    const IdealPoint& a = rep.base[i * rep.base.size() / checks];
    const DomainQuery q = domain_membership(a, u, q0, dopt);
    proj_dist[i] = q.result == Membership::Inside ? h2::distance(q.minimizer, y) : std::numeric_limits<double>::infinity();
  });
  rep.fiber_to_base = *std::max_element(to_base.begin(), to_base.end());
  rep.base_projection = *std::max_element(proj_dist.begin(), proj_dist.end());
  rep.matching_distance = std::max(rep.fiber_to_base, rep.base_projection);

  auto directed = [](const std::vector<IdealPoint>& xs, const std::vector<IdealPoint>& ys) {
    double out = 0.0;
    for (const auto& x : xs) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& yy : ys) best = std::min(best, flag_distance(x.flag, yy.flag));
      out = std::max(out, best);
    }
    return out;
  };
  rep.hausdorff = std::max(directed(rep.fiber, rep.base), directed(rep.base, rep.fiber));
  return rep;
}

// ---- limit flags and thickenings ----

FlagPoint attracting_flag(const Mat& g, int max_iter) {
  const int n = static_cast<int>(g.rows());
  Mat q = Mat::Identity(n, n);
  for (int it = 0; it < max_iter; ++it) {
    Eigen::HouseholderQR<Mat> qr(g * q);
    Mat next = qr.householderQ() * Mat::Identity(n, n);
    const Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < n; ++j)
      if (r(j, j) < 0) next.col(j) *= -1.0;
    const double change = (next - q).cwiseAbs().maxCoeff();
    q = next;
    if (change < 1e-12) break;
  }
  return canonical(FlagPoint::full(q));
}

std::vector<FlagPoint> boundary_flags(const Sl2Embedding& emb, const std::vector<Mat2>& gens, int max_len, double merge,
                                      Exec exec) {
  const std::vector<Mat2> words = surface_group_elements(gens, max_len);
  std::vector<FlagPoint> flags(words.size());
  for_each_index(static_cast<long>(words.size()), exec, [&](long i) { flags[i] = attracting_flag(emb.group(words[i])); });
  std::set<std::vector<long>> seen;
  std::vector<FlagPoint> out;
  for (const FlagPoint& f : flags) {
    const Vec e = flag_embedding(f);
    std::vector<long> key(e.size());
    for (int k = 0; k < e.size(); ++k) key[k] = std::lround(e(k) / merge);
    if (seen.insert(key).second) out.push_back(f);
  }
  return out;
}

bool thickening_domain_membership(const IdealPoint& a, const std::vector<FlagPoint>& boundary, const Vec& tau0) {
  if (boundary.empty()) return true;
  const int n = a.dim();
  // Transverse pairs are in the generic relative position; decide that case once.
  Mat rev = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i) rev(n - 1 - i, i) = 1.0;
  const bool generic_in_k = thickening_membership(make_ideal(FlagPoint::standard(n, a.flag.type), a.weights),
                                                  make_ideal(FlagPoint::full(rev), tau0));
  const Mat b = la::gram_schmidt(a.flag.basis, Mat::Identity(n, n));
  for (const FlagPoint& f : boundary) {
    bool transverse = true;
    for (int k : a.flag.type) {
      Mat m(n, n);
      m << b.leftCols(k), f.basis.leftCols(n - k);
      transverse = transverse && std::abs(m.determinant()) > 1e-9;
    }
    const bool in_k = transverse ? generic_in_k : thickening_membership(a, make_ideal(f, tau0));
    if (in_k) return false;
  }
  return true;
}

IdealPoint perturb(const IdealPoint& a, double eps, Rng& rng) {
  const int n = a.dim();
  const Mat g = la::gaussian(n, n, rng);
  Mat k = g - g.transpose();
  k *= std::sqrt(2.0) / k.norm();
  return make_ideal(FlagPoint::from_vectors((eps * k).exp() * a.flag.basis, a.flag.type), a.weights);
}

DomainComparison compare_domains(const Surface& u, const Vec& tau, const Vec& tau0, const std::vector<FlagPoint>& boundary,
                                 const CompareOptions& opt) {
  const int n = u.dim();
  const SymPoint q0 = SymPoint::origin(n);
  const std::vector<int> type = type_of_weights(tau);
  struct Result {
    IdealPoint a;
    Membership busemann;
    bool thick;
    bool band;
  };
  std::vector<Result> res(opt.samples);
  for_each_index(opt.samples, opt.exec, [&](long i) {
    Rng rng = stream(opt.seed, i);
    const IdealPoint a = make_ideal(random_flag(n, type, rng), tau);
    const Membership mb = domain_membership(a, u, q0, opt.domain).result;
    const bool th = thickening_domain_membership(a, boundary, tau0);
    bool band = false;
    for (int k = 0; k < opt.perturbations && !band; ++k) {
      const IdealPoint b = perturb(a, opt.band, rng);
      band = domain_membership(b, u, q0, opt.domain).result != mb || thickening_domain_membership(b, boundary, tau0) != th;
    }
    res[i] = {a, mb, th, band};
  });
  DomainComparison out;
  out.samples = opt.samples;
  for (const Result& r : res) {
    out.band_flags.push_back(r.band);
    out.ambiguous += r.busemann == Membership::Ambiguous;
    if (r.band) {
      ++out.in_band;
      continue;
    }
    if ((r.busemann == Membership::Inside) == r.thick && r.busemann != Membership::Ambiguous) {
      ++out.agree;
    } else {
      ++out.disagree;
      out.disagreements.push_back(r.a);
    }
  }
  const long counted = out.agree + out.disagree;
  out.agreement = counted ? double(out.agree) / counted : 0.0;
  return out;
}

// ---- the projective example ----

double veronese_form(const Vec& c) {
  if (c.size() != 3) throw InputError("expected a vector in R^3");
  return 4.0 * c(0) * c(2) - 2.0 * c(1) * c(1);
}

double veronese_conic_distance(const Vec& c) {
  if (c.size() != 3) throw InputError("expected a vector in R^3");
  const Vec v = c.normalized();
  // Null vectors (cos^2 t, sqrt2 cos t sin t, sin^2 t); maximize |<v, null>| / |null|.
  auto score = [&](double t) {
    const double ct = std::cos(t), st = std::sin(t);
    const Eigen::Vector3d w(ct * ct, std::sqrt(2.0) * ct * st, st * st);
    return std::abs(v.dot(w)) / w.norm();
  };
  const int grid = 720;
  double best_t = 0.0, best = -1.0;
  for (int k = 0; k < grid; ++k) {
    const double t = std::numbers::pi * k / grid;
    if (score(t) > best) best = score(t), best_t = t;
  }
  double lo = best_t - std::numbers::pi / grid, hi = best_t + std::numbers::pi / grid;
  for (int it = 0; it < 100; ++it) {
    const double m1 = lo + (hi - lo) / 3, m2 = hi - (hi - lo) / 3;
    if (score(m1) < score(m2)) lo = m1;
    else hi = m2;
  }
  return std::acos(std::clamp(score(0.5 * (lo + hi)), 0.0, 1.0));
}

std::vector<Vec> projective_grid(int count) {
  if (count < 1) throw InputError("grid size must be positive");
  std::vector<Vec> out;
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (int k = 0; k < count; ++k) {
    const double z = 1.0 - (k + 0.5) / count;
    const double r = std::sqrt(1.0 - z * z);
    const double phi = golden * k;
    out.push_back(Eigen::Vector3d(r * std::cos(phi), r * std::sin(phi), z));
  }
  return out;
}

}  // namespace ng

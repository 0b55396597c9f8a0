#include "ng/pencils.hpp"

#include "ng/linalg.hpp"
#include "ng/parallel.hpp"
#include "ng/rootsys.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>

namespace ng {

Pencil make_pencil(const SymPoint& base, const std::vector<Mat>& gens) {
  Pencil p{base, {}};
  for (const Mat& g : gens) {
    SymTangent v = SymTangent::make(base, g);
    for (const auto& e : p.gens) v.mat -= inner(v, e) * e.mat;
    if (norm(v) < 1e-10) throw InputError("pencil generators are linearly dependent");
    p.gens.push_back(normalized(v));
  }
  return p;
}

void validate(const QuadricPencil& p) {
  const int n = p.dim();
  Mat stacked(n * n, p.quads.size());
  for (std::size_t i = 0; i < p.quads.size(); ++i) {
    const Mat& q = p.quads[i];
    if (q.rows() != n || q.cols() != n) throw InputError("quadrics must be square of a common size");
    if (la::max_abs(q - q.transpose()) > 1e-12 * std::max(1.0, la::max_abs(q))) throw InputError("quadrics must be symmetric");
    stacked.col(i) = q.reshaped();
  }
  if (!p.quads.empty()) {
    Eigen::JacobiSVD<Mat> svd(stacked);
    if (svd.singularValues().minCoeff() < 1e-10 * svd.singularValues().maxCoeff())
      throw InputError("quadrics are linearly dependent");
  }
}

QuadricPencil preset_pencil(const std::string& name) {
  Mat a(3, 3), b(3, 3);
  if (name == "P_red") {
    a << 0, 0, 1, 0, 0, 0, 1, 0, 0;
    b = Vec::Map(std::array<double, 3>{1, 0, -1}.data(), 3).asDiagonal();
  } else if (name == "P_irr") {
    a << 0, 1, 0, 1, 0, 1, 0, 1, 0;
    b = Vec::Map(std::array<double, 3>{2, 0, -2}.data(), 3).asDiagonal();
  } else {
    throw InputError("unknown pencil preset '" + name + "' (expected P_red or P_irr)");
  }
  return {{a, b}};
}

Pencil tangent_pencil(const QuadricPencil& q) {
  validate(q);
  for (const Mat& m : q.quads)
    if (std::abs(m.trace()) > 1e-12 * std::max(1.0, la::max_abs(m))) throw InputError("tangent pencils need trace-free quadrics");
  return make_pencil(SymPoint::origin(q.dim()), q.quads);
}

// ---- clustering ----

Vec projector_embedding(const Vec& v) {
  const Vec u = v.normalized();
  return Mat(u * u.transpose() / std::sqrt(2.0)).reshaped();
}

Vec flag_embedding(const FlagPoint& f) {
  const int n = f.dim();
  Vec out(n * n * static_cast<int>(f.type.size()));
  for (std::size_t j = 0; j < f.type.size(); ++j) {
    const Mat b = f.basis.leftCols(f.type[j]);
    out.segment(j * n * n, n * n) = Mat(b * b.transpose() / std::sqrt(2.0)).reshaped();
  }
  return out;
}

std::vector<int> cluster_points(const std::vector<Vec>& pts, double radius) {
  const int m = static_cast<int>(pts.size());
  std::vector<int> parent(m);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j)
      if ((pts[i] - pts[j]).norm() < radius) parent[find(i)] = find(j);
  std::vector<int> labels(m);
  std::map<int, int> ids;
  for (int i = 0; i < m; ++i) {
    const int root = find(i);
    auto it = ids.find(root);
    if (it == ids.end()) it = ids.emplace(root, static_cast<int>(ids.size())).first;
    labels[i] = it->second;
  }
  return labels;
}

namespace {

// Numerical dimension of a component from local PCA around a few anchors.
int local_dimension(const std::vector<Vec>& emb, const std::vector<int>& members) {
  if (members.size() < 3) return 0;
  std::vector<int> dims;
  const int anchors = std::min<int>(5, static_cast<int>(members.size()));
  for (int a = 0; a < anchors; ++a) {
    const Vec& p = emb[members[a * members.size() / anchors]];
    std::vector<std::pair<double, int>> d;
    for (int j : members) d.push_back({(emb[j] - p).norm(), j});
    const int nb = std::min<int>(16, static_cast<int>(d.size()));
    std::partial_sort(d.begin(), d.begin() + nb, d.end());
    Mat x(p.size(), nb);
    for (int t = 0; t < nb; ++t) x.col(t) = emb[d[t].second];
    x = x.colwise() - x.rowwise().mean();
    const Vec s = Eigen::JacobiSVD<Mat>(x).singularValues();
    int dim = 0;
    if (s(0) > 1e-9)
      for (int t = 0; t < s.size(); ++t) dim += s(t) > 0.3 * s(0);
    dims.push_back(dim);
  }
  std::nth_element(dims.begin(), dims.begin() + dims.size() / 2, dims.end());
  return dims[dims.size() / 2];
}

std::vector<BaseComponent> summarize(const std::vector<Vec>& emb, const std::vector<int>& labels,
                                     const std::vector<double>& residuals, const std::string& kind) {
  const int count = labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end()) + 1;
  std::vector<BaseComponent> out(count);
  std::vector<std::vector<int>> members(count);
  for (std::size_t i = 0; i < labels.size(); ++i) members[labels[i]].push_back(static_cast<int>(i));
  for (int c = 0; c < count; ++c) {
    out[c].id = c;
    out[c].size = static_cast<long>(members[c].size());
    double sum = 0;
    for (int i : members[c]) sum += residuals[i];
    out[c].mean_residual = sum / members[c].size();
    out[c].local_dim = local_dimension(emb, members[c]);
    out[c].kind = kind;
  }
  return out;
}

Vec canonical_sign(Vec v) {
  v.normalize();
  for (int i = 0; i < v.size(); ++i)
    if (std::abs(v(i)) > 1e-12) {
      if (v(i) < 0) v = -v;
      break;
    }
  return v;
}

double quad_residual(const QuadricPencil& p, const Vec& v) {
  const Vec u = v.normalized();
  double r = 0;
  for (const Mat& q : p.quads) r = std::max(r, std::abs(u.dot(q * u)));
  return r;
}

}  // namespace

// ---- projective base ----

ProjectiveBase base_projective(const QuadricPencil& p, const BaseOptions& opt) {
  if (p.dim() == 3 && p.quads.size() == 2) return base_projective_exact(p, opt);
  return base_projective_sampled(p, opt);
}

ProjectiveBase base_projective_exact(const QuadricPencil& p, const BaseOptions& opt) {
  validate(p);
  if (p.dim() != 3 || p.quads.size() != 2) throw InputError("the exact base needs n = 3 and two quadrics");
  const Mat q1 = p.quads[0] / p.quads[0].norm(), q2 = p.quads[1] / p.quads[1].norm();
  auto member = [&](double phi) { return Mat(std::cos(phi) * q1 + std::sin(phi) * q2); };

  // A degenerate member: a root of the binary cubic det, or a generic member if det vanishes identically.
  const int grid = 64;
  std::vector<double> dets(grid + 1);
  double dmax = 0;
  for (int k = 0; k <= grid; ++k) {
    dets[k] = member(std::numbers::pi * k / grid).determinant();
    dmax = std::max(dmax, std::abs(dets[k]));
  }
  double phi = 0.0;
  if (dmax < 1e-12) {
    double best = -1;
    for (int k = 0; k < grid; ++k) {
      const double t = std::numbers::pi * (k + 0.5) / grid;
      const double s = Eigen::JacobiSVD<Mat>(member(t)).singularValues()(1);
      if (s > best) best = s, phi = t;
    }
  } else {
    int k = 0;
    while (k < grid && dets[k] * dets[k + 1] > 0) ++k;
    double lo = std::numbers::pi * k / grid, hi = std::numbers::pi * (k + 1) / grid;
    double flo = dets[k];
    if (flo == 0.0) hi = lo;
    for (int it = 0; it < 200 && hi - lo > 1e-17; ++it) {
      const double mid = 0.5 * (lo + hi), fm = member(mid).determinant();
      if ((fm < 0) == (flo < 0)) lo = mid, flo = fm;
      else hi = mid;
    }
    phi = 0.5 * (lo + hi);
  }
  const Mat m = member(phi), other = member(phi + std::numbers::pi / 2);

  Eigen::SelfAdjointEigenSolver<Mat> es(m);
  std::vector<int> idx{0, 1, 2};
  std::sort(idx.begin(), idx.end(), [&](int a, int b) { return std::abs(es.eigenvalues()(a)) > std::abs(es.eigenvalues()(b)); });
  const double la_ = es.eigenvalues()(idx[0]), lb = es.eigenvalues()(idx[1]);
  const Vec ua = es.eigenvectors().col(idx[0]), ub = es.eigenvectors().col(idx[1]), ker = es.eigenvectors().col(idx[2]);
  const double tol = 1e-9 * std::abs(la_);

  std::vector<Vec> normals;  // planes {n . v = 0} contained in {m = 0}
  std::vector<Vec> pts;
  if (std::abs(lb) < tol) {
    normals.push_back(ua);
  } else if (la_ * lb < 0) {
    normals.push_back((std::sqrt(std::abs(la_)) * ua + std::sqrt(std::abs(lb)) * ub).normalized());
    normals.push_back((std::sqrt(std::abs(la_)) * ua - std::sqrt(std::abs(lb)) * ub).normalized());
  } else if (std::abs(ker.dot(other * ker)) < 1e-10) {
    pts.push_back(ker);
  }

  std::vector<Mat> lines;
  for (const Vec& nv : normals) {
    const Mat e = la::orthonormal_complement(nv);
    const Eigen::Matrix2d r = (e.transpose() * other * e);
    if (r.cwiseAbs().maxCoeff() < 1e-10) {
      lines.push_back(e);
      continue;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> rs(0.5 * (r + r.transpose()));
    const double m0 = rs.eigenvalues()(0), m1 = rs.eigenvalues()(1);
    const double rt = 1e-10 * std::max(std::abs(m0), std::abs(m1));
    const Eigen::Vector2d w0 = rs.eigenvectors().col(0), w1 = rs.eigenvectors().col(1);
    if (std::abs(m0) < rt) {
      pts.push_back(e * w0);
    } else if (std::abs(m1) < rt) {
      pts.push_back(e * w1);
    } else if (m0 * m1 < 0) {
      pts.push_back(e * (std::sqrt(std::abs(m1)) * w0 + std::sqrt(std::abs(m0)) * w1));
      pts.push_back(e * (std::sqrt(std::abs(m1)) * w0 - std::sqrt(std::abs(m0)) * w1));
    }
  }

  // Drop points on line components and duplicates.
  std::vector<Vec> kept;
  for (const Vec& v0 : pts) {
    const Vec v = canonical_sign(v0);
    bool drop = false;
    for (const Mat& l : lines) drop = drop || (v - l * (l.transpose() * v)).norm() < 1e-9;
    for (const Vec& w : kept) drop = drop || (projector_embedding(v) - projector_embedding(w)).norm() < 1e-9;
    if (!drop) kept.push_back(v);
  }

  ProjectiveBase out;
  out.method = "exact";
  int label = 0;
  for (const Vec& v : kept) {
    out.points.push_back(v);
    out.labels.push_back(label);
    out.components.push_back({label, 1, quad_residual(p, v), 0, "point"});
    ++label;
  }
  for (const Mat& l : lines) {
    double sum = 0;
    for (int k = 0; k < opt.line_samples; ++k) {
      const double t = std::numbers::pi * k / opt.line_samples;
      const Vec v = canonical_sign(std::cos(t) * l.col(0) + std::sin(t) * l.col(1));
      sum += quad_residual(p, v);
      out.points.push_back(v);
      out.labels.push_back(label);
    }
    out.components.push_back({label, opt.line_samples, sum / opt.line_samples, 1, "line"});
    ++label;
  }
  return out;
}

ProjectiveBase base_projective_sampled(const QuadricPencil& p, const BaseOptions& opt) {
  if (!p.quads.empty()) validate(p);
  const int n = p.dim() > 0 ? p.dim() : 3;
  const int d = static_cast<int>(p.quads.size());
  std::vector<Mat> q;
  for (const Mat& m : p.quads) q.push_back(m / m.norm());
  std::vector<Vec> pts(opt.samples);
  std::vector<char> ok(opt.samples, 0);
  for_each_index(opt.samples, opt.exec, [&](long i) {
    Rng rng = stream(opt.seed, i);
    Vec v = la::random_unit(n, rng);
    auto f = [&](const Vec& u) {
      Vec r(d);
      for (int k = 0; k < d; ++k) r(k) = u.dot(q[k] * u);
      return r;
    };
    Vec fv = f(v);
    for (int it = 0; it < 50 && d > 0 && fv.cwiseAbs().maxCoeff() > 1e-14; ++it) {
      Mat j(d, n);
      const Mat proj = Mat::Identity(n, n) - v * v.transpose();
      for (int k = 0; k < d; ++k) j.row(k) = 2.0 * (q[k] * v).transpose() * proj;
      const Vec step = -j.completeOrthogonalDecomposition().solve(fv);
      bool moved = false;
      for (double t = 1.0; t > 1e-4; t *= 0.5) {
        const Vec cand = (v + t * step).normalized();
        const Vec fc = f(cand);
        if (fc.norm() < fv.norm()) {
          v = cand;
          fv = fc;
          moved = true;
          break;
        }
      }
      if (!moved) break;
    }
    pts[i] = canonical_sign(v);
    ok[i] = d == 0 || fv.cwiseAbs().maxCoeff() < 1e-12;
  });
  ProjectiveBase out;
  out.method = "sampled";
  std::vector<Vec> emb;
  std::vector<double> res;
  for (int i = 0; i < opt.samples; ++i) {
    if (!ok[i]) {
      ++out.dropped;
      continue;
    }
    out.points.push_back(pts[i]);
    emb.push_back(projector_embedding(pts[i]));
    res.push_back(d == 0 ? 0.0 : quad_residual(p, pts[i]));
  }
  out.labels = cluster_points(emb, opt.radius);
  out.components = summarize(emb, out.labels, res, "cloud");
  return out;
}

// ---- flag bases ----

namespace {

std::vector<Mat> so_basis(int n) {
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

std::vector<Mat> frame_gens(const Pencil& p) {
  std::vector<Mat> out;
  for (const auto& g : p.gens) out.push_back(standard_form(g));
  return out;
}

// Gauss-Newton on SO(n) for 2n tr(R D R^T G_k) = 0; returns the final max residual.
double newton_to_base(const std::vector<Mat>& g, const std::vector<Mat>& ks, const Vec& tau, Mat& r) {
  const int n = static_cast<int>(r.rows());
  const int d = static_cast<int>(g.size());
  const double scale = 2.0 * n;
  auto f = [&](const Mat& rr) {
    const Mat s = rr * tau.asDiagonal() * rr.transpose();
    Vec out(d);
    for (int k = 0; k < d; ++k) out(k) = scale * (s * g[k]).trace();
    return out;
  };
  Vec fv = f(r);
  for (int it = 0; it < 50 && d > 0 && fv.cwiseAbs().maxCoeff() > 1e-14; ++it) {
    const Mat s = r * tau.asDiagonal() * r.transpose();
    Mat j(d, ks.size());
    for (int k = 0; k < d; ++k)
      for (std::size_t b = 0; b < ks.size(); ++b) j(k, b) = scale * ((ks[b] * s - s * ks[b]) * g[k]).trace();
    const Vec step = -j.completeOrthogonalDecomposition().solve(fv);
    bool moved = false;
    for (double t = 1.0; t > 1e-4; t *= 0.5) {
      Mat k = Mat::Zero(n, n);
      for (std::size_t b = 0; b < ks.size(); ++b) k += t * step(b) * ks[b];
      const Mat cand = k.exp() * r;
      const Vec fc = f(cand);
      if (fc.norm() < fv.norm()) {
        r = cand;
        fv = fc;
        moved = true;
        break;
      }
    }
    if (!moved) break;
  }
  return d == 0 ? 0.0 : fv.cwiseAbs().maxCoeff();
}

}  // namespace

std::optional<IdealPoint> project_to_base(const Pencil& p, const IdealPoint& a) {
  const Mat lt = to_origin(p.base);
  Mat r = la::gram_schmidt(lt * a.flag.basis, Mat::Identity(p.dim(), p.dim()));
  if (r.determinant() < 0) r.col(p.dim() - 1) *= -1.0;
  if (!(newton_to_base(frame_gens(p), so_basis(p.dim()), a.weights, r) < 1e-12)) return std::nullopt;
  return make_ideal(canonical(FlagPoint::from_vectors(lt.inverse() * r, a.flag.type)), a.weights);
}

FlagBase base_flags(const Pencil& p, const Vec& tau, const BaseOptions& opt) {
  const int n = p.dim();
  const std::vector<Mat> g = frame_gens(p);
  const std::vector<Mat> ks = so_basis(n);
  const Mat lti = to_origin(p.base).inverse();
  const std::vector<int> type = type_of_weights(tau);
  std::vector<Mat> frames(opt.samples);
  std::vector<double> res(opt.samples, std::numeric_limits<double>::infinity());
  for_each_index(opt.samples, opt.exec, [&](long i) {
    Rng rng = stream(opt.seed, i);
    frames[i] = la::haar_orthogonal(n, rng);
    res[i] = newton_to_base(g, ks, tau, frames[i]);
  });

  FlagBase out;
  std::vector<Vec> emb;
  std::vector<double> kept_res;
  for (int i = 0; i < opt.samples; ++i) {
    if (!(res[i] < 1e-12)) {
      ++out.dropped;
      continue;
    }
    const FlagPoint fp = canonical(FlagPoint::from_vectors(lti * frames[i], type));
    out.flags.push_back(fp);
    emb.push_back(flag_embedding(fp));
    kept_res.push_back(res[i]);
  }
  if (out.flags.empty())
    out.warning = "no base points found; the base is never empty because the flag manifold fibers over the sphere "
                  "of the pencil, so the sampling failed";
  out.labels = cluster_points(emb, opt.radius);
  out.components = summarize(emb, out.labels, kept_res, "cloud");
  return out;
}

FlagBase base_flag_sl3(const Pencil& p, const BaseOptions& opt) {
  if (p.dim() != 3 || p.rank() != 2) throw InputError("the SL(3) flag base needs n = 3 and a 2-pencil");
  const RootSystem sys = RootSystem::sl(3);
  return base_flags(p, normalized_coroot(sys, {0, 1}), opt);
}

double base_residual(const Pencil& p, const IdealPoint& a) {
  const SymTangent v = direction_vector(a, p.base);
  double r = 0;
  for (const auto& g : p.gens) r = std::max(r, std::abs(inner(v, g)));
  return r;
}

bool is_singular_base_point(const Pencil& p, const IdealPoint& a) {
  const Mat v = standard_form(direction_vector(a, p.base));
  const std::vector<Mat> g = frame_gens(p);
  const int n = p.dim();
  Mat m(n * n, g.size());
  for (std::size_t k = 0; k < g.size(); ++k) m.col(k) = la::commutator(g[k], v).reshaped();
  return Eigen::JacobiSVD<Mat>(m).singularValues().minCoeff() < 1e-8;
}

int submersion_rank(const Pencil& p, const IdealPoint& a) {
  const int n = p.dim();
  const Mat v = standard_form(direction_vector(a, p.base));
  const std::vector<Mat> g = frame_gens(p);
  const std::vector<Mat> ks = so_basis(n);
  Mat j(g.size(), ks.size());
  for (std::size_t i = 0; i < g.size(); ++i)
    for (std::size_t k = 0; k < ks.size(); ++k) j(i, k) = 2.0 * n * (la::commutator(ks[k], v) * g[i]).trace();
  const Vec s = Eigen::JacobiSVD<Mat>(j).singularValues();
  return static_cast<int>((s.array() > 1e-8).count());
}

// ---- regularity ----

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Regular: return "regular";
    case Verdict::NotRegular: return "not-regular";
    default: return "unknown";
  }
}

RegularityCertificate certify_tau_regular(const Pencil& p, const Vec& tau, int grid) {
  if (p.rank() != 2) throw InputError("regularity certification needs a 2-pencil");
  if (grid < 4) throw InputError("grid density too small");
  const RootSystem sys = RootSystem::sl(p.dim());
  const auto orbit = weyl_orbit(sys, tau);
  const SymTangent& g1 = p.gens[0];
  const SymTangent& g2 = p.gens[1];
  auto signed_values = [&](double t) {
    const Vec c = cartan_projection({p.base, std::cos(t) * g1.mat + std::sin(t) * g2.mat});
    Vec s(orbit.size());
    for (std::size_t w = 0; w < orbit.size(); ++w) s(w) = sys.inner(orbit[w], c);
    return s;
  };
  struct Arc {
    double lo, hi;
    Vec slo, shi;
    int depth;
  };
  RegularityCertificate out;
  out.margin = std::numeric_limits<double>::infinity();
  std::vector<Arc> stack;
  const double h = std::numbers::pi / grid;
  Vec prev = signed_values(0.0);
  for (int k = 0; k < grid; ++k) {
    Vec next = signed_values(h * (k + 1));
    stack.push_back({h * k, h * (k + 1), prev, next, 0});
    prev = std::move(next);
  }
  while (!stack.empty()) {
    Arc a = std::move(stack.back());
    stack.pop_back();
    const double mlo = a.slo.cwiseAbs().minCoeff(), mhi = a.shi.cwiseAbs().minCoeff();
    // A sign change of some <w tau, Cartan v> is a zero on the arc.
    const bool crossing = (a.slo.array() * a.shi.array() <= 0).any();
    if (crossing || std::min(mlo, mhi) < 1e-9) {
      out.verdict = Verdict::NotRegular;
      out.margin = 0.0;
      out.arc_lo = a.lo;
      out.arc_hi = a.hi;
      return out;
    }
    const double bound = 0.5 * (mlo + mhi - (a.hi - a.lo));
    if (bound > 0) {
      out.margin = std::min(out.margin, bound);
      continue;
    }
    if (a.depth >= 40) {
      out.verdict = Verdict::Unknown;
      out.margin = 0.0;
      out.arc_lo = a.lo;
      out.arc_hi = a.hi;
      return out;
    }
    const double mid = 0.5 * (a.lo + a.hi);
    const Vec smid = signed_values(mid);
    stack.push_back({a.lo, mid, a.slo, smid, a.depth + 1});
    stack.push_back({mid, a.hi, smid, a.shi, a.depth + 1});
  }
  out.verdict = Verdict::Regular;
  return out;
}

// ---- Segre symbols ----

SegreSymbol segre_symbol(const CMat& q1, const CMat& q2) {
  const int n = static_cast<int>(q1.rows());
  if (q1.cols() != n || q2.rows() != n || q2.cols() != n) throw InputError("Segre symbol needs two square forms of equal size");
  for (const CMat* q : {&q1, &q2}) {
    const double sc = std::max(1.0, q->cwiseAbs().maxCoeff());
    const bool sym = (*q - q->transpose()).cwiseAbs().maxCoeff() < 1e-10 * sc;
    const bool herm = (*q - q->adjoint()).cwiseAbs().maxCoeff() < 1e-10 * sc;
    if (!sym && !herm) throw InputError("Segre symbol needs symmetric or Hermitian forms");
  }
  auto reldet = [&](const CMat& m) { return std::abs(m.determinant()) / std::pow(std::max(m.norm(), 1e-300), n); };
  if (reldet(q2) < 1e-12) {
    bool irregular = true;
    for (double t : {0.3, 1.1, 2.0}) irregular = irregular && reldet(std::cos(t) * q1 + std::sin(t) * q2) < 1e-12;
    if (irregular) throw InputError("irregular pencil: every member is degenerate, e.g. cos(0.3) q1 + sin(0.3) q2");
    throw InputError("q2 is degenerate; choose a basis of the pencil with invertible q2");
  }
  const CMat a = q2.partialPivLu().solve(q1);
  Eigen::ComplexEigenSolver<CMat> es(a, false);
  const CVec ev = es.eigenvalues();

  // Clusters of eigenvalues by single linkage. A defective block of size m splits its eigenvalue by
  // ~eps^(1/m), so the coarsest clustering with a consistent Jordan structure wins.
  const double an = std::max(1.0, a.norm());
  const double spread = std::max(1.0, ev.cwiseAbs().maxCoeff());
  auto attempt = [&](double tol, SegreSymbol& out) {
    std::vector<int> cl(n, -1);
    int count = 0;
    for (int i = 0; i < n; ++i) {
      if (cl[i] >= 0) continue;
      cl[i] = count;
      std::vector<int> queue{i};
      while (!queue.empty()) {
        const int j = queue.back();
        queue.pop_back();
        for (int k = 0; k < n; ++k)
          if (cl[k] < 0 && std::abs(ev(k) - ev(j)) < tol * spread) {
            cl[k] = count;
            queue.push_back(k);
          }
      }
      ++count;
    }
    out = {};
    out.real_members_nondegenerate = true;
    for (int c = 0; c < count; ++c) {
      std::complex<double> s = 0;
      int mult = 0;
      for (int i = 0; i < n; ++i)
        if (cl[i] == c) s += ev(i), ++mult;
      s /= double(mult);
      if (std::abs(s.imag()) < 1e-9 * an) out.real_members_nondegenerate = false;
      const CMat m = a - s * CMat::Identity(n, n);
      std::vector<int> rank{n};
      CMat pw = CMat::Identity(n, n);
      for (int p = 1; p <= mult; ++p) {
        pw = pw * m;
        const Vec sv = Eigen::JacobiSVD<CMat>(pw).singularValues();
        rank.push_back(static_cast<int>((sv.array() > 1e-8 * std::pow(an, p)).count()));
      }
      if (rank[mult] != n - mult) return false;
      // Blocks of size >= p: rank[p-1] - rank[p].
      std::vector<int> ge(mult + 2, 0);
      for (int p = 1; p <= mult; ++p) ge[p] = rank[p - 1] - rank[p];
      SegreEntry e{s, mult, {}};
      for (int p = mult; p >= 1; --p)
        for (int b = 0; b < ge[p] - ge[p + 1]; ++b) e.partition.push_back(p);
      if (std::accumulate(e.partition.begin(), e.partition.end(), 0) != mult) return false;
      out.entries.push_back(std::move(e));
    }
    return true;
  };
  SegreSymbol out;
  bool ok = false;
  for (double tol = 0.25; tol > 1e-7 && !ok; tol /= 3.0) ok = attempt(tol, out);
  if (!ok) throw NumericalError("Jordan structure is numerically ambiguous at every clustering tolerance");
  std::sort(out.entries.begin(), out.entries.end(), [](const SegreEntry& x, const SegreEntry& y) {
    const double scale = 1e-9 * std::max({1.0, std::abs(x.value), std::abs(y.value)});
    if (std::abs(x.value.real() - y.value.real()) > scale) return x.value.real() < y.value.real();
    return x.value.imag() < y.value.imag();
  });
  return out;
}

SegreSymbol segre_symbol(const Mat& q1, const Mat& q2) { return segre_symbol(CMat(q1.cast<std::complex<double>>()), CMat(q2.cast<std::complex<double>>())); }

FuchsianPencil fuchsian_pencil(int k) {
  if (k < 1) throw InputError("k must be positive");
  const int n = 2 * k;
  const std::complex<double> i(0, 1);
  FuchsianPencil out{CMat::Zero(n, n), CMat::Zero(n, n), Mat::Zero(k, k), CMat::Zero(n, n), {}};
  for (int a = 0; a + 1 < n; ++a) {
    const double l = std::sqrt(double(a + 1) * (n - 1 - a));
    out.lambda.push_back(l);
    out.q1(a, a + 1) = out.q1(a + 1, a) = l;
    out.q2(a, a + 1) = -i * l;
    out.q2(a + 1, a) = i * l;
  }
  out.t = Mat(Mat::Ones(k, k).triangularView<Eigen::Upper>());
  out.reduced.topLeftCorner(k, k) = i * out.t;
  out.reduced.bottomRightCorner(k, k) = -i * out.t;
  return out;
}

int nilpotency_order(const Mat& m, double tol) {
  Mat p = Mat::Identity(m.rows(), m.cols());
  for (int k = 1; k <= m.rows(); ++k) {
    p = p * m;
    if (la::max_abs(p) < tol) return k;
  }
  return 0;
}

}  // namespace ng

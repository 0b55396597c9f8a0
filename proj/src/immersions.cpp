#include "ng/immersions.hpp"

#include "ng/busemann.hpp"
#include "ng/finsler.hpp"
#include "ng/linalg.hpp"
#include "ng/parallel.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

namespace ng {

double compute_c_theta(const RootSystem& sys, const std::vector<int>& orbit) {
  const Vec tau = normalized_coroot(sys, orbit);
  double m = std::numeric_limits<double>::infinity();
  for (const auto& beta : sys.positive_roots()) {
    const double v = std::abs(beta.dot(tau));
    if (v > 1e-12) m = std::min(m, v);
  }
  const double a = sys.root_norm(sys.simple_roots()[orbit.front()]);
  return m / (a * a);
}

namespace {

Mat frame_form(const Mat& lt, const Mat& v) {
  Mat s = lt * v * lt.inverse();
  return 0.5 * (s + s.transpose());
}

struct CriticalState {
  Mat r;  // columns: flag frame at q0 after moving u(y) to q0
  double residual = std::numeric_limits<double>::infinity();
};

// Newton along k-orbits onto <R diag(tau) R^T, s_v> = 0.
CriticalState to_critical(Mat r, const Vec& tau, const Mat& s_v) {
  const double scale = 2.0 * r.rows();
  for (int it = 0; it < 30; ++it) {
    const Mat s_a = r * tau.asDiagonal() * r.transpose();
    const double h = scale * (s_a * s_v).trace();
    if (std::abs(h) < 1e-14) return {r, std::abs(h)};
    const Mat c = s_a * s_v - s_v * s_a;
    const double cn = c.squaredNorm();
    if (cn < 1e-20) return {r, std::abs(h)};
    r = Mat((h / (scale * cn)) * c).exp() * r;
  }
  const Mat s_a = r * tau.asDiagonal() * r.transpose();
  return {r, std::abs(scale * (s_a * s_v).trace())};
}

struct Sample {
  double q = std::numeric_limits<double>::infinity();
  double theta = 0.0;
  int tau_index = 0;
  Mat r;
  bool critical = false;
  double ratio = std::numeric_limits<double>::infinity();
};

}  // namespace

CriterionReport nearly_geodesic_check(const Surface& u, h2::Point y, const Vec& tau, const CriterionOptions& opt) {
  const OrthoJet jet = orthonormalize(u.jet(y));
  const int n = jet.point.dim();
  const RootSystem sys = RootSystem::sl(n);
  if (tau.size() != n || std::abs(sys.norm(tau) - 1.0) > 1e-9) throw InputError("tau must be a unit vector of sl(n)");
  std::vector<Vec> taus{tau};
  const Vec itau = iota(sys, tau);
  if ((itau - tau).cwiseAbs().maxCoeff() > 1e-12) taus.push_back(itau);

  const Mat lt = to_origin(jet.point);
  const double scale = 2.0 * n;
  auto forms = [&](double theta) {
    return std::pair<Mat, Mat>{frame_form(lt, jet.direction(theta).mat), frame_form(lt, jet.second_form(theta).mat)};
  };
  auto quantity = [&](const Mat& r, const Vec& t, const Mat& s_v, const Mat& s_n) {
    const Mat s_a = r * t.asDiagonal() * r.transpose();
    return hessian_from_standard(s_a, s_v) + scale * (s_n * s_a).trace();
  };

  const int nt = static_cast<int>(taus.size());
  const long total = static_cast<long>(opt.directions) * opt.flags_per_direction * nt;
  std::vector<Sample> samples(total);
  for_each_index(total, opt.exec, [&](long idx) {
    const int ti = static_cast<int>(idx % nt);
    const long rest = idx / nt;
    const int i = static_cast<int>(rest / opt.flags_per_direction);
    Rng rng = stream(opt.seed, idx);
    const double theta = std::numbers::pi * i / opt.directions;
    const auto [s_v, s_n] = forms(theta);
    const Mat r0 = la::haar_orthogonal(n, rng);
    Sample s;
    s.theta = theta;
    s.tau_index = ti;
    {
      const Mat s_a = r0 * taus[ti].asDiagonal() * r0.transpose();
      const double d = scale * (s_a * s_v).trace();
      if (std::abs(d) > 1e-3) s.ratio = quantity(r0, taus[ti], s_v, s_n) / (d * d);
    }
    const CriticalState c = to_critical(r0, taus[ti], s_v);
    s.r = c.r;
    s.critical = c.residual < opt.ortho_tol;
    if (s.critical) s.q = quantity(c.r, taus[ti], s_v, s_n);
    samples[idx] = std::move(s);
  });

  CriterionReport rep;
  rep.tau = tau;
  rep.samples = total;
  double ratio = std::numeric_limits<double>::infinity();
  std::vector<long> order;
  for (long i = 0; i < total; ++i) {
    ratio = std::min(ratio, samples[i].ratio);
    if (samples[i].critical) order.push_back(i);
  }
  rep.critical = static_cast<long>(order.size());
  if (order.empty()) throw NumericalError("no critical samples found; increase the sampling density");
  const long top = std::min<long>(opt.refine, rep.critical);
  std::partial_sort(order.begin(), order.begin() + top, order.end(),
                    [&](long a, long b) { return samples[a].q < samples[b].q; });

  // Local descent of the worst samples along the critical set, in coordinates (theta, so(n)).
  std::vector<Mat> so_basis;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      Mat e = Mat::Zero(n, n);
      e(i, j) = 1.0;
      e(j, i) = -1.0;
      so_basis.push_back(e);
    }
  const int dof = 1 + static_cast<int>(so_basis.size());
  std::vector<Sample> refined(top);
  for_each_index(top, opt.exec, [&](long k) {
    Sample s = samples[order[k]];
    const Vec& t = taus[s.tau_index];
    auto moved = [&](const Vec& z, Sample& out) {
      Mat kk = Mat::Zero(n, n);
      for (int b = 1; b < dof; ++b) kk += z(b) * so_basis[b - 1];
      const double theta = s.theta + z(0);
      const auto [s_v, s_n] = forms(theta);
      const CriticalState c = to_critical(kk.exp() * s.r, t, s_v);
      if (c.residual > 1e-12) return false;
      out.r = c.r;
      out.theta = theta;
      out.q = quantity(c.r, t, s_v, s_n);
      return true;
    };
    double step = 0.05;
    for (int it = 0; it < 300 && step > 1e-12; ++it) {
      const double h = 1e-6;
      Vec grad(dof);
      bool ok = true;
      for (int b = 0; b < dof && ok; ++b) {
        Sample plus = s, minus = s;
        const Vec e = Vec::Unit(dof, b) * h;
        ok = moved(e, plus) && moved(-e, minus);
        if (ok) grad(b) = (plus.q - minus.q) / (2 * h);
      }
      if (!ok || grad.norm() < 1e-14) break;
      bool improved = false;
      for (double tstep = std::min(4 * step, 0.5); tstep > 1e-12; tstep *= 0.5) {
        Sample cand = s;
        if (moved(-tstep * grad.normalized(), cand) && cand.q < s.q) {
          s = std::move(cand);
          step = tstep;
          improved = true;
          break;
        }
      }
      if (!improved) break;
    }
    refined[k] = std::move(s);
  });

  const Sample* worst = &samples[order.front()];
  for (const auto& s : refined)
    if (s.q < worst->q) worst = &s;
  rep.margin = worst->q;
  rep.ratio = ratio;
  rep.lambda = std::max(1.0 - ratio, 0.0) + 0.1;
  rep.worst_theta = worst->theta;
  const Vec& wt = taus[worst->tau_index];
  rep.worst_flag = make_ideal(FlagPoint::from_vectors(lt.inverse() * worst->r, type_of_weights(wt)), wt);
  rep.passed = rep.margin > opt.pass_margin;
  return rep;
}

SufficientReport sufficient_condition_check(const Surface& u, h2::Point y, const std::vector<int>& orbit,
                                            int directions) {
  const OrthoJet jet = orthonormalize(u.jet(y));
  const int n = jet.point.dim();
  const RootSystem sys = RootSystem::sl(n);
  const Vec tau = normalized_coroot(sys, orbit);
  const double c = compute_c_theta(sys, orbit);
  const FinslerContext ctx = make_finsler_context(sys, tau);
  SufficientReport rep{true, std::numeric_limits<double>::infinity()};
  for (int i = 0; i < directions; ++i) {
    const double theta = std::numbers::pi * i / directions;
    const Vec cv = cartan_projection(jet.direction(theta));
    const Vec cn = cartan_projection(jet.second_form(theta));
    const double lhs = la::max_abs(cn) == 0.0 ? 0.0 : pseudo_norm(ctx, cn);
    for (int k : orbit) {
      const double a = sys.simple_roots()[k].dot(cv);
      rep.slack = std::min(rep.slack, c * a * a - lhs);
    }
  }
  rep.holds = rep.slack > 0;
  return rep;
}

std::vector<Mat2> fuchsian_generators(int genus) {
  if (genus != 2) throw InputError("only genus 2 generators are built in");
  const double len = 2.0 * std::acosh(1.0 + std::sqrt(2.0));
  Mat2 a;
  a << std::cosh(len / 2), std::sinh(len / 2), std::sinh(len / 2), std::cosh(len / 2);
  auto rot = [](double t) {
    Mat2 r;
    r << std::cos(t), -std::sin(t), std::sin(t), std::cos(t);
    return r;
  };
  const double pi = std::numbers::pi;
  auto pairing = [&](int i, int j) { return Mat2(rot(i * pi / 8) * a * rot((pi - j * pi / 4) / 2)); };
  return {pairing(0, 2), pairing(1, 3).inverse(), pairing(4, 6), pairing(5, 7).inverse()};
}

double wall_angle(const RootSystem& sys, const std::vector<Vec>& tau_orbit, const Vec& d) {
  double out = std::numbers::pi / 2;
  for (const auto& w : tau_orbit) out = std::min(out, std::abs(std::asin(std::clamp(sys.inner(w, d), -1.0, 1.0))));
  return out;
}

namespace {

// Letters 0..3 are generators, 4..7 their inverses; relator a b A B c d C D.
constexpr int kLetters = 8;
constexpr int kInverse[kLetters] = {4, 5, 6, 7, 0, 1, 2, 3};

std::vector<bool> forbidden_fivegrams() {
  const int rel[8] = {0, 1, 4, 5, 2, 3, 6, 7};
  std::vector<bool> bad(1 << 15, false);
  for (int dir = 0; dir < 2; ++dir) {
    int w[8];
    for (int i = 0; i < 8; ++i) w[i] = dir == 0 ? rel[i] : kInverse[rel[7 - i]];
    for (int s = 0; s < 8; ++s) {
      int code = 0;
      for (int k = 0; k < 5; ++k) code = code * kLetters + w[(s + k) % 8];
      bad[code] = true;
    }
  }
  return bad;
}

struct WordStats {
  long words = 0;
  std::vector<double> wall;                    // by length
  std::vector<std::vector<std::vector<float>>> alpha;  // [root][length] values
  std::vector<std::pair<int, Vec>> dirs;
};

}  // namespace

std::vector<Mat2> surface_group_elements(const std::vector<Mat2>& gens, int max_len) {
  if (gens.size() != 4) throw InputError("expected the four genus-2 generators");
  if (max_len < 1 || max_len > 7) throw InputError("word length must be in [1, 7]");
  const auto bad = forbidden_fivegrams();
  Mat2 letter[kLetters];
  for (int k = 0; k < 4; ++k) {
    letter[k] = gens[k];
    letter[k + 4] = gens[k].inverse();
  }
  std::vector<Mat2> out;
  int word[12];
  Mat2 prod[12];
  auto visit = [&](auto&& self, int len) -> void {
    out.push_back(prod[len - 1]);
    if (len == max_len) return;
    for (int l = 0; l < kLetters; ++l) {
      if (l == kInverse[word[len - 1]]) continue;
      if (len >= 4) {
        int code = 0;
        for (int k = len - 4; k < len; ++k) code = code * kLetters + word[k];
        if (bad[code * kLetters + l]) continue;
      }
      word[len] = l;
      prod[len] = prod[len - 1] * letter[l];
      self(self, len + 1);
    }
  };
  for (int first = 0; first < kLetters; ++first) {
    word[0] = first;
    prod[0] = letter[first];
    visit(visit, 1);
  }
  return out;
}

LimitConeReport limit_cone_sample(const Sl2Embedding& emb, const std::vector<Mat2>& gens, const Vec& tau,
                                  const LimitConeOptions& opt) {
  if (gens.size() != 4) throw InputError("expected the four genus-2 generators");
  if (opt.max_len < 1 || opt.max_len > 10) throw InputError("word length must be in [1, 10]");
  const RootSystem sys = RootSystem::sl(emb.n);
  const auto orbit = weyl_orbit(sys, tau);
  const int r = sys.rank();
  const auto bad = forbidden_fivegrams();
  Mat2 letter[kLetters];
  for (int k = 0; k < 4; ++k) {
    letter[k] = gens[k];
    letter[k + 4] = gens[k].inverse();
  }
  // Stride so that roughly keep_directions are retained from the longest words.
  const long approx_longest = static_cast<long>(8 * std::pow(7.0, opt.max_len - 1));
  const long stride = std::max<long>(1, approx_longest / std::max<long>(1, static_cast<long>(opt.keep_directions)));

  std::vector<WordStats> parts(kLetters);
  for_each_index(kLetters, opt.exec, [&](long first) {
    WordStats st;
    st.wall.assign(opt.max_len + 1, std::numbers::pi / 2);
    st.alpha.assign(r, std::vector<std::vector<float>>(opt.max_len + 1));
    int word[12];
    Mat2 prod[12], inv[12];
    long counter = 0;
    auto visit = [&](auto&& self, int len) -> void {
      if (len >= opt.min_len) {
        const Vec c = cartan_of(emb.group(prod[len - 1]), emb.group(inv[len - 1]));
        const double nc = sys.norm(c);
        if (nc > 1e-12) {
          const Vec d = c / nc;
          st.wall[len] = std::min(st.wall[len], wall_angle(sys, orbit, d));
          for (int k = 0; k < r; ++k) st.alpha[k][len].push_back(static_cast<float>(sys.simple_roots()[k].dot(c)));
          if (len == opt.max_len && counter++ % stride == 0) st.dirs.emplace_back(len, d);
        }
        ++st.words;
      }
      if (len == opt.max_len) return;
      for (int l = 0; l < kLetters; ++l) {
        if (l == kInverse[word[len - 1]]) continue;
        if (len >= 4) {
          int code = 0;
          for (int k = len - 4; k < len; ++k) code = code * kLetters + word[k];
          if (bad[code * kLetters + l]) continue;
        }
        word[len] = l;
        prod[len] = prod[len - 1] * letter[l];
        inv[len] = letter[kInverse[l]] * inv[len - 1];
        self(self, len + 1);
      }
    };
    word[0] = static_cast<int>(first);
    prod[0] = letter[first];
    inv[0] = letter[kInverse[first]];
    visit(visit, 1);
    parts[first] = std::move(st);
  });

  LimitConeReport rep;
  rep.wall_angle_by_length.assign(opt.max_len + 1, std::numbers::pi / 2);
  std::vector<std::vector<std::vector<float>>> alpha(r, std::vector<std::vector<float>>(opt.max_len + 1));
  for (auto& p : parts) {
    rep.words += p.words;
    for (int l = 0; l <= opt.max_len; ++l) rep.wall_angle_by_length[l] = std::min(rep.wall_angle_by_length[l], p.wall[l]);
    for (int k = 0; k < r; ++k)
      for (int l = 0; l <= opt.max_len; ++l) alpha[k][l].insert(alpha[k][l].end(), p.alpha[k][l].begin(), p.alpha[k][l].end());
    rep.directions.insert(rep.directions.end(), p.dirs.begin(), p.dirs.end());
  }
  rep.min_wall_angle = *std::min_element(rep.wall_angle_by_length.begin() + opt.min_len, rep.wall_angle_by_length.end());

  // Lower-envelope least squares: fit the per-length minima, count violations over all words.
  for (int k = 0; k < r; ++k) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    for (int l = opt.min_len; l <= opt.max_len; ++l) {
      if (alpha[k][l].empty()) continue;
      const double lo = *std::min_element(alpha[k][l].begin(), alpha[k][l].end());
      sx += l;
      sy += lo;
      sxx += double(l) * l;
      sxy += l * lo;
      ++m;
    }
    RootFit fit;
    if (m >= 2) {
      fit.b = (m * sxy - sx * sy) / (m * sxx - sx * sx);
      fit.c = -(sy - fit.b * sx) / m;
      long bad_words = 0, all = 0;
      for (int l = opt.min_len; l <= opt.max_len; ++l)
        for (float v : alpha[k][l]) {
          const double bound = fit.b * l - fit.c;
          bad_words += v < bound - 1e-6 * (1.0 + std::abs(bound));
          ++all;
        }
      fit.violation_fraction = all ? double(bad_words) / all : 0.0;
    }
    rep.fits.push_back(fit);
  }
  return rep;
}

std::vector<double> cyclic_wall_angles(const Mat& g, const Vec& tau, int kmax) {
  const int n = static_cast<int>(g.rows());
  const RootSystem sys = RootSystem::sl(n);
  const auto orbit = weyl_orbit(sys, tau);
  const Mat gi = g.inverse();
  Mat p = Mat::Identity(n, n), pi = Mat::Identity(n, n);
  std::vector<double> out;
  for (int k = 1; k <= kmax; ++k) {
    p = p * g;
    pi = gi * pi;
    const Vec c = cartan_of(p, pi);
    out.push_back(wall_angle(sys, orbit, c / sys.norm(c)));
  }
  return out;
}

}  // namespace ng

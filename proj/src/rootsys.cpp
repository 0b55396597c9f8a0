#include "ng/rootsys.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <queue>

namespace ng {

std::string to_string(Family f) {
  switch (f) {
    case Family::A: return "A";
    case Family::B: return "B";
    case Family::C: return "C";
    case Family::D: return "D";
  }
  return "?";
}

Family family_from_string(const std::string& s) {
  if (s == "A" || s == "a") return Family::A;
  if (s == "B" || s == "b") return Family::B;
  if (s == "C" || s == "c") return Family::C;
  if (s == "D" || s == "d") return Family::D;
  throw InputError("unknown root system family '" + s + "'");
}

WeylElement WeylElement::identity(int n) {
  WeylElement w;
  w.perm.resize(n);
  std::iota(w.perm.begin(), w.perm.end(), 0);
  w.sign.assign(n, 1);
  return w;
}

Vec WeylElement::apply(const Vec& v) const {
  Vec out(v.size());
  for (int i = 0; i < static_cast<int>(perm.size()); ++i) out(i) = sign[i] * v(perm[i]);
  return out;
}

WeylElement WeylElement::compose(const WeylElement& o) const {
  const int n = static_cast<int>(perm.size());
  WeylElement w;
  w.perm.resize(n);
  w.sign.resize(n);
  for (int i = 0; i < n; ++i) {
    w.perm[i] = o.perm[perm[i]];
    w.sign[i] = sign[i] * o.sign[perm[i]];
  }
  return w;
}

WeylElement WeylElement::inverse() const {
  const int n = static_cast<int>(perm.size());
  WeylElement w;
  w.perm.resize(n);
  w.sign.resize(n);
  for (int i = 0; i < n; ++i) {
    w.perm[perm[i]] = i;
    w.sign[perm[i]] = sign[i];
  }
  return w;
}

namespace {

Vec unit(int n, int i) {
  Vec e = Vec::Zero(n);
  e(i) = 1.0;
  return e;
}

}  // namespace

RootSystem::RootSystem(Family family, int rank) : family_(family), rank_(rank) {
  if (rank < 1) throw InputError("rank must be positive");
  if (rank > kMaxRank) throw InputError("rank above 6 is not supported (Weyl group enumeration)");
  if (family == Family::D && rank < 2) throw InputError("family D needs rank >= 2");
  dim_ = family == Family::A ? rank + 1 : rank;
  scale_ = family == Family::A ? 2.0 * dim_ : 4.0 * dim_;
  const int n = dim_;

  for (int i = 0; i + 1 < n; ++i) simple_.push_back(unit(n, i) - unit(n, i + 1));
  switch (family) {
    case Family::A: break;
    case Family::B: simple_.push_back(unit(n, n - 1)); break;
    case Family::C: simple_.push_back(2.0 * unit(n, n - 1)); break;
    case Family::D: simple_.push_back(unit(n, n - 2) + unit(n, n - 1)); break;
  }

  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      positive_.push_back(unit(n, i) - unit(n, j));
      if (family != Family::A) positive_.push_back(unit(n, i) + unit(n, j));
    }
  if (family == Family::B)
    for (int i = 0; i < n; ++i) positive_.push_back(unit(n, i));
  if (family == Family::C)
    for (int i = 0; i < n; ++i) positive_.push_back(2.0 * unit(n, i));

  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  const bool signed_perm = family != Family::A;
  do {
    const int nsign = signed_perm ? (1 << n) : 1;
    for (int mask = 0; mask < nsign; ++mask) {
      if (family == Family::D && (__builtin_popcount(mask) % 2)) continue;
      WeylElement w;
      w.perm = p;
      w.sign.resize(n);
      for (int i = 0; i < n; ++i) w.sign[i] = (mask >> i) & 1 ? -1 : 1;
      weyl_.push_back(std::move(w));
    }
  } while (std::next_permutation(p.begin(), p.end()));
}

Vec RootSystem::to_a(const Vec& v) const {
  if (v.size() != dim_) throw InputError("vector has wrong dimension for this root system");
  if (family_ != Family::A) return v;
  Vec out = v.array() - v.mean();
  return out;
}

std::vector<Vec> simple_roots(const RootSystem& sys) { return sys.simple_roots(); }

ChamberProjection chamber_project(const RootSystem& sys, const Vec& v0) {
  const Vec v = sys.to_a(v0);
  const int n = sys.ambient_dim();
  WeylElement w = WeylElement::identity(n);
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  if (sys.family() == Family::A) {
    std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return v(a) > v(b); });
    w.perm = idx;
  } else {
    std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return std::abs(v(a)) > std::abs(v(b)); });
    w.perm = idx;
    int negatives = 0;
    for (int i = 0; i < n; ++i) {
      w.sign[i] = v(idx[i]) < 0 ? -1 : 1;
      negatives += v(idx[i]) < 0;
    }
    if (sys.family() == Family::D && negatives % 2) w.sign[n - 1] *= -1;
  }
  return {w.apply(v), w};
}

bool in_chamber(const RootSystem& sys, const Vec& v, double tol) {
  for (const auto& a : sys.simple_roots())
    if (a.dot(v) < -tol) return false;
  return true;
}

std::vector<std::vector<int>> weyl_orbits_of_simple_roots(const RootSystem& sys) {
  const auto& s = sys.simple_roots();
  const int r = static_cast<int>(s.size());
  std::vector<int> comp(r, -1);
  std::vector<std::vector<int>> out;
  for (int i = 0; i < r; ++i) {
    if (comp[i] >= 0) continue;
    comp[i] = static_cast<int>(out.size());
    out.push_back({i});
    for (std::size_t q = 0; q < out.back().size(); ++q) {
      const int a = out.back()[q];
      for (int b = 0; b < r; ++b) {
        if (comp[b] >= 0) continue;
        const bool joined = std::abs(s[a].dot(s[b])) > 1e-12;
        const bool simple_edge = std::abs(s[a].squaredNorm() - s[b].squaredNorm()) < 1e-12;
        if (joined && simple_edge) {
          comp[b] = comp[i];
          out.back().push_back(b);
        }
      }
    }
    std::sort(out.back().begin(), out.back().end());
  }
  return out;
}

Vec normalized_coroot(const RootSystem& sys, const std::vector<int>& orbit) {
  auto orbits = weyl_orbits_of_simple_roots(sys);
  std::vector<int> sorted = orbit;
  std::sort(sorted.begin(), sorted.end());
  if (std::find(orbits.begin(), orbits.end(), sorted) == orbits.end())
    throw InputError("the given set of simple roots is not a Weyl orbit");
  const Vec d = sys.dual(sys.simple_roots()[sorted.front()]);
  return sys.normalized(chamber_project(sys, d).chamber);
}

std::vector<int> theta_of(const RootSystem& sys, const Vec& tau, double tol) {
  std::vector<int> out;
  for (int i = 0; i < sys.rank(); ++i)
    if (sys.simple_roots()[i].dot(tau) > tol) out.push_back(i);
  return out;
}

Regularity is_tau_regular(const RootSystem& sys, const Vec& v, const Vec& tau, double margin) {
  Regularity out;
  const double nv = sys.norm(v);
  double best = std::numeric_limits<double>::infinity();
  for (const auto& w : sys.weyl_group()) {
    const double ip = sys.inner(w.apply(tau), v);
    if (std::abs(ip) < best) {
      best = std::abs(ip);
      out.witness = w;
      out.inner = ip;
    }
  }
  out.normalized = nv > 0 ? best / nv : 0.0;
  out.regular = nv > 0 && best > margin * nv;
  return out;
}

namespace {

Vec interior_vector(const RootSystem& sys) {
  // Sum of the fundamental directions is strictly inside the chamber.
  Vec r = Vec::Zero(sys.ambient_dim());
  for (int i = 0; i < sys.rank(); ++i) r += fundamental_direction(sys, i);
  return r;
}

}  // namespace

WeylElement longest_element(const RootSystem& sys) {
  // w0 is the unique element carrying -a+ onto a+.
  return chamber_project(sys, -interior_vector(sys)).w;
}

Vec iota(const RootSystem& sys, const Vec& tau) { return -longest_element(sys).apply(tau); }

std::vector<Vec> weyl_orbit(const RootSystem& sys, const Vec& v, double tol) {
  std::vector<Vec> out;
  for (const auto& w : sys.weyl_group()) {
    Vec x = w.apply(v);
    bool seen = false;
    for (const auto& y : out)
      if ((x - y).cwiseAbs().maxCoeff() <= tol) {
        seen = true;
        break;
      }
    if (!seen) out.push_back(std::move(x));
  }
  return out;
}

Vec fundamental_direction(const RootSystem& sys, int i) {
  const int n = sys.ambient_dim();
  const int r = sys.rank();
  const int rows = r + (sys.family() == Family::A ? 1 : 0);
  Mat m = Mat::Zero(rows, n);
  Vec rhs = Vec::Zero(rows);
  for (int k = 0; k < r; ++k) m.row(k) = sys.simple_roots()[k].transpose();
  if (sys.family() == Family::A) m.row(r).setOnes();
  rhs(i) = 1.0;
  Vec w = m.colPivHouseholderQr().solve(rhs);
  return sys.normalized(w);
}

std::vector<int> component_roots(const RootSystem& sys, const Vec& tau, const Vec& seed, int subdivisions) {
  const int r = sys.rank();
  if (r > 3) throw InputError("component_roots supports rank <= 3");
  std::vector<int> all(r);
  std::iota(all.begin(), all.end(), 0);
  const auto walls = weyl_orbit(sys, tau);
  auto signature = [&](const Vec& p, bool& on_wall) {
    std::vector<int> s;
    on_wall = false;
    const double np = sys.norm(p);
    for (const auto& u : walls) {
      const double ip = sys.inner(u, p) / np;
      if (std::abs(ip) < 1e-12) on_wall = true;
      s.push_back(ip > 0 ? 1 : -1);
    }
    return s;
  };
  bool seed_on_wall = false;
  const auto seed_sig = signature(sys.to_a(seed), seed_on_wall);
  if (seed_on_wall) throw InputError("seed lies on a wall of tau");
  if (r == 1) return all;

  std::vector<Vec> omega;
  for (int i = 0; i < r; ++i) omega.push_back(fundamental_direction(sys, i));
  const int N = subdivisions;

  // Grid cell (i, j) with barycentric weights (i, j, N - i - j) (rank 3) or (i, N - i) (rank 2).
  auto point = [&](int i, int j) {
    if (r == 2) return Vec((i * omega[0] + (N - i) * omega[1]) / N);
    return Vec((i * omega[0] + j * omega[1] + (N - i - j) * omega[2]) / N);
  };
  auto valid = [&](int i, int j) {
    if (r == 2) return i >= 0 && i <= N && j == 0;
    return i >= 0 && j >= 0 && i + j <= N;
  };

  // Start from the grid cell closest in direction to the seed with the same signature.
  const Vec s = sys.normalized(sys.to_a(seed));
  int si = -1, sj = -1;
  double best = -2.0;
  for (int i = 0; i <= N; ++i)
    for (int j = 0; j <= (r == 2 ? 0 : N - i); ++j) {
      Vec p = point(i, j);
      bool w = false;
      if (signature(p, w) != seed_sig || w) continue;
      const double c = sys.inner(sys.normalized(p), s);
      if (c > best) {
        best = c;
        si = i;
        sj = j;
      }
    }
  if (si < 0) throw NumericalError("component of the seed is not resolved by the grid");

  std::map<std::pair<int, int>, bool> seen;
  std::queue<std::pair<int, int>> q;
  q.push({si, sj});
  seen[{si, sj}] = true;
  std::vector<bool> touches(r, false);
  while (!q.empty()) {
    auto [i, j] = q.front();
    q.pop();
    const int b[3] = {i, r == 2 ? N - i : j, N - i - j};
    for (int k = 0; k < r; ++k)
      if (b[k] == 0) touches[k] = true;
    const std::pair<int, int> nbr[4] = {{i + 1, j}, {i - 1, j}, {i, j + 1}, {i, j - 1}};
    for (auto [a, c] : nbr) {
      if (!valid(a, c) || seen.count({a, c})) continue;
      bool w = false;
      if (signature(point(a, c), w) != seed_sig || w) continue;
      seen[{a, c}] = true;
      q.push({a, c});
    }
  }
  // Barycentric weight k vanishing means the cell lies on Ker(alpha_k).
  std::vector<int> out;
  for (int k = 0; k < r; ++k)
    if (!touches[k]) out.push_back(k);
  return out;
}

const std::vector<ExceptionalRow>& exceptional_table() {
  static const std::vector<ExceptionalRow> rows = {
      {"E6", "single orbit {Delta}; coroot along the highest-root direction"},
      {"E7", "single orbit {Delta}"},
      {"E8", "single orbit {Delta}"},
      {"F4", "two orbits: long {alpha1, alpha2}, short {alpha3, alpha4}"},
      {"G2", "two orbits: long {alpha2}, short {alpha1}"},
  };
  return rows;
}

}  // namespace ng

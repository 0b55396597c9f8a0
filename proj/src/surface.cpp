#include "ng/surface.hpp"

#include "ng/linalg.hpp"

#include <cmath>
#include <iomanip>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace ng {

namespace h2 {

Point mobius(const Mat2& g, Point z) { return (g(0, 0) * z + g(0, 1)) / (g(1, 0) * z + g(1, 1)); }

Mat2 frame(Point z) {
  if (!(z.imag() > 0)) throw InputError("point is not in the upper half-plane");
  const double s = std::sqrt(z.imag());
  Mat2 g;
  g << s, z.real() / s, 0.0, 1.0 / s;
  return g;
}

Mat2 exp_element(const Vec2& xi) {
  const double r = xi.norm();
  Mat2 x;
  x << xi(0), xi(1), xi(1), -xi(0);
  if (r < 1e-300) return Mat2::Identity();
  return std::cosh(r / 2) * Mat2::Identity() + (std::sinh(r / 2) / r) * x;
}

Point exp_at(Point z, const Vec2& xi) { return mobius(frame(z) * exp_element(xi), kI); }

Vec2 log_at(Point z, Point w) {
  const Point wp = mobius(frame(z).inverse(), w);
  const Point zeta = (wp - kI) / (wp + kI);
  const double r = std::abs(zeta);
  if (r < 1e-300) return Vec2::Zero();
  const double d = 2.0 * std::atanh(std::min(r, 1.0 - 1e-16));
  return Vec2(zeta.real(), -zeta.imag()) * (d / r);
}

double distance(Point z, Point w) {
  const double q = std::norm(z - w) / (2.0 * z.imag() * w.imag());
  // acosh(1 + q) without cancellation for small q.
  return std::log1p(q + std::sqrt(q * (q + 2.0)));
}

}  // namespace h2

namespace {

double binom(int n, int k) {
  double out = 1.0;
  for (int i = 1; i <= k; ++i) out = out * (n - k + i) / i;
  return out;
}

Mat irr_algebra(int n, const Mat2& x) {
  Mat out = Mat::Zero(n, n);
  for (int a = 0; a < n; ++a) {
    const int m = n - 1 - a;
    out(a, a) = -(a * x(0, 0) + m * x(1, 1));
    if (a > 0) out(a - 1, a) = -a * x(0, 1) * std::sqrt(binom(n - 1, a) / binom(n - 1, a - 1));
    if (a + 1 < n) out(a + 1, a) = -m * x(1, 0) * std::sqrt(binom(n - 1, a) / binom(n - 1, a + 1));
  }
  return out;
}

// (p X + q Y)^k as coefficients of X^j Y^(k-j).
std::vector<double> power(double p, double q, int k) {
  std::vector<double> c(k + 1);
  for (int j = 0; j <= k; ++j) c[j] = binom(k, j) * std::pow(p, j) * std::pow(q, k - j);
  return c;
}

// P -> P o g^-1 on homogeneous polynomials of degree n-1.
Mat irr_group(int n, const Mat2& g) {
  const Mat2 gi = g.inverse();
  Mat out = Mat::Zero(n, n);
  for (int a = 0; a < n; ++a) {
    const auto u = power(gi(0, 0), gi(0, 1), a);
    const auto v = power(gi(1, 0), gi(1, 1), n - 1 - a);
    for (std::size_t i = 0; i < u.size(); ++i)
      for (std::size_t j = 0; j < v.size(); ++j) {
        const int b = static_cast<int>(i + j);
        out(b, a) += u[i] * v[j] * std::sqrt(binom(n - 1, a) / binom(n - 1, b));
      }
  }
  return out;
}

Mat red_blocks(int n, const Mat2& x, double fill) {
  Mat out = fill * Mat::Identity(n, n);
  for (int i = 0; i < n / 2; ++i) {
    const int j = n - 1 - i;
    out(i, i) = x(0, 0);
    out(i, j) = x(0, 1);
    out(j, i) = x(1, 0);
    out(j, j) = x(1, 1);
  }
  return out;
}

Mat2 sl2_f() { return Mat2{{-1, 0}, {0, 1}}; }
Mat2 sl2_g() { return Mat2{{0, 1}, {1, 0}}; }
Mat2 sl2_h() { return Mat2{{0, -1}, {1, 0}}; }

Sl2Embedding with_images(EmbeddingKind kind, int n) {
  if (n < 2 || n > 12) throw InputError("embedding dimension must be in [2, 12]");
  Sl2Embedding e{kind, n, {}, {}, {}};
  e.f = e.algebra(sl2_f());
  e.g = e.algebra(sl2_g());
  e.h = e.algebra(sl2_h());
  return e;
}

}  // namespace

Mat Sl2Embedding::algebra(const Mat2& x) const {
  return kind == EmbeddingKind::Irreducible ? irr_algebra(n, x) : red_blocks(n, x, 0.0);
}

Mat Sl2Embedding::group(const Mat2& x) const {
  return kind == EmbeddingKind::Irreducible ? irr_group(n, x) : red_blocks(n, x, 1.0);
}

Sl2Embedding irr_embedding(int n) { return with_images(EmbeddingKind::Irreducible, n); }
Sl2Embedding red_embedding(int n) { return with_images(EmbeddingKind::Reducible, n); }

std::string to_string(EmbeddingKind k) { return k == EmbeddingKind::Irreducible ? "irr" : "red"; }

BracketResiduals bracket_residuals(const Sl2Embedding& e) {
  using la::commutator;
  using la::max_abs;
  return {max_abs(commutator(e.g, e.h) + 2 * e.f),      max_abs(commutator(e.h, e.f) - 2 * e.g),
          max_abs(commutator(e.f, e.g) - 2 * e.h),      max_abs(e.f - e.f.transpose()),
          max_abs(e.g - e.g.transpose()),               max_abs(e.h + e.h.transpose())};
}

SymTangent OrthoJet::direction(double theta) const {
  return {point, std::cos(theta) * e1.mat + std::sin(theta) * e2.mat};
}

SymTangent OrthoJet::second_form(double theta) const {
  const double c = std::cos(theta), s = std::sin(theta);
  return {point, c * c * ii11.mat + 2 * c * s * ii12.mat + s * s * ii22.mat};
}

OrthoJet orthonormalize(const SurfaceJet& j) {
  Mat2 gram;
  gram << inner(j.d1, j.d1), inner(j.d1, j.d2), inner(j.d2, j.d1), inner(j.d2, j.d2);
  Eigen::LLT<Mat2> llt(gram);
  if (llt.info() != Eigen::Success || gram.determinant() < 1e-14 * gram.trace() * gram.trace())
    throw NumericalError("surface differential is degenerate");
  const Mat2 t = Mat2(llt.matrixL()).inverse().transpose();
  const SymPoint& p = j.point;
  OrthoJet o{p,
             {p, t(0, 0) * j.d1.mat + t(1, 0) * j.d2.mat},
             {p, t(0, 1) * j.d1.mat + t(1, 1) * j.d2.mat},
             {p, Mat::Zero(p.dim(), p.dim())},
             {p, Mat::Zero(p.dim(), p.dim())},
             {p, Mat::Zero(p.dim(), p.dim())}};
  const Mat* ii[2][2] = {{&j.ii11.mat, &j.ii12.mat}, {&j.ii12.mat, &j.ii22.mat}};
  auto form = [&](int k, int l) {
    Mat out = Mat::Zero(p.dim(), p.dim());
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) out += t(a, k) * t(b, l) * *ii[a][b];
    SymTangent v{p, out};
    v.mat -= inner(v, o.e1) * o.e1.mat + inner(v, o.e2) * o.e2.mat;
    return v;
  };
  o.ii11 = form(0, 0);
  o.ii12 = form(0, 1);
  o.ii22 = form(1, 1);
  return o;
}

SurfaceJet Surface::jet(h2::Point z) const {
  const double h = 1e-4;
  const SymPoint p = point(z);
  auto at = [&](const Vec2& xi) { return log_map(p, point(h2::exp_at(z, xi))).mat; };
  auto accel = [&](const Vec2& v) { return Mat((at(h * v) + at(-h * v)) / (h * h)); };
  const Vec2 e1(1, 0), e2(0, 1), e12 = Vec2(1, 1) / std::sqrt(2.0);
  SurfaceJet j{p,
               {p, (at(h * e1) - at(-h * e1)) / (2 * h)},
               {p, (at(h * e2) - at(-h * e2)) / (2 * h)},
               {p, accel(e1)},
               {p, Mat()},
               {p, accel(e2)}};
  j.ii12.mat = accel(e12) - 0.5 * (j.ii11.mat + j.ii22.mat);
  return j;
}

Mat Surface::frame_inverse(h2::Point z) const { return to_origin(point(z)); }

Mat Surface::relative_frame_inverse(h2::Point z, h2::Point w) const {
  return frame_inverse(w) * frame_inverse(z).inverse();
}

SymPoint EquivariantSurface::point(h2::Point z) const { return act(emb_.group(h2::frame(z)), SymPoint::origin(emb_.n)); }

Mat EquivariantSurface::frame_inverse(h2::Point z) const { return emb_.group(h2::frame(z).inverse()); }

Mat EquivariantSurface::relative_frame_inverse(h2::Point z, h2::Point w) const {
  return emb_.group(h2::frame(w).inverse() * h2::frame(z));
}

SurfaceJet EquivariantSurface::jet(h2::Point z) const {
  const Mat g = emb_.group(h2::frame(z));
  const SymPoint q0 = SymPoint::origin(emb_.n);
  const Mat zero = Mat::Zero(emb_.n, emb_.n);
  const SymTangent d1 = push(g, {q0, 0.5 * emb_.algebra(Mat2{{1, 0}, {0, -1}})});
  const SymTangent d2 = push(g, {q0, 0.5 * emb_.algebra(Mat2{{0, 1}, {1, 0}})});
  return {d1.base, d1, {d1.base, d2.mat}, {d1.base, zero}, {d1.base, zero}, {d1.base, zero}};
}

JetSurface::JetSurface(SurfaceJet j) : jet_(std::move(j)) {
  validate(jet_.point);
  for (const SymTangent* t : {&jet_.d1, &jet_.d2, &jet_.ii11, &jet_.ii12, &jet_.ii22}) {
    if ((t->base.gram - jet_.point.gram).cwiseAbs().maxCoeff() > 1e-9) throw InputError("jet tangents are not based at the jet point");
    validate(*t);
  }
}

Mat JetSurface::exponent(h2::Point z) const {
  const Vec2 xi = h2::log_at(h2::kI, z);
  const double a = xi(0), b = xi(1);
  return a * jet_.d1.mat + b * jet_.d2.mat + 0.5 * (a * a * jet_.ii11.mat + 2 * a * b * jet_.ii12.mat + b * b * jet_.ii22.mat);
}

SymPoint JetSurface::point(h2::Point z) const { return geodesic(jet_.point, {jet_.point, exponent(z)}, 1.0); }

// gram(u(z)) = lt^T exp(-2S) lt, so h^-1 = exp(-S) lt.
Mat JetSurface::frame_inverse(h2::Point z) const {
  return la::sym_exp(-standard_form({jet_.point, exponent(z)})) * to_origin(jet_.point);
}

SurfaceJet perturbed_jet(const Surface& base, double scale, Rng& rng) {
  SurfaceJet j = base.jet(h2::kI);
  const OrthoJet o = orthonormalize(j);
  auto noise = [&] {
    SymTangent v = random_tangent(j.point, rng);
    v.mat -= inner(v, o.e1) * o.e1.mat + inner(v, o.e2) * o.e2.mat;
    return normalized(v).scaled(scale);
  };
  j.ii11.mat += noise().mat;
  j.ii12.mat += noise().mat;
  j.ii22.mat += noise().mat;
  return j;
}

void write_jet_csv(std::ostream& out, const SurfaceJet& j) {
  out << "field,row,col,value\n" << std::setprecision(12);
  const std::pair<const char*, const Mat*> fields[] = {{"point", &j.point.gram}, {"d1", &j.d1.mat},     {"d2", &j.d2.mat},
                                                       {"ii11", &j.ii11.mat},    {"ii12", &j.ii12.mat}, {"ii22", &j.ii22.mat}};
  for (const auto& [name, m] : fields)
    for (int r = 0; r < m->rows(); ++r)
      for (int c = 0; c < m->cols(); ++c) out << name << ',' << r << ',' << c << ',' << (*m)(r, c) << '\n';
}

SurfaceJet read_jet_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("field,row,col,value", 0) != 0) throw InputError("jet CSV needs the header field,row,col,value");
  std::map<std::string, std::vector<std::tuple<int, int, double>>> rows;
  int n = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string name, r, c, v;
    if (!std::getline(ss, name, ',') || !std::getline(ss, r, ',') || !std::getline(ss, c, ',') || !std::getline(ss, v))
      throw InputError("malformed jet CSV row: " + line);
    const int ri = std::stoi(r), ci = std::stoi(c);
    rows[name].emplace_back(ri, ci, std::stod(v));
    n = std::max({n, ri + 1, ci + 1});
  }
  auto matrix = [&](const std::string& name) {
    auto it = rows.find(name);
    if (it == rows.end()) throw InputError("jet CSV is missing field " + name);
    Mat m = Mat::Zero(n, n);
    for (auto [r, c, v] : it->second) m(r, c) = v;
    return m;
  };
  const SymPoint p = SymPoint::from_gram(matrix("point"));
  auto tangent = [&](const std::string& name) {
    Mat m = matrix(name);
    m -= (m.trace() / n) * Mat::Identity(n, n);
    return SymTangent::make(p, m);
  };
  return {p, tangent("d1"), tangent("d2"), tangent("ii11"), tangent("ii12"), tangent("ii22")};
}

}  // namespace ng

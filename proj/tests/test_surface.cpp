#include "ng/pencils.hpp"
#include "ng/surface.hpp"

#include "support.hpp"

#include <cmath>
#include <sstream>

using namespace ng;
using ng::test::vec;

namespace {

Mat2 random_sl2(Rng& rng) {
  std::normal_distribution<double> nd;
  Mat2 g;
  do {
    g << nd(rng), nd(rng), nd(rng), nd(rng);
  } while (std::abs(g.determinant()) < 0.2);
  if (g.determinant() < 0) g.col(0) *= -1;
  return g / std::sqrt(g.determinant());
}

h2::Point random_h2(Rng& rng) {
  std::uniform_real_distribution<double> u(-2, 2);
  return {u(rng), std::exp(u(rng) / 2)};
}

// Delegates point evaluation only, so the finite-difference jet is used.
class Sampled final : public Surface {
 public:
  explicit Sampled(const Surface& s) : s_(s) {}
  SymPoint point(h2::Point z) const override { return s_.point(z); }

 private:
  const Surface& s_;
};

Mat expm(const Mat& m) {
  // Symmetric plus antisymmetric parts do not commute; use a scaled Taylor series.
  int k = 0;
  double nrm = m.norm();
  while (nrm > 0.1) {
    nrm /= 2;
    ++k;
  }
  const Mat a = m / std::pow(2.0, k);
  Mat out = Mat::Identity(m.rows(), m.cols()), term = out;
  for (int i = 1; i < 20; ++i) {
    term = term * a / i;
    out += term;
  }
  for (int i = 0; i < k; ++i) out = out * out;
  return out;
}

bool same_span(const std::vector<Mat>& p, const std::vector<Mat>& q) {
  Mat m(p[0].size(), p.size() + q.size());
  int c = 0;
  for (const auto& x : p) m.col(c++) = x.reshaped();
  for (const auto& x : q) m.col(c++) = x.reshaped();
  Eigen::JacobiSVD<Mat> svd(m);
  return svd.singularValues()(static_cast<int>(p.size())) < 1e-12 * svd.singularValues()(0);
}

}  // namespace

TEST(H2, FrameAndMobius) {
  Rng rng(1);
  for (int t = 0; t < 20; ++t) {
    const h2::Point z = random_h2(rng);
    EXPECT_LT(std::abs(h2::mobius(h2::frame(z), h2::kI) - z), 1e-14);
    EXPECT_NEAR(h2::frame(z).determinant(), 1.0, 1e-14);
  }
  EXPECT_THROW(h2::frame({0.0, -1.0}), InputError);
}

TEST(H2, ExpLogAndDistance) {
  Rng rng(2);
  for (int t = 0; t < 30; ++t) {
    const h2::Point z = random_h2(rng), w = random_h2(rng);
    const Vec2 xi = h2::log_at(z, w);
    EXPECT_LT(std::abs(h2::exp_at(z, xi) - w), 1e-10 * std::abs(w));
    EXPECT_NEAR(xi.norm(), h2::distance(z, w), 1e-10);
    const Mat2 g = random_sl2(rng);
    EXPECT_NEAR(h2::distance(h2::mobius(g, z), h2::mobius(g, w)), h2::distance(z, w), 1e-9);
  }
  EXPECT_NEAR(h2::distance(h2::kI, {0, std::exp(1.7)}), 1.7, 1e-14);
}

TEST(Embedding, IrreducibleDiagonal) {
  for (int n = 2; n <= 8; ++n) {
    const Sl2Embedding e = irr_embedding(n);
    Vec expect(n);
    for (int a = 0; a < n; ++a) expect(a) = 2 * a - n + 1;
    EXPECT_LT((e.f - Mat(expect.asDiagonal())).norm(), 1e-14);
  }
  const Sl2Embedding e3 = irr_embedding(3);
  EXPECT_NEAR(std::abs(e3.h(0, 1)), std::sqrt(2.0), 1e-14);
  EXPECT_NEAR(std::abs(e3.h(1, 2)), std::sqrt(2.0), 1e-14);
}

TEST(Embedding, SymmetryTypesAndBrackets) {
  for (int n = 2; n <= 8; ++n)
    for (const Sl2Embedding& e : {irr_embedding(n), red_embedding(n)}) {
      const BracketResiduals r = bracket_residuals(e);
      EXPECT_LT(r.f_symmetry, 1e-12);
      EXPECT_LT(r.g_symmetry, 1e-12);
      EXPECT_LT(r.h_antisymmetry, 1e-12);
      EXPECT_LT(r.gh, 1e-10);
      EXPECT_LT(r.fg, 1e-10);
      // [h, f] = -2 g in any realization with f, g symmetric and h antisymmetric.
      EXPECT_LT(la::max_abs(la::commutator(e.h, e.f) + 2 * e.g), 1e-10);
    }
}

TEST(Embedding, TwoDimensionalIrreducibleIsConjugateToIdentity) {
  const Sl2Embedding e = irr_embedding(2);
  const Mat2 j = vec({1, -1}).asDiagonal();
  Rng rng(3);
  for (int t = 0; t < 5; ++t) {
    Mat2 x = la::gaussian(2, 2, rng);
    x -= 0.5 * x.trace() * Mat2::Identity();
    EXPECT_LT((e.algebra(x) - Mat(j * x * j)).norm(), 1e-14);
  }
}

TEST(Embedding, GroupIsExponentialOfAlgebra) {
  Rng rng(4);
  for (int n = 2; n <= 6; ++n)
    for (const Sl2Embedding& e : {irr_embedding(n), red_embedding(n)}) {
      Mat2 x = 0.5 * la::gaussian(2, 2, rng);
      x -= 0.5 * x.trace() * Mat2::Identity();
      EXPECT_LT((e.group(expm(x)) - expm(e.algebra(x))).norm(), 1e-10);
      const Mat2 g1 = random_sl2(rng), g2 = random_sl2(rng);
      EXPECT_LT((e.group(g1 * g2) - e.group(g1) * e.group(g2)).norm(), 1e-9 * e.group(g1 * g2).norm());
    }
}

TEST(Embedding, TangentPencilsMatchPresets) {
  const Sl2Embedding red = red_embedding(3), irr = irr_embedding(3);
  EXPECT_TRUE(same_span({red.f, red.g}, preset_pencil("P_red").quads));
  // P_irr after the congruence diag(1, sqrt 2, 1).
  const Mat d = vec({1, std::sqrt(2.0), 1}).asDiagonal();
  std::vector<Mat> moved;
  for (const Mat& q : preset_pencil("P_irr").quads) moved.push_back(d * q * d);
  EXPECT_TRUE(same_span({irr.f, irr.g}, moved));
}

TEST(Embedding, DimensionLimits) {
  EXPECT_THROW(irr_embedding(1), InputError);
  EXPECT_THROW(irr_embedding(13), InputError);
}

TEST(EquivariantSurface, BasepointAndEquivariance) {
  Rng rng(5);
  for (int n : {2, 3, 4, 5}) {
    const EquivariantSurface u(irr_embedding(n));
    EXPECT_LT((u.point(h2::kI).gram - Mat::Identity(n, n)).norm(), 1e-13);
    for (int t = 0; t < 10; ++t) {
      const Mat2 g = random_sl2(rng);
      const h2::Point z = random_h2(rng);
      const SymPoint lhs = u.point(h2::mobius(g, z));
      const SymPoint rhs = act(irr_embedding(n).group(g), u.point(z));
      EXPECT_LT((lhs.gram - rhs.gram).norm(), 1e-8 * lhs.gram.norm());
    }
  }
}

TEST(EquivariantSurface, FrameInverse) {
  Rng rng(6);
  const EquivariantSurface u(irr_embedding(4));
  for (int t = 0; t < 10; ++t) {
    const h2::Point z = random_h2(rng);
    const Mat hinv = u.frame_inverse(z);
    EXPECT_LT((act(hinv.inverse(), SymPoint::origin(4)).gram - u.point(z).gram).norm(), 1e-9 * u.point(z).gram.norm());
  }
}

TEST(EquivariantSurface, JetMatchesFiniteDifferences) {
  Rng rng(7);
  for (int n : {3, 4}) {
    const EquivariantSurface u(irr_embedding(n));
    const Sampled s(u);
    for (int t = 0; t < 4; ++t) {
      const h2::Point z = random_h2(rng);
      const OrthoJet b = orthonormalize(s.jet(z));
      const SurfaceJet j = u.jet(z);
      EXPECT_LT((j.d1.mat - s.jet(z).d1.mat).norm(), 1e-6);
      EXPECT_LT((j.d2.mat - s.jet(z).d2.mat).norm(), 1e-6);
      EXPECT_NEAR(inner(j.d1, j.d2), 0.0, 1e-12);
      EXPECT_NEAR(inner(j.d1, j.d1), inner(j.d2, j.d2), 1e-12);
      // Totally geodesic: the normal part of the acceleration vanishes.
      for (const SymTangent* ii : {&b.ii11, &b.ii12, &b.ii22}) EXPECT_LT(norm(*ii), 1e-5);
    }
  }
}

TEST(EquivariantSurface, QuasiIsometricOnDisk) {
  Rng rng(8);
  const EquivariantSurface u(irr_embedding(3));
  const h2::Point y0 = h2::kI;
  double lo = 1e300, hi = 0;
  for (int t = 0; t < 100; ++t) {
    const double r = 0.1 + 4.9 * std::uniform_real_distribution<double>()(rng);
    const double phi = 2 * std::numbers::pi * std::uniform_real_distribution<double>()(rng);
    const h2::Point y = h2::exp_at(y0, Vec2(r * std::cos(phi), r * std::sin(phi)));
    const double ratio = distance(u.point(y0), u.point(y)) / h2::distance(y0, y);
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
  }
  EXPECT_GT(lo, 0.1);
  EXPECT_LT(hi, 10.0);
  EXPECT_NEAR(lo, hi, 1e-7 * hi);  // totally geodesic and equivariant: a homothety
}

TEST(JetSurface, ReproducesItsJet) {
  Rng rng(9);
  const EquivariantSurface base(irr_embedding(3));
  const SurfaceJet j = perturbed_jet(base, 0.2, rng);
  const JetSurface u(j);
  EXPECT_LT((u.point(h2::kI).gram - j.point.gram).norm(), 1e-14);
  const SurfaceJet fd = Sampled(u).jet(h2::kI);
  EXPECT_LT((fd.d1.mat - j.d1.mat).norm(), 1e-6);
  EXPECT_LT((fd.d2.mat - j.d2.mat).norm(), 1e-6);
  const OrthoJet a = orthonormalize(j), b = orthonormalize(fd);
  EXPECT_LT((a.ii11.mat - b.ii11.mat).norm(), 1e-4);
  EXPECT_LT((a.ii12.mat - b.ii12.mat).norm(), 1e-4);
  EXPECT_LT((a.ii22.mat - b.ii22.mat).norm(), 1e-4);
  const h2::Point z{0.3, 1.4};
  EXPECT_LT((act(u.frame_inverse(z).inverse(), SymPoint::origin(3)).gram - u.point(z).gram).norm(), 1e-10);
}

TEST(JetSurface, PerturbationIsNormalAndScaled) {
  Rng rng(10);
  const EquivariantSurface base(irr_embedding(4));
  const OrthoJet o = orthonormalize(perturbed_jet(base, 0.3, rng));
  for (const SymTangent* ii : {&o.ii11, &o.ii12, &o.ii22}) {
    EXPECT_NEAR(inner(*ii, o.e1), 0.0, 1e-12);
    EXPECT_NEAR(inner(*ii, o.e2), 0.0, 1e-12);
  }
  EXPECT_NEAR(norm(o.direction(0.7)), 1.0, 1e-12);
}

TEST(JetSurface, CsvRoundTrip) {
  Rng rng(11);
  const SurfaceJet j = perturbed_jet(EquivariantSurface(irr_embedding(3)), 0.1, rng);
  std::stringstream ss;
  write_jet_csv(ss, j);
  const SurfaceJet r = read_jet_csv(ss);
  EXPECT_LT((r.point.gram - j.point.gram).norm(), 1e-10);
  EXPECT_LT((r.d1.mat - j.d1.mat).norm(), 1e-10);
  EXPECT_LT((r.ii22.mat - j.ii22.mat).norm(), 1e-10);
  std::stringstream bad("nonsense\n");
  EXPECT_THROW(read_jet_csv(bad), InputError);
  std::stringstream missing("field,row,col,value\npoint,0,0,1\n");
  EXPECT_THROW(read_jet_csv(missing), InputError);
}

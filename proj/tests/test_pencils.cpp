#include "ng/busemann.hpp"
#include "ng/pencils.hpp"

#include "support.hpp"

#include <cmath>
#include <numbers>

using namespace ng;
using ng::test::vec;

namespace {

double quad_residual(const QuadricPencil& p, const Vec& v) {
  double r = 0;
  for (const Mat& q : p.quads) r = std::max(r, std::abs(v.dot(q * v)));
  return r;
}

BaseOptions small_base(int samples = 800) {
  BaseOptions o;
  o.samples = samples;
  return o;
}

IdealPoint tau_one_point(const Vec& v) {
  Mat q = Eigen::HouseholderQR<Mat>(Mat(v.normalized())).householderQ();
  return make_ideal(FlagPoint::from_vectors(q, {1}), ng::test::tau_one(3));
}

Mat random_invertible(int n, Rng& rng) {
  Mat g = la::gaussian(n, n, rng);
  while (std::abs(g.determinant()) < 0.1) g = la::gaussian(n, n, rng);
  return g;
}

}  // namespace

TEST(Pencil, GeneratorsAreOrthonormal) {
  Rng rng(3);
  const SymPoint x = random_point(3, 1.0, rng);
  const Pencil p = make_pencil(x, {random_tangent(x, rng).mat, random_tangent(x, rng).mat});
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) EXPECT_NEAR(inner(p.gens[i], p.gens[j]), i == j ? 1.0 : 0.0, 1e-9);
}

TEST(Pencil, DependentGeneratorsRejected) {
  const QuadricPencil q = preset_pencil("P_red");
  EXPECT_THROW(make_pencil(SymPoint::origin(3), {q.quads[0], 2.0 * q.quads[0]}), InputError);
  EXPECT_THROW(validate(QuadricPencil{{q.quads[0], -q.quads[0]}}), InputError);
  Mat bad = q.quads[0];
  bad(0, 1) = 1;
  EXPECT_THROW(validate(QuadricPencil{{bad}}), InputError);
  EXPECT_THROW(preset_pencil("P_other"), InputError);
  EXPECT_THROW(tangent_pencil({{Mat::Identity(3, 3)}}), InputError);
}

TEST(PencilBase, ReducibleIsSinglePoint) {
  const QuadricPencil q = preset_pencil("P_red");
  for (const ProjectiveBase& b : {base_projective_exact(q), base_projective_sampled(q, small_base())}) {
    ASSERT_EQ(b.components.size(), 1u) << b.method;
    ASSERT_FALSE(b.points.empty());
    for (const Vec& v : b.points) {
      EXPECT_NEAR(std::abs(v(1)), 1.0, 1e-8) << b.method;
      EXPECT_LT(quad_residual(q, v), 1e-10);
    }
  }
}

TEST(PencilBase, IrreducibleIsPointAndLine) {
  const QuadricPencil q = preset_pencil("P_irr");
  const Vec p0 = vec({1, 0, 1}).normalized();
  for (const ProjectiveBase& b : {base_projective(q), base_projective_sampled(q, small_base(3000))}) {
    ASSERT_EQ(b.components.size(), 2u) << b.method;
    int on_point = 0, on_line = 0;
    for (const Vec& v : b.points) {
      EXPECT_LT(quad_residual(q, v), 1e-10);
      if (1 - std::abs(v.dot(p0)) < 1e-8) ++on_point;
      else if (std::abs(v(0) + v(2)) < 1e-8) ++on_line;
    }
    EXPECT_GT(on_point, 0) << b.method;
    EXPECT_GT(on_line, 10) << b.method;
    EXPECT_EQ(on_point + on_line, static_cast<int>(b.points.size())) << b.method;
  }
  EXPECT_EQ(base_projective(q).method, "exact");
}

TEST(PencilBase, EmptyPencilIsWholeSphere) {
  const ProjectiveBase b = base_projective_sampled({}, small_base(200));
  EXPECT_EQ(b.points.size(), 200u);
  EXPECT_EQ(b.dropped, 0);
  for (const Vec& v : b.points) EXPECT_NEAR(v.norm(), 1.0, 1e-12);
}

TEST(PencilBase, HigherRankResiduals) {
  Rng rng(11);
  const SymPoint o = SymPoint::origin(4);
  QuadricPencil q;
  for (int k = 0; k < 3; ++k) q.quads.push_back(random_tangent(o, rng).mat);
  const ProjectiveBase b = base_projective(q, small_base(600));
  EXPECT_EQ(b.method, "sampled");
  for (const Vec& v : b.points) EXPECT_LT(quad_residual(q, v), 1e-10);
  EXPECT_EQ(static_cast<long>(b.points.size()) + b.dropped, 600);
}

TEST(PencilFlagBase, ReducibleIsTangencyCircle) {
  const Pencil p = tangent_pencil(preset_pencil("P_red"));
  const FlagBase fb = base_flag_sl3(p);
  ASSERT_EQ(fb.components.size(), 1u);
  EXPECT_EQ(fb.components[0].local_dim, 1);
  EXPECT_TRUE(fb.warning.empty());
  const Vec tau = ng::test::tau_delta(3);
  for (const FlagPoint& f : fb.flags) {
    const Vec x = f.basis.col(0), y = f.basis.col(2);
    const Vec mirrored = vec({x(0), -x(1), x(2)});
    EXPECT_NEAR(std::abs(mirrored.dot(y)), 1.0, 1e-8);
    EXPECT_NEAR(x(0) * x(0) + x(2) * x(2), x(1) * x(1), 1e-8);
    EXPECT_LT(base_residual(p, make_ideal(f, tau)), 1e-10);
  }
}

TEST(PencilFlagBase, IrreducibleIsThreeCircles) {
  const Pencil p = tangent_pencil(preset_pencil("P_irr"));
  const FlagBase fb = base_flag_sl3(p);
  ASSERT_EQ(fb.components.size(), 3u);
  const Vec l0 = vec({1, 0, 1}).normalized();
  const Vec h0 = vec({1, 0, 1}).normalized();  // normal of span((1,0,-1), (0,1,0))
  std::vector<int> family(3, -1);
  const Vec tau = ng::test::tau_delta(3);
  for (const BaseComponent& c : fb.components) {
    EXPECT_EQ(c.local_dim, 1);
    double line_fixed = 0, plane_fixed = 0, incident = 0;
    for (std::size_t i = 0; i < fb.flags.size(); ++i) {
      if (fb.labels[i] != c.id) continue;
      const Vec x = fb.flags[i].basis.col(0), hn = fb.flags[i].basis.col(2);
      line_fixed = std::max(line_fixed, 1 - std::abs(x.dot(l0)));
      plane_fixed = std::max(plane_fixed, 1 - std::abs(hn.dot(h0)));
      incident = std::max(incident, std::max(std::abs(x.dot(h0)), std::abs(l0.dot(hn))));
      EXPECT_LT(base_residual(p, make_ideal(fb.flags[i], tau)), 1e-10);
    }
    const int kind = line_fixed < 1e-10 ? 0 : plane_fixed < 1e-10 ? 1 : incident < 1e-8 ? 2 : -1;
    ASSERT_GE(kind, 0) << "component " << c.id;
    family[kind] = c.id;
  }
  for (int k = 0; k < 3; ++k) EXPECT_GE(family[k], 0) << "missing family " << k;
}

TEST(PencilFlagBase, RequiresSl3TwoPencil) {
  Rng rng(1);
  const SymPoint o = SymPoint::origin(4);
  EXPECT_THROW(base_flag_sl3(make_pencil(o, {random_tangent(o, rng).mat, random_tangent(o, rng).mat})), InputError);
}

TEST(PencilFlagBase, ProjectionLandsOnBase) {
  const Pencil p = tangent_pencil(preset_pencil("P_irr"));
  const Vec tau = ng::test::tau_delta(3);
  Rng rng(5);
  int landed = 0;
  for (int i = 0; i < 20; ++i) {
    const auto r = project_to_base(p, ng::test::random_ideal(3, tau, rng));
    if (!r) continue;
    ++landed;
    EXPECT_LT(base_residual(p, *r), 1e-10);
  }
  EXPECT_GE(landed, 10);
}

TEST(PencilSingular, TauOneExamples) {
  const Pencil red = tangent_pencil(preset_pencil("P_red"));
  const Pencil irr = tangent_pencil(preset_pencil("P_irr"));
  const IdealPoint r0 = tau_one_point(vec({0, 1, 0}));
  EXPECT_LT(base_residual(red, r0), 1e-12);
  EXPECT_TRUE(is_singular_base_point(red, r0));
  EXPECT_LT(submersion_rank(red, r0), 2);

  const IdealPoint i0 = tau_one_point(vec({1, 0, 1}));
  EXPECT_LT(base_residual(irr, i0), 1e-12);
  EXPECT_FALSE(is_singular_base_point(irr, i0));
  EXPECT_EQ(submersion_rank(irr, i0), 2);
  for (double s : {-2.0, -0.3, 0.0, 0.7, 3.0}) {
    const IdealPoint a = tau_one_point(vec({1, s, -1}));
    EXPECT_LT(base_residual(irr, a), 1e-12);
    EXPECT_TRUE(is_singular_base_point(irr, a)) << s;
    EXPECT_LT(submersion_rank(irr, a), 2) << s;
  }
}

TEST(PencilSingular, RankMatchesSingularity) {
  const Vec tau = ng::test::tau_delta(3);
  for (const char* name : {"P_red", "P_irr"}) {
    const Pencil p = tangent_pencil(preset_pencil(name));
    const FlagBase fb = base_flag_sl3(p, small_base(300));
    for (const FlagPoint& f : fb.flags) {
      const IdealPoint a = make_ideal(f, tau);
      EXPECT_EQ(is_singular_base_point(p, a), submersion_rank(p, a) < 2) << name;
    }
  }
}

TEST(PencilSingular, GenericLineHasFullRank) {
  Rng rng(9);
  const SymPoint x = random_point(3, 1.0, rng);
  const Pencil p = make_pencil(x, {random_tangent(x, rng).mat});
  const Vec tau = ng::test::random_regular(3, rng);
  for (int i = 0; i < 10; ++i) EXPECT_EQ(submersion_rank(p, ng::test::random_ideal(3, tau, rng)), 1);
}

TEST(PencilRegularity, TauDeltaRegular) {
  for (const char* name : {"P_red", "P_irr"}) {
    const RegularityCertificate c = certify_tau_regular(tangent_pencil(preset_pencil(name)), ng::test::tau_delta(3));
    EXPECT_EQ(c.verdict, Verdict::Regular) << name;
    EXPECT_GT(c.margin, 0.0) << name;
  }
}

TEST(PencilRegularity, TauOneNotRegular) {
  for (const char* name : {"P_red", "P_irr"}) {
    const RegularityCertificate c = certify_tau_regular(tangent_pencil(preset_pencil(name)), ng::test::tau_one(3));
    EXPECT_EQ(c.verdict, Verdict::NotRegular) << name;
    EXPECT_LE(c.arc_lo, c.arc_hi);
  }
}

TEST(PencilRegularity, FlatPencilNeverRegular) {
  Rng rng(4);
  const SymPoint o = SymPoint::origin(3);
  const Pencil flat = make_pencil(o, {vec({1, -1, 0}).asDiagonal().toDenseMatrix(), vec({1, 1, -2}).asDiagonal().toDenseMatrix()});
  EXPECT_EQ(certify_tau_regular(flat, ng::test::tau_delta(3)).verdict, Verdict::NotRegular);
  EXPECT_EQ(certify_tau_regular(flat, ng::test::tau_one(3)).verdict, Verdict::NotRegular);
  EXPECT_EQ(certify_tau_regular(flat, ng::test::random_regular(3, rng)).verdict, Verdict::NotRegular);
  EXPECT_THROW(certify_tau_regular(make_pencil(o, {flat.gens[0].mat}), ng::test::tau_delta(3)), InputError);
}

TEST(PencilRegularity, MarginBoundsSweep) {
  const Pencil p = tangent_pencil(preset_pencil("P_irr"));
  const Vec tau = ng::test::tau_delta(3);
  const RegularityCertificate c = certify_tau_regular(p, tau);
  const RootSystem sys = RootSystem::sl(3);
  double worst = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 5000; ++k) {
    const double t = std::numbers::pi * k / 5000;
    const Vec cart = cartan_projection({p.base, std::cos(t) * p.gens[0].mat + std::sin(t) * p.gens[1].mat});
    for (const Vec& w : weyl_orbit(sys, tau)) worst = std::min(worst, std::abs(sys.inner(w, cart)));
  }
  EXPECT_LE(c.margin, worst + 1e-12);
}

TEST(Segre, Diagonal) {
  const SegreSymbol s = segre_symbol(Mat(vec({1, 2, 3}).asDiagonal()), Mat::Identity(3, 3));
  ASSERT_EQ(s.entries.size(), 3u);
  for (int i = 0; i < 3; ++i) {
    EXPECT_NEAR(s.entries[i].value.real(), i + 1.0, 1e-12);
    EXPECT_EQ(s.entries[i].multiplicity, 1);
    EXPECT_EQ(s.entries[i].partition, std::vector<int>{1});
  }
  EXPECT_FALSE(s.real_members_nondegenerate);
}

TEST(Segre, FuchsianSingleBlocks) {
  for (int k = 2; k <= 5; ++k) {
    const FuchsianPencil f = fuchsian_pencil(k);
    const SegreSymbol s = segre_symbol(f.q1, f.q2);
    ASSERT_EQ(s.entries.size(), 2u) << k;
    EXPECT_NEAR(std::abs(s.entries[0].value - std::complex<double>(0, -1)), 0.0, 1e-6) << k;
    EXPECT_NEAR(std::abs(s.entries[1].value - std::complex<double>(0, 1)), 0.0, 1e-6) << k;
    int total = 0;
    for (const SegreEntry& e : s.entries) {
      EXPECT_EQ(e.multiplicity, k);
      EXPECT_EQ(e.partition, std::vector<int>{k});
      total += e.multiplicity;
    }
    EXPECT_EQ(total, 2 * k);
    EXPECT_TRUE(s.real_members_nondegenerate);
  }
}

TEST(Segre, FuchsianMatrices) {
  const FuchsianPencil f = fuchsian_pencil(2);
  ASSERT_EQ(f.lambda.size(), 3u);
  EXPECT_NEAR(f.lambda[0], std::sqrt(3.0), 1e-15);
  EXPECT_NEAR(f.lambda[1], 2.0, 1e-15);
  EXPECT_NEAR(f.lambda[2], std::sqrt(3.0), 1e-15);
  EXPECT_LT((f.q1 - f.q1.adjoint()).norm(), 1e-15);
  EXPECT_LT((f.q2 - f.q2.adjoint()).norm(), 1e-15);
  EXPECT_THROW(fuchsian_pencil(0), InputError);
}

TEST(Segre, UnipotentOrder) {
  for (int k = 2; k <= 5; ++k) {
    const Mat t = fuchsian_pencil(k).t;
    EXPECT_EQ(nilpotency_order(t - Mat::Identity(k, k)), k) << k;
  }
  EXPECT_EQ(nilpotency_order(Mat::Identity(2, 2)), 0);
}

TEST(Segre, RotationInvariantDeterminant) {
  for (int k = 2; k <= 4; ++k) {
    const FuchsianPencil f = fuchsian_pencil(k);
    const std::complex<double> d0 = f.q1.determinant();
    for (int j = 1; j < 24; ++j) {
      const double t = 2 * std::numbers::pi * j / 24;
      const std::complex<double> d = (std::cos(t) * f.q1 + std::sin(t) * f.q2).determinant();
      EXPECT_NEAR(std::abs(d - d0), 0.0, 1e-9 * std::max(1.0, std::abs(d0))) << k << " " << t;
    }
  }
}

TEST(Segre, MobiusInvariance) {
  Rng rng(21);
  std::normal_distribution<double> g;
  const FuchsianPencil f = fuchsian_pencil(3);
  const Mat q1 = Mat(vec({1, 1, 2, 5}).asDiagonal());
  const Mat q2 = Mat::Identity(4, 4);
  int checked = 0;
  while (checked < 50) {
    const double a = g(rng), b = g(rng), c = g(rng), d = g(rng);
    if (std::abs(a * d - b * c) < 0.2) continue;
    ++checked;
    auto mob = [&](std::complex<double> s) { return (a * s + b) / (c * s + d); };
    // Fuchsian: both values on the imaginary axis, blocks stay [3].
    const SegreSymbol s = segre_symbol(CMat(a * f.q1 + b * f.q2), CMat(c * f.q1 + d * f.q2));
    ASSERT_EQ(s.entries.size(), 2u);
    for (const SegreEntry& e : s.entries) {
      EXPECT_EQ(e.partition, std::vector<int>{3});
      const double gap = std::min(std::abs(e.value - mob({0, 1})), std::abs(e.value - mob({0, -1})));
      EXPECT_LT(gap, 1e-5 * std::max(1.0, std::abs(e.value)));
    }
    // Diagonalizable real example: the repeated value keeps partition [1, 1].
    if (std::abs(c * 1 + d) < 0.05 || std::abs(c * 2 + d) < 0.05 || std::abs(c * 5 + d) < 0.05) continue;
    const SegreSymbol r = segre_symbol(Mat(a * q1 + b * q2), Mat(c * q1 + d * q2));
    ASSERT_EQ(r.entries.size(), 3u);
    for (const SegreEntry& e : r.entries) {
      const bool doubled = std::abs(e.value - mob(1.0)) < 1e-8 * std::max(1.0, std::abs(e.value));
      EXPECT_EQ(e.partition, doubled ? std::vector<int>({1, 1}) : std::vector<int>({1}));
    }
  }
}

TEST(Segre, CongruenceInvariance) {
  Rng rng(8);
  const FuchsianPencil f = fuchsian_pencil(2);
  for (int trial = 0; trial < 20; ++trial) {
    const Mat gr = random_invertible(4, rng);
    const CMat gm = gr.cast<std::complex<double>>();
    const SegreSymbol s = segre_symbol(CMat(gm.adjoint() * f.q1 * gm), CMat(gm.adjoint() * f.q2 * gm));
    ASSERT_EQ(s.entries.size(), 2u);
    for (const SegreEntry& e : s.entries) EXPECT_EQ(e.partition, std::vector<int>{2});

    const Mat g3 = random_invertible(3, rng);
    const SegreSymbol d = segre_symbol(Mat(g3.transpose() * vec({1, 2, 3}).asDiagonal() * g3), Mat(g3.transpose() * g3));
    ASSERT_EQ(d.entries.size(), 3u);
    for (int i = 0; i < 3; ++i) EXPECT_NEAR(d.entries[i].value.real(), i + 1.0, 1e-8);
  }
}

TEST(Segre, Errors) {
  Mat a = Mat::Zero(3, 3), b = Mat::Zero(3, 3);
  a(0, 0) = 1;
  b(1, 1) = 1;
  try {
    segre_symbol(a, b);
    FAIL() << "irregular pencil accepted";
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("irregular"), std::string::npos);
  }
  EXPECT_THROW(segre_symbol(Mat(Mat::Identity(2, 2)), Mat(vec({1, 0}).asDiagonal())), InputError);
  EXPECT_THROW(segre_symbol(Mat(Mat::Identity(2, 2)), Mat(Mat::Identity(3, 3))), InputError);
  Mat ns = Mat::Identity(2, 2);
  ns(0, 1) = 1;
  EXPECT_THROW(segre_symbol(ns, Mat::Identity(2, 2)), InputError);
}

TEST(PencilCluster, SeparatesAndJoins) {
  std::vector<Vec> pts;
  for (int i = 0; i < 50; ++i) pts.push_back(vec({std::cos(0.01 * i), std::sin(0.01 * i), 0}));
  for (int i = 0; i < 50; ++i) pts.push_back(vec({0, std::cos(0.01 * i), std::sin(0.01 * i)}) * 5.0);
  const auto labels = cluster_points(pts, 0.05);
  for (int i = 0; i < 50; ++i) EXPECT_EQ(labels[i], 0);
  for (int i = 50; i < 100; ++i) EXPECT_EQ(labels[i], 1);
}

TEST(PencilCluster, ProjectorEmbeddingIsSignFree) {
  Rng rng(2);
  for (int i = 0; i < 20; ++i) {
    const Vec v = la::random_unit(4, rng), w = la::random_unit(4, rng);
    EXPECT_LT((projector_embedding(v) - projector_embedding(-3.0 * v)).norm(), 1e-14);
    const double c = v.dot(w);
    EXPECT_NEAR((projector_embedding(v) - projector_embedding(w)).norm(), std::sqrt(1 - c * c), 1e-12);
  }
}

TEST(PencilFlagBase, ComponentCountsAcrossSeeds) {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    BaseOptions o;
    o.seed = seed;
    EXPECT_EQ(base_flag_sl3(tangent_pencil(preset_pencil("P_red")), o).components.size(), 1u) << seed;
    EXPECT_EQ(base_flag_sl3(tangent_pencil(preset_pencil("P_irr")), o).components.size(), 3u) << seed;
  }
}

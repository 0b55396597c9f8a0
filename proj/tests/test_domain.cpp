#include "ng/busemann.hpp"
#include "ng/domain.hpp"
#include "ng/immersions.hpp"
#include "ng/pencils.hpp"

#include "support.hpp"

#include <cmath>
#include <numbers>

using namespace ng;
using ng::test::vec;

namespace {

const EquivariantSurface& irr3() {
  static const EquivariantSurface u(irr_embedding(3));
  return u;
}

IdealPoint line_point(const Vec& c) {
  const Mat q = Eigen::HouseholderQR<Mat>(Mat(c.normalized())).householderQ();
  return make_ideal(FlagPoint::from_vectors(q, {1}), ng::test::tau_one(3));
}

const std::vector<FlagPoint>& limit_flags() {
  static const std::vector<FlagPoint> b = boundary_flags(*irr3().embedding(), fuchsian_generators(2), 4);
  return b;
}

// Flags in special position to a limit flag f with basis (b0, b1, b2).
std::vector<IdealPoint> incident_flags(const FlagPoint& f) {
  const Mat& b = f.basis;
  const Vec tau = ng::test::tau_delta(3);
  std::vector<IdealPoint> out;
  for (const std::array<int, 3>& p : {std::array{0, 1, 2}, std::array{1, 0, 2}, std::array{0, 2, 1}, std::array{1, 2, 0}}) {
    Mat m(3, 3);
    m << b.col(p[0]), b.col(p[1]), b.col(p[2]);
    out.push_back(make_ideal(FlagPoint::from_vectors(m, {1, 2}), tau));
  }
  return out;
}

std::vector<IdealPoint> basepoint_fiber(const Surface& u, const Vec& tau, int samples) {
  const SurfaceJet j = u.jet(h2::kI);
  BaseOptions o;
  o.samples = samples;
  const FlagBase fb = base_flags(make_pencil(j.point, {j.d1.mat, j.d2.mat}), tau, o);
  std::vector<IdealPoint> out;
  for (const FlagPoint& f : fb.flags) out.push_back(make_ideal(f, tau));
  return out;
}

}  // namespace

TEST(DomainProjective, SignOfInvariantForm) {
  const auto& u = irr3();
  std::vector<Vec> grid = projective_grid(600);
  std::vector<IdealPoint> as;
  for (const Vec& c : grid) as.push_back(line_point(c));
  const auto qs = domain_membership_batch(as, u, SymPoint::origin(3));
  long agree = 0, counted = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (veronese_conic_distance(grid[i]) < 0.02) continue;
    ++counted;
    const bool positive = veronese_form(grid[i]) > 0;
    agree += (qs[i].result == Membership::Inside) == positive && qs[i].result != Membership::Ambiguous;
    if (!positive && qs[i].result == Membership::Outside) EXPECT_EQ(qs[i].reason, "flat minimum");
  }
  EXPECT_GE(double(agree) / counted, 0.99);
}

TEST(DomainProjective, FormIsInvariant) {
  const Sl2Embedding& e = *irr3().embedding();
  Rng rng(2);
  for (const Mat2& g : surface_group_elements(fuchsian_generators(2), 2)) {
    const Vec c = la::random_unit(3, rng);
    const double before = veronese_form(c);
    EXPECT_NEAR(veronese_form(e.group(g) * c), before, 1e-9 * std::max(1.0, e.group(g).squaredNorm()));
  }
}

TEST(DomainProjective, ConicDistance) {
  EXPECT_NEAR(veronese_conic_distance(vec({1, 0, 0})), 0.0, 1e-9);
  EXPECT_NEAR(veronese_conic_distance(vec({0, 0, 1})), 0.0, 1e-9);
  EXPECT_GT(veronese_conic_distance(vec({1, 0, 1})), 0.5);
  EXPECT_THROW(veronese_form(vec({1, 0})), InputError);
  const auto g = projective_grid(100);
  EXPECT_EQ(g.size(), 100u);
  for (const Vec& v : g) {
    EXPECT_NEAR(v.norm(), 1.0, 1e-12);
    EXPECT_GT(v(2), 0.0);
  }
}

TEST(DomainMembership, BasepointFiberProjectsToI) {
  const auto& u = irr3();
  const auto fiber = basepoint_fiber(u, ng::test::tau_delta(3), 300);
  ASSERT_GT(fiber.size(), 100u);
  for (std::size_t i = 0; i < fiber.size(); i += 7) {
    const DomainQuery q = domain_membership(fiber[i], u, SymPoint::origin(3));
    ASSERT_EQ(q.result, Membership::Inside);
    EXPECT_LT(h2::distance(q.minimizer, h2::kI), 1e-6);
    EXPECT_LT(q.gradient_norm, 1e-6);
    EXPECT_GT(q.hessian_eigenvalues(0), 0.0);
  }
}

TEST(DomainMembership, AxisEndpointIsOutside) {
  const auto& u = irr3();
  const Vec tau = ng::test::tau_delta(3);
  for (const Mat2& g : fuchsian_generators(2)) {
    const IdealPoint a = make_ideal(attracting_flag(u.embedding()->group(g)), tau);
    const DomainQuery q = domain_membership(a, u, SymPoint::origin(3));
    EXPECT_EQ(q.result, Membership::Outside);
    EXPECT_LT(q.escape_slope, -1.0);
    EXPECT_THROW(fibration_project(a, u, SymPoint::origin(3)), NumericalError);
  }
}

TEST(DomainMembership, EscapeSlopeMatchesTitsAngle) {
  const auto& u = irr3();
  const Sl2Embedding& e = *u.embedding();
  const Vec tau = ng::test::tau_delta(3);
  const double speed = 2.0 * std::sqrt(3.0);  // |du| for the irreducible embedding
  int checked = 0;
  for (std::size_t k = 0; k < limit_flags().size(); k += 400)
    for (const IdealPoint& a : incident_flags(limit_flags()[k])) {
      const DomainQuery q = domain_membership(a, u, SymPoint::origin(3));
      ASSERT_EQ(q.result, Membership::Outside);
      const FlagPoint end = attracting_flag(e.group(h2::exp_element(5.0 * q.escape_direction)));
      const double expected = -speed * std::cos(tits_angle_flat(a, make_ideal(end, tau)));
      EXPECT_NEAR(q.escape_slope, expected, 5e-2 * speed);
      ++checked;
    }
  EXPECT_GE(checked, 8);
}

TEST(DomainMembership, MinimizerIndependentOfBasepointAndStart) {
  const auto& u = irr3();
  const Vec tau = ng::test::tau_delta(3);
  Rng rng(17);
  int inside = 0;
  for (int i = 0; i < 12; ++i) {
    const IdealPoint a = ng::test::random_ideal(3, tau, rng);
    const DomainQuery q = domain_membership(a, u, SymPoint::origin(3));
    if (q.result != Membership::Inside) continue;
    ++inside;
    for (int k = 0; k < 2; ++k) {
      EXPECT_LT(h2::distance(fibration_project(a, u, random_point(3, 1.0, rng)), q.minimizer), 1e-6);
    }
    DomainOptions o;
    o.center = h2::exp_at(h2::kI, Vec2(1.5, -0.8));
    EXPECT_LT(h2::distance(fibration_project(a, u, SymPoint::origin(3), o), q.minimizer), 1e-5);
  }
  EXPECT_GE(inside, 10);
}

TEST(DomainMembership, Equivariance) {
  const auto& u = irr3();
  const Sl2Embedding& e = *u.embedding();
  const Vec tau = ng::test::tau_delta(3);
  Rng rng(23);
  const auto words = surface_group_elements(fuchsian_generators(2), 2);
  for (int i = 0; i < 6; ++i) {
    const IdealPoint a = ng::test::random_ideal(3, tau, rng);
    const h2::Point z = fibration_project(a, u, SymPoint::origin(3));
    for (std::size_t w = 0; w < words.size(); w += 9) {
      const IdealPoint ga = act(e.group(words[w]), a);
      const DomainQuery q = domain_membership(ga, u, SymPoint::origin(3));
      ASSERT_EQ(q.result, Membership::Inside);
      EXPECT_LT(h2::distance(q.minimizer, h2::mobius(words[w], z)), 1e-5);
    }
  }
  for (const IdealPoint& a : incident_flags(limit_flags()[0]))
    EXPECT_EQ(domain_membership(act(e.group(words[3]), a), u, SymPoint::origin(3)).result, Membership::Outside);
}

TEST(DomainMembership, InsideIsOpen) {
  const auto& u = irr3();
  const Vec tau = ng::test::tau_delta(3);
  Rng rng(31);
  for (int i = 0; i < 10; ++i) {
    const IdealPoint a = ng::test::random_ideal(3, tau, rng);
    const DomainQuery q = domain_membership(a, u, SymPoint::origin(3));
    if (q.result != Membership::Inside || q.hessian_eigenvalues(0) < 0.1) continue;
    for (int k = 0; k < 4; ++k) EXPECT_EQ(domain_membership(perturb(a, 1e-3, rng), u, SymPoint::origin(3)).result, Membership::Inside);
  }
}

TEST(DomainMembership, BatchSerialMatchesParallel) {
  const auto& u = irr3();
  const Vec tau = ng::test::tau_delta(3);
  Rng rng(5);
  std::vector<IdealPoint> as;
  for (int i = 0; i < 16; ++i) as.push_back(ng::test::random_ideal(3, tau, rng));
  const auto s = domain_membership_batch(as, u, SymPoint::origin(3), {}, Exec::Serial);
  const auto p = domain_membership_batch(as, u, SymPoint::origin(3), {}, Exec::Parallel);
  for (std::size_t i = 0; i < as.size(); ++i) {
    EXPECT_EQ(s[i].result, p[i].result);
    EXPECT_EQ(s[i].minimizer, p[i].minimizer);
  }
}

TEST(DomainMembership, Errors) {
  const auto& u = irr3();
  Rng rng(1);
  DomainOptions o;
  o.radii.clear();
  const IdealPoint a = ng::test::random_ideal(3, ng::test::tau_delta(3), rng);
  EXPECT_THROW(domain_membership(a, u, SymPoint::origin(3), o), InputError);
  EXPECT_THROW(domain_membership(ng::test::random_ideal(4, ng::test::tau_delta(4), rng), u, SymPoint::origin(4)), InputError);
}

TEST(DomainFiber, MatchesThreeCircleBase) {
  const auto& u = irr3();
  FiberOptions o;
  o.samples = 150;
  o.base_checks = 60;
  for (h2::Point y : {h2::kI, h2::Point(0.3, 1.7)}) {
    const FiberReport r = fiber_vs_pencil_base(u, ng::test::tau_delta(3), y, o);
    EXPECT_GT(r.fiber.size(), 100u);
    EXPECT_EQ(r.rejected, 0);
    EXPECT_LT(r.matching_distance, 1e-3);
  }
}

TEST(DomainFiber, NonRegularFiberIsRegularBase) {
  const auto& u = irr3();
  FiberOptions o;
  o.samples = 150;
  o.base_checks = 40;
  const FiberReport r = fiber_vs_pencil_base(u, ng::test::tau_one(3), h2::kI, o);
  EXPECT_LT(r.matching_distance, 1e-3);
  EXPECT_GT(r.rejected, 0);
  // The regular base is a single line; every fiber point is that line.
  for (const IdealPoint& a : r.fiber) EXPECT_LT(flag_distance(a.flag, r.fiber.front().flag), 1e-6);
  for (const IdealPoint& a : r.base) EXPECT_LT(flag_distance(a.flag, r.fiber.front().flag), 1e-6);
}

TEST(DomainFiber, RankOneBaseIsAntipodalPair) {
  const SymPoint o = SymPoint::origin(2);
  const Vec tau = ng::test::tau_one(2);
  const Pencil p = make_pencil(o, {Mat(vec({1, -1}).asDiagonal())});
  BaseOptions bo;
  bo.samples = 200;
  const FlagBase fb = base_flags(p, tau, bo);
  ASSERT_EQ(fb.components.size(), 2u);
  const IdealPoint a = make_ideal(fb.flags[0], tau);
  IdealPoint b = a;
  for (std::size_t i = 0; i < fb.flags.size(); ++i)
    if (fb.labels[i] != fb.labels[0]) b = make_ideal(fb.flags[i], tau);
  EXPECT_LT((direction_vector(a, o).mat + direction_vector(b, o).mat).norm(), 1e-9);
  EXPECT_NEAR(inner(direction_vector(a, o), p.gens[0]), 0.0, 1e-10);
}

TEST(DomainThickening, Examples) {
  const Vec tau = ng::test::tau_delta(3);
  const auto& bnd = limit_flags();
  for (const IdealPoint& a : basepoint_fiber(irr3(), tau, 60)) EXPECT_TRUE(thickening_domain_membership(a, bnd, tau));
  EXPECT_FALSE(thickening_domain_membership(make_ideal(bnd[5], tau), bnd, tau));
  Rng rng(4);
  EXPECT_TRUE(thickening_domain_membership(ng::test::random_ideal(3, tau, rng), {}, tau));
}

TEST(DomainThickening, AgreesNearLimitFlags) {
  const auto& u = irr3();
  const Vec tau = ng::test::tau_delta(3);
  const auto& bnd = limit_flags();
  Rng rng(12);
  long agree = 0, total = 0;
  for (std::size_t k = 0; k < bnd.size(); k += 97)
    for (const IdealPoint& a0 : incident_flags(bnd[k]))
      for (double eps : {0.0, 0.05, 0.2}) {
        const IdealPoint a = eps > 0 ? perturb(a0, eps, rng) : a0;
        const Membership m = domain_membership(a, u, SymPoint::origin(3)).result;
        const bool th = thickening_domain_membership(a, bnd, tau);
        ++total;
        agree += m != Membership::Ambiguous && (m == Membership::Inside) == th;
        if (eps == 0.0) EXPECT_FALSE(th);
      }
  EXPECT_GE(double(agree) / total, 0.99);
}

TEST(DomainThickening, AttractingFlagIsFixed) {
  const Sl2Embedding& e = *irr3().embedding();
  for (const Mat2& g : fuchsian_generators(2)) {
    const Mat m = e.group(g);
    const FlagPoint f = attracting_flag(m);
    EXPECT_LT(flag_distance(act(m, f), f), 1e-9);
    const FlagPoint r = attracting_flag(m.inverse());
    EXPECT_EQ(relative_position(f, r).perm, (std::vector<int>{2, 1, 0}));
  }
}

TEST(DomainCompare, UniformSampleAgrees) {
  const auto& u = irr3();
  const Vec tau = ng::test::tau_delta(3);
  CompareOptions o;
  o.samples = 120;
  o.perturbations = 3;
  const DomainComparison c = compare_domains(u, tau, tau, limit_flags(), o);
  EXPECT_EQ(c.samples, 120);
  EXPECT_EQ(c.agree + c.disagree + c.in_band, 120);
  EXPECT_GE(c.agreement, 0.99);
  EXPECT_EQ(static_cast<long>(c.band_flags.size()), 120);
}

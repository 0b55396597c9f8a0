#pragma once

#include "ng/common.hpp"
#include "ng/flags.hpp"
#include "ng/surface.hpp"

#include <string>
#include <vector>

namespace ng {

enum class Membership { Inside, Outside, Ambiguous };
std::string to_string(Membership m);

struct DomainOptions {
  h2::Point center = h2::kI;             // disks are centered here
  std::vector<double> radii{3.0, 6.0, 12.0};
  double escape_slope = 1e-3;            // delta per unit surface length
  double grad_tol = 1e-6;
  double flat_tol = 1e-5;                // Hessian eigenvalues at or below this trigger the flatness test
  double flat_radius = 3.0;
  int max_iter = 200;                    // per disk
  double fd_step = 1e-4;
};

struct DomainQuery {
  Membership result = Membership::Ambiguous;
  std::string reason;  // "critical point", "escape", "flat minimum", "no conclusion"
  h2::Point minimizer = h2::kI;
  double value = 0.0;
  Vec2 hessian_eigenvalues = Vec2::Zero();  // ascending
  double gradient_norm = 0.0;
  double escape_slope = 0.0;                // mean slope over the outer half of the escaping ray
  Vec2 escape_direction = Vec2::Zero();     // unit, normal coordinates at the center
  double radius = 0.0;                      // last disk radius used
  int iterations = 0;
};

// Minimizes b_{a,o} o u over expanding disks in moving normal coordinates.
DomainQuery domain_membership(const IdealPoint& a, const Surface& u, const SymPoint& o, const DomainOptions& opt = {});
std::vector<DomainQuery> domain_membership_batch(const std::vector<IdealPoint>& a, const Surface& u, const SymPoint& o,
                                                 const DomainOptions& opt = {}, Exec exec = Exec::Parallel);

// The minimizer; NumericalError unless the point is Inside.
h2::Point fibration_project(const IdealPoint& a, const Surface& u, const SymPoint& o, const DomainOptions& opt = {});

struct FiberOptions {
  int samples = 300;        // Haar flags pushed onto the critical set at y
  int base_checks = 200;    // base points whose projection is checked
  double tol = 1e-4;        // in surface coordinates
  std::uint64_t seed = kDefaultSeed;
  Exec exec = Exec::Parallel;
  DomainOptions domain{};
};

struct FiberReport {
  h2::Point y = h2::kI;
  std::vector<IdealPoint> fiber;  // domain points projecting to y
  std::vector<IdealPoint> base;   // regular base of du(T_y M)
  long candidates = 0;
  long rejected = 0;              // critical at y but not projecting to y
  double fiber_to_base = 0.0;     // sup over the fiber of the distance to the base variety
  double base_projection = 0.0;   // sup over checked base points of d(pi_u(a), y)
  double matching_distance = 0.0;
  double hausdorff = 0.0;         // between the two clouds, sampling-limited
};
FiberReport fiber_vs_pencil_base(const Surface& u, const Vec& tau, h2::Point y, const FiberOptions& opt = {});

// Attracting full flag of g by QR iteration.
FlagPoint attracting_flag(const Mat& g, int max_iter = 500);
// Attracting flags of the images of all words up to max_len, merged on a grid of size merge.
std::vector<FlagPoint> boundary_flags(const Sl2Embedding& emb, const std::vector<Mat2>& gens, int max_len = 6,
                                      double merge = 1e-3, Exec exec = Exec::Parallel);

// True iff a lies in no thickening K^{tau0}_f, f in the sample (full flags).
bool thickening_domain_membership(const IdealPoint& a, const std::vector<FlagPoint>& boundary, const Vec& tau0);

struct CompareOptions {
  int samples = 2000;
  double band = 0.02;
  int perturbations = 8;
  std::uint64_t seed = kDefaultSeed;
  Exec exec = Exec::Parallel;
  DomainOptions domain{};
};
struct DomainComparison {
  long samples = 0;
  long in_band = 0;
  long agree = 0;     // outside the band
  long disagree = 0;  // outside the band
  long ambiguous = 0;
  double agreement = 0.0;
  std::vector<IdealPoint> disagreements;
  std::vector<char> band_flags;  // per sample
};
DomainComparison compare_domains(const Surface& u, const Vec& tau, const Vec& tau0, const std::vector<FlagPoint>& boundary,
                                 const CompareOptions& opt = {});

// Rotation of a flag by exp(eps K) for a unit K in so(n).
IdealPoint perturb(const IdealPoint& a, double eps, Rng& rng);

// The invariant form of the 3-dimensional irreducible representation, 4 c0 c2 - 2 c1^2, and the
// angular distance of [c] to its null conic.
double veronese_form(const Vec& c);
double veronese_conic_distance(const Vec& c);
// Near-uniform points of RP^2 (Fibonacci hemisphere).
std::vector<Vec> projective_grid(int count);

}  // namespace ng

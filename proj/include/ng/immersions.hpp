#pragma once

#include "ng/common.hpp"
#include "ng/flags.hpp"
#include "ng/rootsys.hpp"
#include "ng/surface.hpp"

#include <vector>

namespace ng {

// min over roots beta with beta(tau_Theta) != 0 of |beta(tau_Theta)| / |alpha|^2, alpha in Theta.
double compute_c_theta(const RootSystem& sys, const std::vector<int>& orbit);

struct CriterionOptions {
  int directions = 48;          // unit v in du(T_yM)
  int flags_per_direction = 48;  // Haar flags pushed onto the critical set
  double ortho_tol = 1e-3;
  int refine = 8;  // worst samples refined by local search
  double pass_margin = 1e-6;
  std::uint64_t seed = kDefaultSeed;
  Exec exec = Exec::Parallel;
};

struct CriterionReport {
  Vec tau;
  double margin = 0.0;  // epsilon: inf of Hess + <II, v_a> over critical pairs
  double ratio = 0.0;   // C: inf of the same quantity over <v_a, du v>^2 on all samples
  double lambda = 0.0;
  long samples = 0;
  long critical = 0;
  double worst_theta = 0.0;
  IdealPoint worst_flag;
  bool passed = false;
};

// Critical-direction Hessian test at u(y), over F_tau and F_iota(tau).
CriterionReport nearly_geodesic_check(const Surface& u, h2::Point y, const Vec& tau, const CriterionOptions& opt = {});

struct SufficientReport {
  bool holds = false;
  double slack = 0.0;  // min over v, alpha of c alpha(Cartan du v)^2 - |Cartan II(v,v)|_tau
};
SufficientReport sufficient_condition_check(const Surface& u, h2::Point y, const std::vector<int>& orbit,
                                            int directions = 720);

// Side pairings of a regular hyperbolic octagon; [a,b][c,d] = +-I.
std::vector<Mat2> fuchsian_generators(int genus = 2);

// Reduced, Dehn-filtered words of length 1..max_len in the genus-2 generators.
std::vector<Mat2> surface_group_elements(const std::vector<Mat2>& gens, int max_len);

struct RootFit {
  double b = 0.0, c = 0.0;
  double violation_fraction = 0.0;
};
struct LimitConeReport {
  long words = 0;
  double min_wall_angle = 0.0;                  // over all words of length >= min_len
  std::vector<double> wall_angle_by_length;      // index = word length
  std::vector<RootFit> fits;                     // one per simple root
  std::vector<std::pair<int, Vec>> directions;   // (length, unit Cartan direction), strided sample
};
struct LimitConeOptions {
  int max_len = 8;
  int min_len = 1;
  std::size_t keep_directions = 20000;
  Exec exec = Exec::Parallel;
};
// Reduced words in the surface group with Dehn filtering, image under the embedding.
LimitConeReport limit_cone_sample(const Sl2Embedding& emb, const std::vector<Mat2>& gens, const Vec& tau,
                                  const LimitConeOptions& opt = {});

// Angle of the Cartan direction of g^k to the nearest wall of tau, for k = 1..kmax.
std::vector<double> cyclic_wall_angles(const Mat& g, const Vec& tau, int kmax);

// |asin <w tau, d>| minimized over W, for a unit direction d.
double wall_angle(const RootSystem& sys, const std::vector<Vec>& tau_orbit, const Vec& d);

}  // namespace ng

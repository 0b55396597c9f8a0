#pragma once

#include "ng/common.hpp"
#include "ng/flags.hpp"
#include "ng/rootsys.hpp"
#include "ng/surface.hpp"
#include "ng/symspace.hpp"

#include <vector>

namespace ng {

struct FinslerContext {
  RootSystem sys;
  Vec tau;
  std::vector<Vec> images;  // W.tau
};

FinslerContext make_finsler_context(const RootSystem& sys, const Vec& tau);

double pseudo_norm(const FinslerContext& ctx, const Vec& v);
double finsler_distance(const FinslerContext& ctx, const SymPoint& x, const SymPoint& y);

struct BusemannSup {
  double sampled;  // max over the random flags
  double refined;  // after local ascent from the best samples
  IdealPoint argmax;
};
// max over a in F_tau of b_{a,x}(y), by sampling Haar flags and local ascent.
BusemannSup busemann_sup(const FinslerContext& ctx, const SymPoint& x, const SymPoint& y, int samples,
                         std::uint64_t seed = kDefaultSeed, Exec exec = Exec::Parallel);

struct ProjectionOptions {
  h2::Point start = h2::kI;
  int max_iter = 400;
  double tol = 1e-6;
};
struct Projection {
  h2::Point z;
  double value;
  double residual;  // max descent slope over 64 directions
  int iterations;
};
// argmin over H2 of d^tau(x, u(z)).
Projection nearest_point_projection(const FinslerContext& ctx, const Surface& u, const SymPoint& x,
                                    const ProjectionOptions& opt = {});

}  // namespace ng

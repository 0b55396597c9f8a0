#pragma once

#include "ng/common.hpp"
#include "ng/flags.hpp"
#include "ng/linalg.hpp"
#include "ng/rootsys.hpp"
#include "ng/symspace.hpp"

#include <gtest/gtest.h>

namespace ng::test {

inline Vec vec(std::initializer_list<double> xs) {
  Vec v(static_cast<int>(xs.size()));
  int i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

inline Vec tau_delta(int n) {
  std::vector<int> all(n - 1);
  for (int i = 0; i < n - 1; ++i) all[i] = i;
  return normalized_coroot(RootSystem::sl(n), all);
}
inline Vec tau_one(int n) { return fundamental_direction(RootSystem::sl(n), 0); }

inline IdealPoint random_ideal(int n, const Vec& tau, Rng& rng) {
  return make_ideal(random_flag(n, type_of_weights(tau), rng), tau);
}

// Unit chamber vector with distinct entries.
inline Vec random_regular(int n, Rng& rng) {
  const RootSystem sys = RootSystem::sl(n);
  Vec v = la::gaussian(n, 1, rng).col(0);
  v.array() -= v.mean();
  return sys.normalized(chamber_project(sys, v).chamber);
}

}  // namespace ng::test

#pragma once

#include "ng/common.hpp"
#include "ng/rootsys.hpp"
#include "ng/symspace.hpp"

#include <vector>

namespace ng {

// Partial flag of the given type, carried by a full orthonormal basis.
struct FlagPoint {
  std::vector<int> type;  // strictly increasing dims in [1, n-1]
  Mat basis;              // first type[j] columns span the j-th subspace

  int dim() const { return static_cast<int>(basis.rows()); }
  static FlagPoint standard(int n, std::vector<int> type);
  static FlagPoint full(const Mat& basis);
  static FlagPoint from_vectors(const Mat& vectors, std::vector<int> type);  // QR of arbitrary columns
};

struct IdealPoint {
  FlagPoint flag;
  Vec weights;  // unit chamber vector of sl(n)

  int dim() const { return flag.dim(); }
};

// Flag type determined by the jumps of a chamber vector.
std::vector<int> type_of_weights(const Vec& tau, double tol = 1e-9);

void validate(const FlagPoint& f);
void validate(const IdealPoint& a);

IdealPoint make_ideal(const FlagPoint& f, const Vec& weights);
IdealPoint make_ideal(const Mat& basis, const Vec& weights);  // type from the weights

FlagPoint act(const Mat& g, const FlagPoint& f);
IdealPoint act(const Mat& g, const IdealPoint& a);

SymTangent direction_vector(const IdealPoint& a, const SymPoint& x);

// Permutation w with dim(V_i cap W_j) = #{k <= i : w(k) <= j} (0-based in storage).
WeylElement relative_position(const FlagPoint& f1, const FlagPoint& f2);

struct TitsNumericOptions {
  int restarts = 8;
  int max_iter = 500;
  double start_spread = 1.0;
  std::uint64_t seed = kDefaultSeed;
  Exec exec = Exec::Parallel;
};
double tits_angle_numeric(const IdealPoint& a, const IdealPoint& b, const TitsNumericOptions& opt = {});

double tits_angle_flat(const IdealPoint& a, const IdealPoint& b);

bool thickening_membership(const IdealPoint& a, const IdealPoint& f, double tol = 1e-9);

// Haar-random flag of the given type.
FlagPoint random_flag(int n, std::vector<int> type, Rng& rng);

// Projective distance between flags: max over the type's subspaces of the chordal gap.
double flag_distance(const FlagPoint& f1, const FlagPoint& f2);

// Canonical representative: unit columns with first nonzero coordinate positive.
FlagPoint canonical(const FlagPoint& f);

}  // namespace ng

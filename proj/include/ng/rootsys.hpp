#pragma once

#include "ng/common.hpp"

#include <cmath>
#include <optional>
#include <string>
#include <vector>

namespace ng {

enum class Family { A, B, C, D };

std::string to_string(Family f);
Family family_from_string(const std::string& s);

// Signed permutation: (w.v)[i] = sign[i] * v[perm[i]].
struct WeylElement {
  std::vector<int> perm;
  std::vector<int> sign;

  static WeylElement identity(int n);
  Vec apply(const Vec& v) const;
  WeylElement compose(const WeylElement& other) const;  // (this o other)
  WeylElement inverse() const;
  bool operator==(const WeylElement&) const = default;
};

class RootSystem {
 public:
  static constexpr int kMaxRank = 6;

  RootSystem(Family family, int rank);
  static RootSystem sl(int n) { return RootSystem(Family::A, n - 1); }

  Family family() const { return family_; }
  int rank() const { return rank_; }
  int ambient_dim() const { return dim_; }
  double metric_scale() const { return scale_; }

  double inner(const Vec& u, const Vec& v) const { return scale_ * u.dot(v); }
  double norm(const Vec& v) const { return std::sqrt(inner(v, v)); }
  Vec normalized(const Vec& v) const { return v / norm(v); }
  // Operator norm of a root alpha(v) = coeffs . v, i.e. max_{|v|=1} |alpha(v)|.
  double root_norm(const Vec& coeffs) const { return coeffs.norm() / std::sqrt(scale_); }
  // Metric dual of a linear form.
  Vec dual(const Vec& coeffs) const { return coeffs / scale_; }

  // Project onto the ambient model of a (trace zero for family A).
  Vec to_a(const Vec& v) const;

  const std::vector<Vec>& simple_roots() const { return simple_; }
  const std::vector<Vec>& positive_roots() const { return positive_; }
  const std::vector<WeylElement>& weyl_group() const { return weyl_; }

 private:
  Family family_;
  int rank_;
  int dim_;
  double scale_;
  std::vector<Vec> simple_;
  std::vector<Vec> positive_;
  std::vector<WeylElement> weyl_;
};

std::vector<Vec> simple_roots(const RootSystem& sys);

struct ChamberProjection {
  Vec chamber;
  WeylElement w;  // w.apply(v) == chamber
};
ChamberProjection chamber_project(const RootSystem& sys, const Vec& v);

bool in_chamber(const RootSystem& sys, const Vec& v, double tol = 1e-12);

// Components of the Dynkin diagram with multiple edges removed (indices into simple roots).
std::vector<std::vector<int>> weyl_orbits_of_simple_roots(const RootSystem& sys);

Vec normalized_coroot(const RootSystem& sys, const std::vector<int>& orbit);

std::vector<int> theta_of(const RootSystem& sys, const Vec& tau, double tol = 1e-9);

struct Regularity {
  bool regular = false;
  WeylElement witness;
  double inner = 0.0;       // <w.tau, v> at the minimizing w
  double normalized = 0.0;  // |inner| / |v|
};
Regularity is_tau_regular(const RootSystem& sys, const Vec& v, const Vec& tau, double margin = 1e-9);

WeylElement longest_element(const RootSystem& sys);
Vec iota(const RootSystem& sys, const Vec& tau);

// Distinct elements of W.v.
std::vector<Vec> weyl_orbit(const RootSystem& sys, const Vec& v, double tol = 1e-12);

// Unit chamber vector on the ray of the i-th fundamental coweight.
Vec fundamental_direction(const RootSystem& sys, int i);

// Theta(sigma) for the component sigma of the chamber simplex minus the walls of tau containing seed.
std::vector<int> component_roots(const RootSystem& sys, const Vec& tau, const Vec& seed,
                                 int subdivisions = 200);

// Exceptional families are documented, not computed.
struct ExceptionalRow {
  std::string name;
  std::string orbits;
};
const std::vector<ExceptionalRow>& exceptional_table();

}  // namespace ng

#pragma once

#include "ng/common.hpp"
#include "ng/rootsys.hpp"

namespace ng {

// Unit-volume scalar product on R^n, stored by its Gram matrix.
struct SymPoint {
  Mat gram;

  static SymPoint origin(int n) { return {Mat::Identity(n, n)}; }
  static SymPoint from_gram(const Mat& g);  // validates, repairs small asymmetry and det drift
  int dim() const { return static_cast<int>(gram.rows()); }
};

// Endomorphism symmetric w.r.t. base.gram with zero trace.
struct SymTangent {
  SymPoint base;
  Mat mat;

  static SymTangent make(const SymPoint& base, const Mat& m);  // validates
  int dim() const { return base.dim(); }
  SymTangent scaled(double s) const { return {base, s * mat}; }
};

void validate(const SymPoint& x);
void validate(const SymTangent& v);

SymPoint act(const Mat& g, const SymPoint& x);
// Push-forward of a tangent vector by g (lands at g.x).
SymTangent push(const Mat& g, const SymTangent& v);

double inner(const SymTangent& u, const SymTangent& v);
double norm(const SymTangent& v);
SymTangent normalized(const SymTangent& v);

SymPoint geodesic(const SymPoint& x, const SymTangent& v, double t);
// The same vector moved to geodesic(x, v, s): the transported velocity.
SymTangent transport_velocity(const SymTangent& v, double s);

// w in p_x with exp(w).x = y.
SymTangent log_map(const SymPoint& x, const SymPoint& y);
double distance(const SymPoint& x, const SymPoint& y);

Vec cartan_projection(const SymTangent& v);
Vec generalized_distance(const SymPoint& x, const SymPoint& y);

// g with g.x = q0 (upper-left Cholesky frame).
Mat to_origin(const SymPoint& x);

// Symmetric matrix representing v in an x-orthonormal frame (conjugated to q0).
Mat standard_form(const SymTangent& v);

// Cartan projection of a group element, i.e. d_a(q0, g.q0); numerically stable for large g
// when the inverse is supplied.
Vec cartan_of(const Mat& g, const Mat& ginv);
Vec cartan_of(const Mat& g);

SymPoint random_point(int n, double spread, Rng& rng);
SymTangent random_tangent(const SymPoint& x, Rng& rng);  // unit

}  // namespace ng

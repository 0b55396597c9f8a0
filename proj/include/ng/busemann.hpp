#pragma once

#include "ng/common.hpp"
#include "ng/flags.hpp"
#include "ng/symspace.hpp"

#include <vector>

namespace ng {

namespace constants {

inline double metric_scale(int n) { return 2.0 * n; }

// b_{[v],o}(x) = k_n log q_x(v, v) for q_o(v, v) = 1, from the Iwasawa conventions in use.
double projective_coefficient(int n);
// Reference coefficient sqrt((n-1)/n) for the same quantity.
double projective_coefficient_reference(int n);

}  // namespace constants

struct BusemannEvaluation {
  IdealPoint a;
  SymPoint o;
  double value;
  SymTangent gradient;
};

double busemann_value(const IdealPoint& a, const SymPoint& o, const SymPoint& x);
// b_{a,o}(h.q0) from hinv = h^-1 by a QR factorization of hinv B, which stays accurate far from q0.
double busemann_value_frame(const IdealPoint& a, const SymPoint& o, const Mat& hinv);
SymTangent busemann_gradient(const IdealPoint& a, const SymPoint& o, const SymPoint& x);
BusemannEvaluation evaluate_busemann(const IdealPoint& a, const SymPoint& o, const SymPoint& x);

// <sqrt(ad^2 v_{a,x}) w, w> for w based at x.
double busemann_hessian(const IdealPoint& a, const SymTangent& w);
// Same quantity from frame forms: s_a = standard form of v_a, s_w of w.
double hessian_from_standard(const Mat& s_a, const Mat& s_w);

// -slope of t -> b_{a,o}(geodesic(x, v, t)) fitted on [t0, t1].
double busemann_asymptotic_slope(const IdealPoint& a, const SymPoint& o, const SymTangent& v,
                                 double t0 = 10.0, double t1 = 40.0, int samples = 31);

// Ideal point [v] with weights tau_1.
IdealPoint projective_ideal_point(const Vec& v);

// Batch values b_{a_i,o}(x_i).
std::vector<double> busemann_batch(const std::vector<IdealPoint>& a, const SymPoint& o,
                                   const std::vector<SymPoint>& x, Exec exec = Exec::Parallel);

}  // namespace ng

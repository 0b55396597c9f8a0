#pragma once

#include "ng/common.hpp"
#include "ng/symspace.hpp"

#include <complex>
#include <iosfwd>
#include <memory>
#include <string>

namespace ng {

using Mat2 = Eigen::Matrix2d;
using Vec2 = Eigen::Vector2d;

// Upper half-plane model; tangent data in normal coordinates xi at a point.
namespace h2 {

using Point = std::complex<double>;
inline const Point kI{0.0, 1.0};

Point mobius(const Mat2& g, Point z);
// Upper-triangular g with g.i = z.
Mat2 frame(Point z);
// exp(xi_1 F + xi_2 G) with F = diag(1,-1)/2, G = antidiag(1,1)/2: the unit-speed flat directions at i.
Mat2 exp_element(const Vec2& xi);
Point exp_at(Point z, const Vec2& xi);
Vec2 log_at(Point z, Point w);
double distance(Point z, Point w);

}  // namespace h2

enum class EmbeddingKind { Irreducible, Reducible };

// Images of the sl2 basis f = diag(-1,1), g = antidiag(1,1), h = [[0,-1],[1,0]].
struct Sl2Embedding {
  EmbeddingKind kind;
  int n;
  Mat f, g, h;

  Mat algebra(const Mat2& x) const;  // d iota
  Mat group(const Mat2& x) const;    // iota, exact
};

Sl2Embedding irr_embedding(int n);
Sl2Embedding red_embedding(int n);
std::string to_string(EmbeddingKind k);

// Residuals of [g,h] = -2f, [h,f] = 2g, [f,g] = 2h (max-abs entries).
struct BracketResiduals {
  double gh, hf, fg;
  double f_symmetry, g_symmetry, h_antisymmetry;
};
BracketResiduals bracket_residuals(const Sl2Embedding& e);

// Value, first and second order data at a surface point, in normal coordinates of H2.
struct SurfaceJet {
  SymPoint point;
  SymTangent d1, d2;          // du(d/dxi_k)
  SymTangent ii11, ii12, ii22;  // acceleration along xi-lines; only the normal part is used
};

// Jet with an orthonormal frame; ii(v,v) = c^2 ii11 + 2cs ii12 + s^2 ii22 for v = c e1 + s e2.
struct OrthoJet {
  SymPoint point;
  SymTangent e1, e2;
  SymTangent ii11, ii12, ii22;

  SymTangent direction(double theta) const;
  SymTangent second_form(double theta) const;
};
OrthoJet orthonormalize(const SurfaceJet& j);

class Surface {
 public:
  virtual ~Surface() = default;
  virtual SymPoint point(h2::Point z) const = 0;
  virtual SurfaceJet jet(h2::Point z) const;  // finite differences by default
  // h^-1 for some h with u(z) = h.q0; exact overrides keep far points well conditioned.
  virtual Mat frame_inverse(h2::Point z) const;
  // h_w^-1 h_z for the frames above; exact overrides avoid forming the far frames.
  virtual Mat relative_frame_inverse(h2::Point z, h2::Point w) const;
  virtual bool totally_geodesic() const { return false; }
  virtual const Sl2Embedding* embedding() const { return nullptr; }
  int dim() const { return point(h2::kI).dim(); }
};

// u(z) = iota(g_z).q0.
class EquivariantSurface final : public Surface {
 public:
  explicit EquivariantSurface(Sl2Embedding e) : emb_(std::move(e)) {}
  SymPoint point(h2::Point z) const override;
  SurfaceJet jet(h2::Point z) const override;
  Mat frame_inverse(h2::Point z) const override;
  Mat relative_frame_inverse(h2::Point z, h2::Point w) const override;
  bool totally_geodesic() const override { return true; }
  const Sl2Embedding* embedding() const override { return &emb_; }

 private:
  Sl2Embedding emb_;
};

// u(z) = exp_p(xi_1 d1 + xi_2 d2 + ii(xi, xi)/2), xi = log_i(z): a surface with prescribed 2-jet at i.
class JetSurface final : public Surface {
 public:
  explicit JetSurface(SurfaceJet j);
  SymPoint point(h2::Point z) const override;
  Mat frame_inverse(h2::Point z) const override;
  const SurfaceJet& data() const { return jet_; }

 private:
  Mat exponent(h2::Point z) const;
  SurfaceJet jet_;
};

// Jet of the totally geodesic surface at i with second fundamental form scaled noise added.
SurfaceJet perturbed_jet(const Surface& base, double scale, Rng& rng);

// CSV: header "field,row,col,value", fields point,d1,d2,ii11,ii12,ii22.
void write_jet_csv(std::ostream& out, const SurfaceJet& j);
SurfaceJet read_jet_csv(std::istream& in);

}  // namespace ng

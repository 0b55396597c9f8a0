#pragma once

#include "ng/common.hpp"
#include "ng/flags.hpp"
#include "ng/symspace.hpp"

#include <complex>
#include <optional>
#include <string>
#include <vector>

namespace ng {

// d orthonormal tangent vectors at a common base point.
struct Pencil {
  SymPoint base;
  std::vector<SymTangent> gens;

  int dim() const { return base.dim(); }
  int rank() const { return static_cast<int>(gens.size()); }
};

// Orthonormalizes; linearly dependent generators are an error.
Pencil make_pencil(const SymPoint& base, const std::vector<Mat>& gens);

struct QuadricPencil {
  std::vector<Mat> quads;  // symmetric n x n

  int dim() const { return quads.empty() ? 0 : static_cast<int>(quads.front().rows()); }
};

void validate(const QuadricPencil& p);

// "P_red" or "P_irr" in SL(3,R).
QuadricPencil preset_pencil(const std::string& name);
// Quadrics at q0 as tangent vectors (trace-free required).
Pencil tangent_pencil(const QuadricPencil& q);

struct BaseComponent {
  int id = 0;
  long size = 0;
  double mean_residual = 0.0;
  int local_dim = 0;
  std::string kind;  // "point", "line" or "cloud"
};

// Points of P(R^n) (unit representatives, first nonzero coordinate positive).
struct ProjectiveBase {
  std::vector<Vec> points;
  std::vector<int> labels;
  std::vector<BaseComponent> components;
  long dropped = 0;
  std::string method;  // "exact" or "sampled"
};

struct BaseOptions {
  int samples = 2000;
  int line_samples = 400;  // cloud resolution of exact line components
  double radius = 0.05;
  std::uint64_t seed = kDefaultSeed;
  Exec exec = Exec::Parallel;
};

// Exact for n = 3, d = 2; sampling and Gauss-Newton otherwise.
ProjectiveBase base_projective(const QuadricPencil& p, const BaseOptions& opt = {});
ProjectiveBase base_projective_exact(const QuadricPencil& p, const BaseOptions& opt = {});
ProjectiveBase base_projective_sampled(const QuadricPencil& p, const BaseOptions& opt = {});

// Full flags a with <v_{a,x}, w> = 0 for all w in P.
struct FlagBase {
  std::vector<FlagPoint> flags;
  std::vector<int> labels;
  std::vector<BaseComponent> components;
  long dropped = 0;
  std::string warning;
};
FlagBase base_flags(const Pencil& p, const Vec& tau, const BaseOptions& opt = {});
// n = 3, d = 2, tau = tau_Delta.
FlagBase base_flag_sl3(const Pencil& p, const BaseOptions& opt = {});

// Nearest base point reached by Gauss-Newton from a (same weights); empty if it does not converge.
std::optional<IdealPoint> project_to_base(const Pencil& p, const IdealPoint& a);

// max_i |<v_{a,x}, gen_i>|.
double base_residual(const Pencil& p, const IdealPoint& a);
bool is_singular_base_point(const Pencil& p, const IdealPoint& a);
int submersion_rank(const Pencil& p, const IdealPoint& a);

enum class Verdict { Regular, NotRegular, Unknown };
std::string to_string(Verdict v);

struct RegularityCertificate {
  Verdict verdict = Verdict::Unknown;
  double margin = 0.0;                 // certified lower bound on min_W |<w tau, Cartan v>| (Regular)
  double arc_lo = 0.0, arc_hi = 0.0;   // offending arc (NotRegular, Unknown)
};
// Sweeps the unit circle of a 2-pencil; variation between grid points is bounded by arclength.
RegularityCertificate certify_tau_regular(const Pencil& p, const Vec& tau, int grid = 2000);

struct SegreEntry {
  std::complex<double> value;
  int multiplicity = 0;
  std::vector<int> partition;  // descending block sizes
};
struct SegreSymbol {
  std::vector<SegreEntry> entries;
  bool real_members_nondegenerate = false;
};
SegreSymbol segre_symbol(const CMat& q1, const CMat& q2);
SegreSymbol segre_symbol(const Mat& q1, const Mat& q2);

// The Hermitian pencil of the 2k-dimensional irreducible representation and its block data.
struct FuchsianPencil {
  CMat q1, q2;
  Mat t;         // k x k upper triangular all-ones
  CMat reduced;  // diag(iT, -iT)
  std::vector<double> lambda;
};
FuchsianPencil fuchsian_pencil(int k);

// Minimal p >= 1 with (m)^p = 0, or 0 if none up to m.rows().
int nilpotency_order(const Mat& m, double tol = 1e-12);

// Embeddings by orthogonal projectors, scaled so that Euclidean distance is the chordal gap.
Vec projector_embedding(const Vec& v);
Vec flag_embedding(const FlagPoint& f);

// Union-find over the graph of embedded points joined when closer than radius.
// Labels are numbered by first appearance.
std::vector<int> cluster_points(const std::vector<Vec>& embedded, double radius);

}  // namespace ng

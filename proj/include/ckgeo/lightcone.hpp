#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ckgeo/bilinear.hpp"
#include "ckgeo/chart.hpp"

namespace ckgeo {

// Pair of light-like vectors with <v,w> = 1 plus a linear isometry C of
// R^m onto {v,w}^perp, the data of the umbilic embedding of flat space
// into the light cone of the Lorentzian ambient diag(1,...,1,-1).
struct LightConeTriple {
  int m = 0;
  VectorXd v, w;
  MatrixXd C;  // (m+2) x m

  static LightConeTriple canonical(int m);
  // Image of this triple under a Lorentz map of the ambient.
  LightConeTriple transformed(const MatrixXd& lorentz) const;

  GramSpace ambient() const { return GramSpace::minkowski(m + 2); }
  // Max violation of the defining pairings (null v, null w, <v,w>=1,
  // C columns orthonormal and perpendicular to v, w).
  double invariant_defect() const;
};

// Seeded Lorentz map of diag(1,...,1,-1), exp of a G-antisymmetric matrix.
MatrixXd random_lorentz(int dim, std::uint64_t seed);

// The umbilic patch x -> v + Cx - (1/2)||x||^2 w over the given box.
ChartPatch psi_patch(const LightConeTriple& triple, const VectorXd& lo,
                     const VectorXd& hi);

// A conformal patch together with its isometric light-cone representative
// F = (1/lambda) Psi(f): F induces the reference metric lambda^-2 <,>_f.
struct LightConeRep {
  ChartPatch F;
  ChartPatch source;
  Expr lambda;
  LightConeTriple triple;
};

LightConeRep make_rep(const ChartPatch& f, const Expr& lambda,
                      const LightConeTriple& triple);

// Coordinates of an ambient vector in the normal frame of an SFFData;
// the vector is assumed normal (tangential components are projected away).
VectorXd normal_coordinates(const SFFData& sff, const VectorXd& ambient_vec);

// max_ij |<alpha(e_i,e_j), F> + <e_i,e_j>| / max(1, ||g||): the radial
// second-fundamental-form identity of the light cone.
double sff_radial_check(const SFFData& sff_of_F);
double sff_radial_check(const LightConeRep& rep, const VectorXd& x);

// ||A_F + I|| defect: the radial shape operator of a cone submanifold.
double radial_shape_identity_defect(const SFFData& sff_of_F);

// The second fundamental form as a bilinear form into the normal
// GramSpace, coefficients in the normal frame.
BilinearForm second_fundamental_form(const SFFData& sff);

// One point of the full pipeline: second-order data of F, its second
// fundamental form as a bilinear form into the (Lorentzian) normal space,
// the position vector in normal-frame coordinates, and the structure
// decomposition of the J-coupled form with F as the zeta candidate.
struct PointDecomp {
  SFFData sff;
  GramSpace normal_space;
  BilinearForm alpha;   // coefficients in the normal frame
  VectorXd f_coords;    // F in normal-frame coordinates
  StructureReport report;
};

PointDecomp decompose_at(const LightConeRep& rep, const ComplexStructure& j,
                         const VectorXd& x, double rank_tol = kRankTol,
                         double flat_tol = 1e-6);

// Result of scanning sample points for a common light-like normal field.
struct DeltaScan {
  VectorXd delta;        // ambient coordinates of the mean field
  double variance = 0.0; // max deviation of per-point delta from the mean
  double a_delta_defect = 0.0;  // max ||A_delta|| over samples
};

// Per point, delta is the light-like normal direction transversal to F
// normalized by <F, delta> = 1 (from the structure decomposition when the
// source has positive codimension, directly from the two-dimensional
// normal space otherwise).  Returns nothing when the field is not constant
// within var_tol.
std::optional<DeltaScan> delta_detect(const LightConeRep& rep,
                                      const ComplexStructure& j,
                                      const std::vector<VectorXd>& samples,
                                      double var_tol = 1e-6,
                                      double rank_tol = kRankTol,
                                      double flat_tol = 1e-6);

struct CongruenceReport {
  double defect = 0.0;         // max position defect over samples
  double gram_defect = 0.0;    // Lorentz property of the matched map
  double metric_defect = 0.0;  // intrinsic metric agreement at the base
};

// Matches the frames of two representatives at base_point by least squares
// on second fundamental forms and position, then measures how far the
// resulting linear map is from carrying one representative to the other.
CongruenceReport congruence_defect(const LightConeRep& rep_f,
                                   const LightConeRep& rep_g,
                                   const VectorXd& base_point,
                                   const std::vector<VectorXd>& samples,
                                   double tol = kRankTol);

// Defect of the Euclidean Gauss equation for alpha_L, the component of
// alpha^F complementary to the -<X,Y> delta term, against the intrinsic
// curvature; requires <F, delta> = 1.
double gauss_check_alpha_L(const LightConeRep& rep, const VectorXd& delta,
                           const VectorXd& x);

}  // namespace ckgeo

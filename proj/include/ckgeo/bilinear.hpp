#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "ckgeo/gram.hpp"

namespace ckgeo {

// Constant complex structure J on R^n, J^2 = -I.
class ComplexStructure {
 public:
  explicit ComplexStructure(MatrixXd j, double tol = 1e-12);

  // Standard block structure pairing coordinates (2k, 2k+1):
  // J e_{2k} = e_{2k+1}, J e_{2k+1} = -e_{2k}.
  static ComplexStructure standard(int dim);

  int dim() const { return static_cast<int>(j_.rows()); }
  const MatrixXd& matrix() const { return j_; }

 private:
  MatrixXd j_;
};

// W-valued bilinear form on V^n given by its coefficients in the coordinate
// basis of V and the basis of the target GramSpace.  Symmetry is not assumed.
// Column i*n+j of vals() is beta(e_i, e_j).
class BilinearForm {
 public:
  BilinearForm(int domain_dim, GramSpace target);
  BilinearForm(int domain_dim, GramSpace target, MatrixXd vals);

  int domain_dim() const { return n_; }
  const GramSpace& target() const { return target_; }
  int target_dim() const { return target_.dim(); }

  const MatrixXd& vals() const { return vals_; }
  VectorXd value(int i, int j) const { return vals_.col(i * n_ + j); }
  void set_value(int i, int j, const VectorXd& v) { vals_.col(i * n_ + j) = v; }

  // beta(x, y) for arbitrary vectors.
  VectorXd eval(const VectorXd& x, const VectorXd& y) const;

  // max_ij ||beta(e_i,e_j)||_2, the normalization scale used by the defect
  // measures.
  double scale() const;

  double symmetry_defect() const;
  BilinearForm symmetrized() const;

  // Gram matrix of all pairwise target pairings, P[(i,j),(k,l)].
  MatrixXd pairing_matrix() const;

 private:
  int n_;
  GramSpace target_;
  MatrixXd vals_;  // w x n^2
};

// Max |<b(X,Y),b(Z,T)> - <b(X,T),b(Z,Y)>| over basis 4-tuples, normalized
// by max(1, ||b||^2).  Zero means flat.
double flatness_defect(const BilinearForm& beta);

// Same, for |<b(X,Y),b(Z,T)>|.  Zero means null.
double nullity_defect(const BilinearForm& beta);

struct SpanKernel {
  Subspace span;     // S(beta), subspace of the target
  MatrixXd kernel;   // basis of N(beta) = {Y : beta(.,Y) = 0} in V
};
SpanKernel span_and_kernel(const BilinearForm& beta, double tol = kRankTol);

// beta(X,Y) = (alpha(X,Y), alpha(X,JY)) into U+U with the split inner
// product diag(G_U, -G_U).  alpha must be symmetric within tolerance.
BilinearForm j_couple(const BilinearForm& alpha, const ComplexStructure& j,
                      double sym_tol = 1e-6);

struct CostumReport {
  bool applicable = false;  // requires 2p < n and 1 <= p <= 5
  int n = 0;
  int p = 0;
  int dim_kernel = 0;
  int bound = 0;            // n - 2p
  bool span_nondegenerate = false;
  bool satisfied = false;   // dim N(beta) >= n - 2p, when the span is
                            // nondegenerate
};
CostumReport costum_verify(const BilinearForm& alpha,
                           const ComplexStructure& j, double flat_tol = 1e-6,
                           double rank_tol = kRankTol);

enum class CaseTag { nondeg_L, deg_L };
const char* case_tag_name(CaseTag tag);

struct StructureReport {
  int s = 0;
  CaseTag case_tag = CaseTag::nondeg_L;
  // Bases of subspaces of U (columns).  U0/U1/U2 are only filled for the
  // degenerate case; L is filled for both.
  MatrixXd L_basis;
  MatrixXd U0_basis;
  MatrixXd U1_basis;
  MatrixXd U2_basis;
  VectorXd delta;  // deg_L only
  VectorXd zeta;   // deg_L only
  double alpha1_symmetry_defect = 0.0;
  double delta_orthogonality_defect = 0.0;
  int dim_Delta = 0;  // dim N(alpha2) ∩ J N(alpha2)
  std::map<std::string, double> residuals;
  // Coefficient matrices of alpha restricted to U1 in its reported
  // orthonormal basis: shape-operator data for the s=4 analysis.
  std::vector<MatrixXd> alpha_U1_coeffs;
};

// Pointwise structure decomposition.  When `zeta_candidate` is supplied
// (the position vector F in the light-cone pipeline) it fixes the null
// partner and the delta scale via <delta, zeta> = 1; otherwise delta is
// normalized to unit Euclidean length with positive leading coordinate and
// zeta comes from null_partner.
StructureReport structure_decompose(
    const BilinearForm& alpha, const ComplexStructure& j,
    double rank_tol = kRankTol, double flat_tol = 1e-6,
    const VectorXd* zeta_candidate = nullptr);

struct SynthSpec {
  int n = 0;
  int p = 0;
  int s = 0;
  CaseTag case_tag = CaseTag::deg_L;
  int kernel_dim = 0;  // planted dim of N(alpha2) ∩ J N(alpha2)
  std::uint64_t seed = 0;
};

struct SynthInstance {
  BilinearForm alpha;
  ComplexStructure j;
  StructureReport planted;
};

// Deterministic generator inverting the structure decomposition: plants a
// flat J-coupled instance with prescribed case, s and kernel dimension.
SynthInstance synth_flat(const SynthSpec& spec);

}  // namespace ckgeo

#pragma once

#include <Eigen/Dense>

#include "ckgeo/errors.hpp"

namespace ckgeo {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// One knob governs every rank/degeneracy decision downstream.
inline constexpr double kRankTol = 1e-8;

struct Signature {
  int n_plus = 0;
  int n_minus = 0;
  int n_zero = 0;
  bool operator==(const Signature&) const = default;
};

// Finite-dimensional real inner-product space of arbitrary signature,
// described by its Gram matrix.  Never orthonormalized: indefinite spaces
// are handled exclusively through restricted Gram matrices.
class GramSpace {
 public:
  explicit GramSpace(MatrixXd gram, double tol = kRankTol);

  static GramSpace euclidean(int dim);
  // diag(1,...,1,-1): the Lorentzian ambient with the time-like axis last.
  static GramSpace minkowski(int dim);

  int dim() const { return static_cast<int>(gram_.rows()); }
  const MatrixXd& gram() const { return gram_; }
  const Signature& signature() const { return sig_; }

  double inner(const VectorXd& a, const VectorXd& b) const {
    return a.dot(gram_ * b);
  }

  bool is_positive_definite() const {
    return sig_.n_plus == dim();
  }
  bool is_lorentzian() const {
    return sig_.n_minus == 1 && sig_.n_zero == 0;
  }

 private:
  MatrixXd gram_;
  Signature sig_;
};

// Eigenvalue sign counts of a symmetric matrix under a relative threshold.
Signature signature_of(const MatrixXd& gram, double tol = kRankTol);

// Subspace of a GramSpace, spanned by the columns of `basis`.
// Columns must be linearly independent under the rank tolerance.
class Subspace {
 public:
  Subspace(GramSpace ambient, MatrixXd basis, double tol = kRankTol);

  static Subspace zero(const GramSpace& ambient);
  static Subspace full(const GramSpace& ambient);
  static Subspace span_of(const GramSpace& ambient, const MatrixXd& vectors,
                          double tol = kRankTol);

  const GramSpace& ambient() const { return ambient_; }
  const MatrixXd& basis() const { return basis_; }
  int dim() const { return static_cast<int>(basis_.cols()); }
  int ambient_dim() const { return ambient_.dim(); }

  // Gram matrix of the inner product restricted to this subspace.
  MatrixXd restricted_gram() const {
    return basis_.transpose() * ambient_.gram() * basis_;
  }

  bool contains(const VectorXd& x, double tol = kRankTol) const;

 private:
  GramSpace ambient_;
  MatrixXd basis_;
};

// Basic rank machinery shared by all modules.
int rank_of(const MatrixXd& m, double tol = kRankTol);
// Orthonormal (coefficient-space) basis of the column span.
MatrixXd column_space(const MatrixXd& m, double tol = kRankTol);
// Orthonormal basis of the right kernel.
MatrixXd kernel_of(const MatrixXd& m, double tol = kRankTol);
// Basis of the intersection of two column spans in the same ambient R^d.
MatrixXd intersect_spans(const MatrixXd& a, const MatrixXd& b,
                         double tol = kRankTol);

// S ∩ S^⊥, computed from the null space of the restricted Gram matrix.
// Empty basis means S is nondegenerate; the zero subspace is nondegenerate
// by convention.
Subspace radical(const Subspace& s, double tol = kRankTol);

// {x : <x, b> = 0 for every basis vector b of S}.
Subspace orthogonal_complement(const Subspace& s, double tol = kRankTol);

// Light-like partner: zeta with <zeta,zeta> ~ 0, <delta,zeta> = 1 exactly
// after scaling, zeta ⟂ avoid.  delta must be null and orthogonal to avoid.
VectorXd null_partner(const VectorXd& delta, const GramSpace& u,
                      const Subspace& avoid, double tol = kRankTol);

// Orthogonal projection onto a nondegenerate subspace.  Throws
// degenerate_subspace when radical(S) != {0}: the caller must switch to the
// dual-pairing route through a null partner instead.
VectorXd project_onto(const VectorXd& x, const Subspace& s,
                      double tol = kRankTol);

}  // namespace ckgeo

#include "ckgeo/gram.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace ckgeo {

const char* errc_name(errc code) {
  switch (code) {
    case errc::nonsymmetric: return "NONSYMMETRIC";
    case errc::no_partner: return "NO_PARTNER";
    case errc::degenerate_subspace: return "DEGENERATE_SUBSPACE";
    case errc::out_of_domain: return "OUT_OF_DOMAIN";
    case errc::tangent_degenerate: return "TANGENT_DEGENERATE";
    case errc::normal_degenerate: return "NORMAL_DEGENERATE";
    case errc::not_conformal: return "NOT_CONFORMAL";
    case errc::nonsymmetric_alpha: return "NONSYMMETRIC_ALPHA";
    case errc::not_flat: return "NOT_FLAT";
    case errc::nullity_too_large: return "NULLITY_TOO_LARGE";
    case errc::bad_signature: return "BAD_SIGNATURE";
    case errc::odd_s: return "ODD_S";
    case errc::inconsistent_spec: return "INCONSISTENT_SPEC";
    case errc::metric_mismatch: return "METRIC_MISMATCH";
    case errc::frame_degenerate: return "FRAME_DEGENERATE";
    case errc::no_delta: return "NO_DELTA";
    case errc::unclassified_point: return "UNCLASSIFIED_POINT";
    case errc::bad_codim: return "BAD_CODIM";
    case errc::bad_params: return "BAD_PARAMS";
    case errc::domain_violation: return "DOMAIN_VIOLATION";
    case errc::unknown_suite: return "UNKNOWN_SUITE";
    case errc::unknown_example: return "UNKNOWN_EXAMPLE";
    case errc::generation_failed: return "GENERATION_FAILED";
  }
  return "UNKNOWN";
}

Signature signature_of(const MatrixXd& gram, double tol) {
  const double scale = gram.cwiseAbs().maxCoeff();
  const double defect = (gram - gram.transpose()).cwiseAbs().maxCoeff();
  if (defect > tol * std::max(1.0, scale))
    throw error(errc::nonsymmetric, "Gram matrix is not symmetric");
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(0.5 * (gram + gram.transpose()),
                                             Eigen::EigenvaluesOnly);
  Signature sig;
  const double band = tol * std::max(scale, 1e-300);
  for (int i = 0; i < gram.rows(); ++i) {
    const double ev = es.eigenvalues()[i];
    if (ev > band)
      ++sig.n_plus;
    else if (ev < -band)
      ++sig.n_minus;
    else
      ++sig.n_zero;
  }
  return sig;
}

GramSpace::GramSpace(MatrixXd gram, double tol) : gram_(std::move(gram)) {
  if (gram_.rows() == 0 || gram_.rows() != gram_.cols())
    throw error(errc::bad_params, "Gram matrix must be square and nonempty");
  sig_ = signature_of(gram_, tol);
  gram_ = 0.5 * (gram_ + gram_.transpose().eval());
}

GramSpace GramSpace::euclidean(int dim) {
  return GramSpace(MatrixXd::Identity(dim, dim));
}

GramSpace GramSpace::minkowski(int dim) {
  MatrixXd g = MatrixXd::Identity(dim, dim);
  g(dim - 1, dim - 1) = -1.0;
  return GramSpace(std::move(g));
}

Subspace::Subspace(GramSpace ambient, MatrixXd basis, double tol)
    : ambient_(std::move(ambient)), basis_(std::move(basis)) {
  if (basis_.size() == 0) basis_.resize(ambient_.dim(), 0);
  if (basis_.rows() != ambient_.dim())
    throw error(errc::bad_params, "basis vector length != ambient dimension");
  if (basis_.cols() > 0 && rank_of(basis_, tol) != basis_.cols())
    throw error(errc::bad_params, "basis vectors are linearly dependent");
}

Subspace Subspace::zero(const GramSpace& ambient) {
  return Subspace(ambient, MatrixXd(ambient.dim(), 0));
}

Subspace Subspace::full(const GramSpace& ambient) {
  return Subspace(ambient, MatrixXd::Identity(ambient.dim(), ambient.dim()));
}

Subspace Subspace::span_of(const GramSpace& ambient, const MatrixXd& vectors,
                           double tol) {
  return Subspace(ambient, column_space(vectors, tol), tol);
}

bool Subspace::contains(const VectorXd& x, double tol) const {
  if (dim() == 0) return x.norm() <= tol * std::max(1.0, x.norm());
  const VectorXd c = basis_.colPivHouseholderQr().solve(x);
  return (basis_ * c - x).norm() <= tol * std::max(1.0, x.norm());
}

int rank_of(const MatrixXd& m, double tol) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<MatrixXd> svd(m);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv[0] == 0.0) return 0;
  int r = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv[i] > tol * sv[0]) ++r;
  return r;
}

MatrixXd column_space(const MatrixXd& m, double tol) {
  if (m.size() == 0 || m.cols() == 0) return MatrixXd(m.rows(), 0);
  Eigen::JacobiSVD<MatrixXd> svd(m, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  int r = 0;
  if (sv.size() > 0 && sv[0] > 0.0)
    for (int i = 0; i < sv.size(); ++i)
      if (sv[i] > tol * sv[0]) ++r;
  return svd.matrixU().leftCols(r);
}

MatrixXd kernel_of(const MatrixXd& m, double tol) {
  if (m.size() == 0 || m.rows() == 0)
    return MatrixXd::Identity(m.cols(), m.cols());
  Eigen::JacobiSVD<MatrixXd> svd(m, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  int r = 0;
  if (sv.size() > 0 && sv[0] > 0.0)
    for (int i = 0; i < sv.size(); ++i)
      if (sv[i] > tol * sv[0]) ++r;
  return svd.matrixV().rightCols(m.cols() - r);
}

MatrixXd intersect_spans(const MatrixXd& a, const MatrixXd& b, double tol) {
  if (a.cols() == 0 || b.cols() == 0) return MatrixXd(a.rows(), 0);
  // ker [A | -B] gives coefficient pairs (x, y) with A x = B y.
  MatrixXd ab(a.rows(), a.cols() + b.cols());
  ab << a, -b;
  const MatrixXd k = kernel_of(ab, tol);
  if (k.cols() == 0) return MatrixXd(a.rows(), 0);
  return column_space(a * k.topRows(a.cols()), tol);
}

Subspace radical(const Subspace& s, double tol) {
  if (s.dim() == 0) return Subspace::zero(s.ambient());
  const MatrixXd rg = s.restricted_gram();
  // Null space relative to the ambient Gram scale, not the (possibly tiny)
  // restricted one: a nearly-null basis vector must land in the radical.
  const double scale =
      std::max(rg.cwiseAbs().maxCoeff(),
               s.ambient().gram().cwiseAbs().maxCoeff() *
                   s.basis().colwise().norm().maxCoeff());
  Eigen::JacobiSVD<MatrixXd> svd(rg, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  int r = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv[i] > tol * std::max(scale, 1e-300)) ++r;
  const MatrixXd null_coeffs = svd.matrixV().rightCols(s.dim() - r);
  return Subspace(s.ambient(), s.basis() * null_coeffs, tol);
}

Subspace orthogonal_complement(const Subspace& s, double tol) {
  const MatrixXd pairings = s.basis().transpose() * s.ambient().gram();
  return Subspace(s.ambient(), kernel_of(pairings, tol), tol);
}

VectorXd null_partner(const VectorXd& delta, const GramSpace& u,
                      const Subspace& avoid, double tol) {
  const double dn = delta.norm();
  if (dn == 0.0) throw error(errc::no_partner, "delta is zero");
  if (std::abs(u.inner(delta, delta)) > tol * std::max(1.0, dn * dn))
    throw error(errc::no_partner, "delta is not light-like");
  const Subspace candidates = orthogonal_complement(avoid, tol);
  // Need y in candidates with <delta, y> != 0.
  const VectorXd p = candidates.basis().transpose() * (u.gram() * delta);
  const double pn = p.norm();
  if (pn <= tol * std::max(1.0, dn))
    throw error(errc::no_partner,
                "no candidate pairing with delta in the complement of avoid");
  VectorXd y = candidates.basis() * (p / p.squaredNorm());  // <delta,y> = 1
  // delta itself lies in the candidate space (it is orthogonal to avoid),
  // so a delta-shift stays admissible and kills the self-pairing.
  y -= 0.5 * u.inner(y, y) * delta;
  y /= u.inner(delta, y);
  return y;
}

VectorXd project_onto(const VectorXd& x, const Subspace& s, double tol) {
  if (s.dim() == 0) return VectorXd::Zero(s.ambient_dim());
  if (radical(s, tol).dim() != 0)
    throw error(errc::degenerate_subspace,
                "projection onto a degenerate subspace is not defined");
  // The restricted Gram is nondegenerate but may be indefinite, so a full
  // LU solve rather than LDLT.
  const MatrixXd rg = s.restricted_gram();
  const VectorXd rhs = s.basis().transpose() * (s.ambient().gram() * x);
  return s.basis() * rg.fullPivLu().solve(rhs);
}

}  // namespace ckgeo

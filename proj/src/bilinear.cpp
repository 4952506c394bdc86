#include "ckgeo/bilinear.hpp"

#include <Eigen/Eigenvalues>
#include <complex>
#include <random>
#include <unsupported/Eigen/MatrixFunctions>

namespace ckgeo {

const char* case_tag_name(CaseTag tag) {
  return tag == CaseTag::nondeg_L ? "NONDEG_L" : "DEG_L";
}

ComplexStructure::ComplexStructure(MatrixXd j, double tol) : j_(std::move(j)) {
  if (j_.rows() != j_.cols() || j_.rows() % 2 != 0)
    throw error(errc::bad_params, "complex structure needs even square matrix");
  const int n = static_cast<int>(j_.rows());
  const double defect =
      (j_ * j_ + MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff();
  if (defect > tol * std::max(1.0, j_.cwiseAbs().maxCoeff()))
    throw error(errc::bad_params, "J^2 + I != 0");
}

ComplexStructure ComplexStructure::standard(int dim) {
  MatrixXd j = MatrixXd::Zero(dim, dim);
  for (int k = 0; k + 1 < dim; k += 2) {
    j(k + 1, k) = 1.0;
    j(k, k + 1) = -1.0;
  }
  return ComplexStructure(std::move(j));
}

BilinearForm::BilinearForm(int domain_dim, GramSpace target)
    : n_(domain_dim),
      target_(std::move(target)),
      vals_(MatrixXd::Zero(target_.dim(), domain_dim * domain_dim)) {}

BilinearForm::BilinearForm(int domain_dim, GramSpace target, MatrixXd vals)
    : n_(domain_dim), target_(std::move(target)), vals_(std::move(vals)) {
  if (vals_.rows() != target_.dim() || vals_.cols() != n_ * n_)
    throw error(errc::bad_params, "bilinear coefficient shape mismatch");
  if (!vals_.allFinite())
    throw error(errc::bad_params, "non-finite bilinear coefficients");
}

VectorXd BilinearForm::eval(const VectorXd& x, const VectorXd& y) const {
  VectorXd out = VectorXd::Zero(target_.dim());
  for (int i = 0; i < n_; ++i) {
    if (x[i] == 0.0) continue;
    for (int j = 0; j < n_; ++j)
      if (y[j] != 0.0) out += x[i] * y[j] * vals_.col(i * n_ + j);
  }
  return out;
}

double BilinearForm::scale() const {
  return vals_.cols() == 0 ? 0.0 : vals_.colwise().norm().maxCoeff();
}

double BilinearForm::symmetry_defect() const {
  double d = 0.0;
  for (int i = 0; i < n_; ++i)
    for (int j = i + 1; j < n_; ++j)
      d = std::max(d,
                   (vals_.col(i * n_ + j) - vals_.col(j * n_ + i))
                       .cwiseAbs()
                       .maxCoeff());
  return d / std::max(1.0, scale());
}

BilinearForm BilinearForm::symmetrized() const {
  MatrixXd v(vals_.rows(), vals_.cols());
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j)
      v.col(i * n_ + j) =
          0.5 * (vals_.col(i * n_ + j) + vals_.col(j * n_ + i));
  return BilinearForm(n_, target_, std::move(v));
}

MatrixXd BilinearForm::pairing_matrix() const {
  return vals_.transpose() * target_.gram() * vals_;
}

double flatness_defect(const BilinearForm& beta) {
  const int n = beta.domain_dim();
  const MatrixXd p = beta.pairing_matrix();
  double defect = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
          defect = std::max(
              defect, std::abs(p(i * n + j, k * n + l) - p(i * n + l, k * n + j)));
  const double s = beta.scale();
  return defect / std::max(1.0, s * s);
}

double nullity_defect(const BilinearForm& beta) {
  const MatrixXd p = beta.pairing_matrix();
  const double defect = p.size() == 0 ? 0.0 : p.cwiseAbs().maxCoeff();
  const double s = beta.scale();
  return defect / std::max(1.0, s * s);
}

SpanKernel span_and_kernel(const BilinearForm& beta, double tol) {
  const int n = beta.domain_dim();
  const int w = beta.target_dim();
  // Right-kernel matrix: stacking beta(e_i, .) over i.
  MatrixXd k(n * w, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      k.block(i * w, j, w, 1) = beta.value(i, j);
  return SpanKernel{Subspace::span_of(beta.target(), beta.vals(), tol),
                    kernel_of(k, tol)};
}

BilinearForm j_couple(const BilinearForm& alpha, const ComplexStructure& j,
                      double sym_tol) {
  if (alpha.domain_dim() != j.dim())
    throw error(errc::bad_params, "J dimension mismatch");
  if (alpha.symmetry_defect() > sym_tol)
    throw error(errc::nonsymmetric_alpha,
                "alpha asymmetry exceeds tolerance");
  const BilinearForm a = alpha.symmetrized();
  const int n = a.domain_dim();
  const int p = a.target_dim();
  MatrixXd g = MatrixXd::Zero(2 * p, 2 * p);
  g.topLeftCorner(p, p) = a.target().gram();
  g.bottomRightCorner(p, p) = -a.target().gram();
  MatrixXd vals = MatrixXd::Zero(2 * p, n * n);
  const MatrixXd& jm = j.matrix();
  for (int i = 0; i < n; ++i)
    for (int jj = 0; jj < n; ++jj) {
      vals.col(i * n + jj).head(p) = a.value(i, jj);
      VectorXd rot = VectorXd::Zero(p);
      for (int k = 0; k < n; ++k)
        if (jm(k, jj) != 0.0) rot += jm(k, jj) * a.value(i, k);
      vals.col(i * n + jj).tail(p) = rot;
    }
  return BilinearForm(n, GramSpace(std::move(g)), std::move(vals));
}

CostumReport costum_verify(const BilinearForm& alpha,
                           const ComplexStructure& j, double flat_tol,
                           double rank_tol) {
  CostumReport rep;
  rep.n = alpha.domain_dim();
  rep.p = alpha.target_dim();
  rep.bound = rep.n - 2 * rep.p;
  rep.applicable = (2 * rep.p < rep.n) && rep.p >= 1 && rep.p <= 5;
  const BilinearForm beta = j_couple(alpha, j);
  const double fd = flatness_defect(beta);
  if (fd > flat_tol)
    throw error(errc::not_flat, "coupled form is not flat: defect " +
                                    std::to_string(fd));
  const SpanKernel sk = span_and_kernel(beta, rank_tol);
  rep.dim_kernel = static_cast<int>(sk.kernel.cols());
  rep.span_nondegenerate = radical(sk.span, rank_tol).dim() == 0;
  rep.satisfied =
      rep.applicable && rep.span_nondegenerate && rep.dim_kernel >= rep.bound;
  return rep;
}

namespace {

// alpha restricted to a subspace of the target with G-orthonormal,
// positive definite basis (columns of b): coefficients <alpha_ij, b_k>.
BilinearForm project_component(const BilinearForm& alpha, const MatrixXd& b) {
  const int n = alpha.domain_dim();
  const int q = static_cast<int>(b.cols());
  MatrixXd coeffs = b.transpose() * alpha.target().gram() * alpha.vals();
  MatrixXd vals = b * coeffs;  // back in ambient U coordinates
  (void)q;
  return BilinearForm(n, alpha.target(), std::move(vals));
}

// Exchange-symmetry defect of a form: max |a(e_i, J e_j) - a(J e_i, e_j)|.
double exchange_defect(const BilinearForm& a, const MatrixXd& jm,
                       double norm_scale) {
  const int n = a.domain_dim();
  double d = 0.0;
  for (int c = 0; c < a.target_dim(); ++c) {
    MatrixXd m(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m(i, j) = a.vals()(c, i * n + j);
    d = std::max(d, (m * jm - jm.transpose() * m).cwiseAbs().maxCoeff());
  }
  return d / std::max(1.0, norm_scale);
}

// dim N(a) ∩ J N(a).
int j_invariant_kernel_dim(const BilinearForm& a, const MatrixXd& jm,
                           double tol) {
  const SpanKernel sk = span_and_kernel(a, tol);
  if (sk.kernel.cols() == 0) return 0;
  return static_cast<int>(
      intersect_spans(sk.kernel, jm * sk.kernel, tol).cols());
}

// G-orthonormalize the columns of b; requires a positive definite
// restricted Gram (eigenvalue scaling, no Gram-Schmidt).
MatrixXd orthonormalize_spacelike(const MatrixXd& b, const MatrixXd& gram) {
  if (b.cols() == 0) return b;
  const MatrixXd rg = b.transpose() * gram * b;
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(rg);
  if (es.eigenvalues().minCoeff() <= 0.0)
    throw error(errc::bad_signature,
                "expected a positive definite restricted Gram");
  return b * es.eigenvectors() *
         es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal();
}

}  // namespace

StructureReport structure_decompose(const BilinearForm& alpha,
                                    const ComplexStructure& j, double rank_tol,
                                    double flat_tol,
                                    const VectorXd* zeta_candidate) {
  const int n = alpha.domain_dim();
  const int p = alpha.target_dim();
  const GramSpace& u = alpha.target();
  if (!(u.is_positive_definite() || u.is_lorentzian()))
    throw error(errc::bad_signature,
                "target space must be positive definite or Lorentzian");
  if (2 * p >= n)
    throw error(errc::bad_params, "requires 2p < n");

  const BilinearForm a = alpha.symmetrized();
  const BilinearForm beta = j_couple(a, j);
  StructureReport rep;
  rep.residuals["flatness"] = flatness_defect(beta);
  if (rep.residuals["flatness"] > flat_tol)
    throw error(errc::not_flat, "coupled form is not flat");

  const SpanKernel sk = span_and_kernel(beta, rank_tol);
  if (sk.kernel.cols() > n - 2 * p - 1)
    throw error(errc::nullity_too_large,
                "dim N(beta) exceeds n - 2p - 1; point unclassifiable");

  const Subspace u_rad = radical(sk.span, rank_tol);
  rep.s = u_rad.dim();
  if (rep.s <= 0 || rep.s % 2 != 0)
    throw error(errc::odd_s, "degenerate-part dimension s=" +
                                 std::to_string(rep.s) +
                                 " is not a positive even integer; rank "
                                 "decision is numerically borderline");

  // First-factor projection of the radical.
  const MatrixXd l_vectors = u_rad.basis().topRows(p);
  const MatrixXd l_basis = column_space(l_vectors, rank_tol);
  const Subspace l(u, l_basis, rank_tol);
  const Subspace l_rad = radical(l, rank_tol);
  const double a_scale = std::max(1.0, a.scale());

  if (l_rad.dim() == 0) {
    rep.case_tag = CaseTag::nondeg_L;
    if (l.dim() != rep.s)
      throw error(errc::odd_s, "nondegenerate L has dim != s");
    const Signature lsig = signature_of(l.restricted_gram(), rank_tol);
    if (lsig.n_plus != rep.s)
      throw error(errc::bad_signature,
                  "nondegenerate L is not positive definite");
    const MatrixXd l_on = orthonormalize_spacelike(l.basis(), u.gram());
    rep.L_basis = l_on;
    const BilinearForm a1 = project_component(a, l_on);
    BilinearForm a2(n, u, a.vals() - a1.vals());
    rep.alpha1_symmetry_defect = exchange_defect(a1, j.matrix(), a_scale);
    rep.residuals["alpha1_sym"] = rep.alpha1_symmetry_defect;
    rep.dim_Delta = j_invariant_kernel_dim(a2, j.matrix(), rank_tol);
    if (rep.dim_Delta < n - 2 * (p - rep.s))
      throw error(errc::odd_s,
                  "kernel bound dim Delta >= n - 2(p - s) failed; rank "
                  "decision is numerically borderline");
    return rep;
  }

  // Degenerate L.
  rep.case_tag = CaseTag::deg_L;
  if (l_rad.dim() != 1)
    throw error(errc::bad_signature,
                "radical of L has dimension > 1 in a Lorentzian target");
  VectorXd delta = l_rad.basis().col(0);
  VectorXd zeta;
  MatrixXd u1;
  if (zeta_candidate != nullptr) {
    const double pair = u.inner(delta, *zeta_candidate);
    if (std::abs(pair) <= rank_tol * std::max(1.0, delta.norm() *
                                                       zeta_candidate->norm()))
      throw error(errc::no_partner, "zeta candidate does not pair with delta");
    delta /= pair;  // <delta, zeta> = 1
    zeta = *zeta_candidate;
    // U1 = L ∩ zeta^⊥; delta pairs with zeta so this is a complement of
    // delta inside L of dimension s-2.
    const MatrixXd row = zeta.transpose() * u.gram() * l.basis();
    u1 = l.basis() * kernel_of(row, rank_tol);
  } else {
    delta /= delta.norm();
    for (int i = 0; i < p; ++i) {
      if (std::abs(delta[i]) > rank_tol) {
        if (delta[i] < 0.0) delta = -delta;
        break;
      }
    }
    // Space-like part of L from the restricted-Gram eigenvectors.
    const MatrixXd rg = l.restricted_gram();
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(rg);
    const double band = rank_tol * std::max(1.0, rg.cwiseAbs().maxCoeff());
    MatrixXd pos(l.basis().rows(), 0);
    for (int i = 0; i < es.eigenvalues().size(); ++i)
      if (es.eigenvalues()[i] > band) {
        pos.conservativeResize(Eigen::NoChange, pos.cols() + 1);
        pos.col(pos.cols() - 1) = l.basis() * es.eigenvectors().col(i);
      }
    u1 = pos;
    zeta = null_partner(delta, u, Subspace::span_of(u, u1, rank_tol),
                        rank_tol);
  }
  if (u1.cols() != rep.s - 2)
    throw error(errc::odd_s, "space-like part of L has dim != s - 2");
  u1 = orthonormalize_spacelike(u1, u.gram());

  rep.delta = delta;
  rep.zeta = zeta;
  rep.L_basis = l.basis();
  rep.U0_basis = MatrixXd(p, 2);
  rep.U0_basis << delta, zeta;
  rep.U1_basis = u1;
  MatrixXd u01(p, 2 + u1.cols());
  u01 << rep.U0_basis, u1;
  const Subspace u2 =
      orthogonal_complement(Subspace::span_of(u, u01, rank_tol), rank_tol);
  if (u2.dim() != p - rep.s)
    throw error(errc::odd_s, "dim U2 != p - s");
  const MatrixXd u2_on =
      u2.dim() > 0 ? orthonormalize_spacelike(u2.basis(), u.gram())
                   : u2.basis();
  rep.U2_basis = u2_on;

  rep.residuals["delta_null"] = std::abs(u.inner(delta, delta));
  rep.residuals["zeta_null"] = std::abs(u.inner(zeta, zeta));
  rep.residuals["delta_zeta_pair"] = std::abs(u.inner(delta, zeta) - 1.0);

  // <alpha(X,Y), delta> = 0 identity.
  const VectorXd gd = u.gram() * delta;
  rep.delta_orthogonality_defect =
      (gd.transpose() * a.vals()).cwiseAbs().maxCoeff() / a_scale;
  rep.residuals["delta_orth"] = rep.delta_orthogonality_defect;

  const BilinearForm a1 = project_component(a, u1);
  rep.alpha1_symmetry_defect = exchange_defect(a1, j.matrix(), a_scale);
  rep.residuals["alpha1_sym"] = rep.alpha1_symmetry_defect;
  for (int k = 0; k < u1.cols(); ++k) {
    MatrixXd coeff(n, n);
    const VectorXd gk = u.gram() * u1.col(k);
    for (int i = 0; i < n; ++i)
      for (int jj = 0; jj < n; ++jj)
        coeff(i, jj) = gk.dot(a.value(i, jj));
    rep.alpha_U1_coeffs.push_back(std::move(coeff));
  }

  const BilinearForm a2 = project_component(a, u2_on);
  rep.dim_Delta = j_invariant_kernel_dim(a2, j.matrix(), rank_tol);
  if (rep.dim_Delta < n - 2 * (p - rep.s))
    throw error(errc::odd_s,
                "kernel bound dim Delta >= n - 2(p - s) failed; rank "
                "decision is numerically borderline");
  return rep;
}

namespace {

using Cplx = std::complex<double>;
using MatrixXc = Eigen::MatrixXcd;

MatrixXd random_orthogonal_commuting_with_j(int n, std::mt19937_64& rng) {
  const int h = n / 2;
  std::normal_distribution<double> nd;
  MatrixXc g(h, h);
  for (int i = 0; i < h; ++i)
    for (int j = 0; j < h; ++j) g(i, j) = Cplx(nd(rng), nd(rng));
  const Eigen::HouseholderQR<MatrixXc> qr(g);
  MatrixXc q = qr.householderQ();
  // Real form of a unitary matrix in the (x_k, y_k) coordinate pairing:
  // commutes with the standard J and is orthogonal.
  MatrixXd out(n, n);
  for (int i = 0; i < h; ++i)
    for (int j = 0; j < h; ++j) {
      out(2 * i, 2 * j) = q(i, j).real();
      out(2 * i, 2 * j + 1) = -q(i, j).imag();
      out(2 * i + 1, 2 * j) = q(i, j).imag();
      out(2 * i + 1, 2 * j + 1) = q(i, j).real();
    }
  return out;
}

MatrixXd random_gram_isometry(const MatrixXd& gram, std::mt19937_64& rng) {
  const int p = static_cast<int>(gram.rows());
  std::normal_distribution<double> nd(0.0, 0.3);
  MatrixXd k(p, p);
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < p; ++j) k(i, j) = nd(rng);
  k = 0.5 * (k - k.transpose().eval());
  // G M antisymmetric  =>  exp(M) preserves G.
  const MatrixXd m = gram.fullPivLu().solve(k);
  return m.exp();
}

struct NiceBasisInstance {
  MatrixXd gram;       // Gram of U in the construction basis
  MatrixXd vals;       // p x n^2 coefficients of alpha
  VectorXd delta;      // deg_L only (else size 0)
  MatrixXd u1_basis;   // deg_L
  MatrixXd l_basis;
};

NiceBasisInstance build_nice_instance(const SynthSpec& spec,
                                      std::mt19937_64& rng) {
  const int n = spec.n, p = spec.p, s = spec.s;
  const bool deg = spec.case_tag == CaseTag::deg_L;
  const int u1_dim = deg ? s - 2 : s;  // complex-coupled space-like block
  const int q = p - s;                 // dim U2
  const int r = (n - spec.kernel_dim) / 2;  // active J-invariant planes

  NiceBasisInstance inst;
  inst.gram = MatrixXd::Identity(p, p);
  if (deg) {
    // Basis order: delta, zeta, U1 (s-2 columns), U2 (p-s columns), with
    // the hyperbolic pairing <delta, zeta> = 1.
    inst.gram(0, 0) = 0.0;
    inst.gram(1, 1) = 0.0;
    inst.gram(0, 1) = 1.0;
    inst.gram(1, 0) = 1.0;
  }
  const int u1_off = deg ? 2 : 0;
  const int u2_off = u1_off + u1_dim;

  inst.vals = MatrixXd::Zero(p, n * n);
  std::normal_distribution<double> nd;
  std::uniform_real_distribution<double> ud(0.0, 1.0);

  // alpha0 = <X,Y> delta pins down N(beta) = {0} in the degenerate case.
  if (deg)
    for (int i = 0; i < n; ++i) inst.vals(0, i * n + i) = 1.0;

  // alpha1: complex-bilinear symmetric forms into the space-like block,
  // one complex form per coordinate pair of the block.  Complex
  // bilinearity gives the exchange symmetry and the null coupling.
  const int h = n / 2;
  for (int t = 0; t < u1_dim / 2; ++t) {
    MatrixXc c(h, h);
    for (int i = 0; i < h; ++i)
      for (int j = i; j < h; ++j) {
        c(i, j) = Cplx(nd(rng), nd(rng));
        c(j, i) = c(i, j);
      }
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        Cplx v = c(a / 2, b / 2);
        if (a % 2 == 1) v *= Cplx(0.0, 1.0);
        if (b % 2 == 1) v *= Cplx(0.0, 1.0);
        inst.vals(u1_off + 2 * t, a * n + b) += v.real();
        inst.vals(u1_off + 2 * t + 1, a * n + b) += v.imag();
      }
  }

  // alpha2: per U2 direction, one rank-two operator anticommuting with J
  // and supported on a single J-invariant plane.  Each such summand
  // contributes a J-invariant curvature term, so the coupled form stays
  // flat while S(beta2) fills up U2+U2.
  for (int m = 0; m < q && r > 0; ++m) {
    const int plane = m % r;
    const double phi = 2.0 * M_PI * ud(rng);
    const double amp = 0.5 + ud(rng);
    const double t1 = amp * std::cos(phi);
    const double t2 = amp * std::sin(phi);
    const int a = 2 * plane, b = 2 * plane + 1;
    // t1 (aa^T - bb^T) + t2 (ab^T + ba^T)
    inst.vals(u2_off + m, a * n + a) += t1;
    inst.vals(u2_off + m, b * n + b) += -t1;
    inst.vals(u2_off + m, a * n + b) += t2;
    inst.vals(u2_off + m, b * n + a) += t2;
  }

  if (deg) {
    inst.delta = VectorXd::Zero(p);
    inst.delta[0] = 1.0;
    inst.u1_basis = MatrixXd::Zero(p, u1_dim);
    for (int i = 0; i < u1_dim; ++i) inst.u1_basis(u1_off + i, i) = 1.0;
    inst.l_basis = MatrixXd::Zero(p, 1 + u1_dim);
    inst.l_basis.col(0) = inst.delta;
    inst.l_basis.rightCols(u1_dim) = inst.u1_basis;
  } else {
    inst.l_basis = MatrixXd::Zero(p, u1_dim);
    for (int i = 0; i < u1_dim; ++i) inst.l_basis(u1_off + i, i) = 1.0;
  }
  return inst;
}

}  // namespace

SynthInstance synth_flat(const SynthSpec& spec) {
  const int n = spec.n, p = spec.p, s = spec.s;
  const bool deg = spec.case_tag == CaseTag::deg_L;
  auto reject = [](const std::string& why) -> void {
    throw error(errc::inconsistent_spec, why);
  };
  if (n < 2 || n % 2 != 0) reject("n must be a positive even integer");
  if (p < 1 || p > 5) reject("p must satisfy 1 <= p <= 5");
  if (2 * p >= n) reject("requires 2p < n");
  // s = 0 is allowed as the "no degenerate part" instance: the span of the
  // coupled form comes out nondegenerate.
  if (s < 0 || s % 2 != 0) reject("s must be a nonnegative even integer");
  if (deg && s != 2 && s != 4) reject("degenerate case needs s in {2, 4}");
  if (s > p) reject("s exceeds the target dimension");
  if (spec.kernel_dim < 0 || spec.kernel_dim > n || spec.kernel_dim % 2 != 0)
    reject("kernel_dim must be an even integer in [0, n]");
  if (spec.kernel_dim < n - 2 * (p - s))
    reject("kernel_dim below n - 2(p - s)");

  for (int attempt = 0; attempt < 8; ++attempt) {
    std::mt19937_64 rng(spec.seed + 0x9E3779B97F4A7C15ull * attempt);
    const NiceBasisInstance nice = build_nice_instance(spec, rng);

    const MatrixXd tu = random_gram_isometry(nice.gram, rng);
    const MatrixXd qv = random_orthogonal_commuting_with_j(n, rng);

    // Change of basis on U: express everything in coordinates where the
    // Gram is the given one (the isometry keeps it).  Change of basis on
    // V by an orthogonal map commuting with J.
    MatrixXd vals = tu * nice.vals;
    for (int c = 0; c < p; ++c) {
      MatrixXd m(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = vals(c, i * n + j);
      m = qv * m * qv.transpose();
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) vals(c, i * n + j) = m(i, j);
    }

    GramSpace u(nice.gram);
    BilinearForm alpha(n, u, std::move(vals));
    ComplexStructure j = ComplexStructure::standard(n);

    // A degenerate random draw can under-fill S(beta); detect and redraw.
    const BilinearForm beta = j_couple(alpha, j);
    const SpanKernel sk = span_and_kernel(beta);
    // Each active source plane contributes exactly two span directions;
    // directions sharing a plane fold into the same pair of values.
    const int r = (n - spec.kernel_dim) / 2;
    const int expected_span = s + 2 * r;
    if (sk.span.dim() != expected_span) continue;
    if (radical(sk.span).dim() != s) continue;

    StructureReport planted;
    planted.s = s;
    planted.case_tag = spec.case_tag;
    planted.dim_Delta = spec.kernel_dim;
    planted.L_basis = tu * nice.l_basis;
    if (deg) {
      VectorXd delta = tu * nice.delta;
      delta /= delta.norm();
      for (int i = 0; i < p; ++i)
        if (std::abs(delta[i]) > kRankTol) {
          if (delta[i] < 0.0) delta = -delta;
          break;
        }
      planted.delta = delta;
      planted.U1_basis = tu * nice.u1_basis;
    }
    return SynthInstance{std::move(alpha), std::move(j), std::move(planted)};
  }
  throw error(errc::generation_failed,
              "could not draw a generic instance for this spec");
}

}  // namespace ckgeo

#include "ckgeo/lightcone.hpp"

#include <Eigen/Eigenvalues>
#include <random>
#include <unsupported/Eigen/MatrixFunctions>

namespace ckgeo {

LightConeTriple LightConeTriple::canonical(int m) {
  if (m < 1) throw error(errc::bad_params, "need m >= 1");
  LightConeTriple t;
  t.m = m;
  const double r = 1.0 / std::sqrt(2.0);
  t.v = VectorXd::Zero(m + 2);
  t.w = VectorXd::Zero(m + 2);
  t.v[0] = r;
  t.v[m + 1] = r;
  t.w[0] = r;
  t.w[m + 1] = -r;
  t.C = MatrixXd::Zero(m + 2, m);
  for (int i = 0; i < m; ++i) t.C(i + 1, i) = 1.0;
  return t;
}

LightConeTriple LightConeTriple::transformed(const MatrixXd& lorentz) const {
  LightConeTriple t;
  t.m = m;
  t.v = lorentz * v;
  t.w = lorentz * w;
  t.C = lorentz * C;
  return t;
}

double LightConeTriple::invariant_defect() const {
  const MatrixXd g = ambient().gram();
  double d = std::abs(v.dot(g * v));
  d = std::max(d, std::abs(w.dot(g * w)));
  d = std::max(d, std::abs(v.dot(g * w) - 1.0));
  d = std::max(
      d, (C.transpose() * g * C - MatrixXd::Identity(m, m)).cwiseAbs().maxCoeff());
  d = std::max(d, (C.transpose() * g * v).cwiseAbs().maxCoeff());
  d = std::max(d, (C.transpose() * g * w).cwiseAbs().maxCoeff());
  return d;
}

MatrixXd random_lorentz(int dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd(0.0, 0.3);
  MatrixXd k(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) k(i, j) = nd(rng);
  k = 0.5 * (k - k.transpose().eval());
  MatrixXd ginv = MatrixXd::Identity(dim, dim);
  ginv(dim - 1, dim - 1) = -1.0;  // own inverse
  return (ginv * k).exp();
}

ChartPatch psi_patch(const LightConeTriple& triple, const VectorXd& lo,
                     const VectorXd& hi) {
  const int m = triple.m;
  if (lo.size() != m) throw error(errc::bad_params, "domain dim != m");
  std::vector<Expr> coords;
  coords.reserve(m);
  for (int i = 0; i < m; ++i) coords.push_back(Expr::coord(i));
  const Expr sq = Expr::sq_norm(coords);
  std::vector<Expr> comps;
  comps.reserve(m + 2);
  for (int a = 0; a < m + 2; ++a) {
    Expr c = Expr::constant(triple.v[a]);
    for (int b = 0; b < m; ++b)
      if (triple.C(a, b) != 0.0) c = c + triple.C(a, b) * coords[b];
    if (triple.w[a] != 0.0) c = c - 0.5 * triple.w[a] * sq;
    comps.push_back(c);
  }
  return ChartPatch(lo, hi, triple.ambient(), std::move(comps));
}

LightConeRep make_rep(const ChartPatch& f, const Expr& lambda,
                      const LightConeTriple& triple) {
  if (f.ambient_dim() != triple.m)
    throw error(errc::bad_params, "source ambient dim != m");
  if (!f.ambient().is_positive_definite())
    throw error(errc::bad_params, "source ambient must be Euclidean");
  const std::vector<Expr>& fc = f.components();
  const Expr sq = Expr::sq_norm(fc);
  std::vector<Expr> comps;
  comps.reserve(triple.m + 2);
  for (int a = 0; a < triple.m + 2; ++a) {
    Expr c = Expr::constant(triple.v[a]);
    for (int b = 0; b < triple.m; ++b)
      if (triple.C(a, b) != 0.0) c = c + triple.C(a, b) * fc[b];
    if (triple.w[a] != 0.0) c = c - 0.5 * triple.w[a] * sq;
    comps.push_back(c / lambda);
  }
  ChartPatch F(f.lo(), f.hi(), triple.ambient(), std::move(comps));
  return LightConeRep{std::move(F), f, lambda, triple};
}

VectorXd normal_coordinates(const SFFData& sff, const VectorXd& ambient_vec) {
  const VectorXd rhs =
      sff.normal.transpose() * sff.ambient_gram * ambient_vec;
  return sff.normal_gram.fullPivLu().solve(rhs);
}

double sff_radial_check(const SFFData& sff) {
  const VectorXd q = sff.normal.transpose() * sff.ambient_gram * sff.value;
  const double scale = std::max(1.0, sff.metric.cwiseAbs().maxCoeff());
  double d = 0.0;
  for (int i = 0; i < sff.d(); ++i)
    for (int j = 0; j < sff.d(); ++j)
      d = std::max(d,
                   std::abs(sff.alpha_value(i, j).dot(q) + sff.metric(i, j)));
  return d / scale;
}

double sff_radial_check(const LightConeRep& rep, const VectorXd& x) {
  return sff_radial_check(sff_at(rep.F, x));
}

double radial_shape_identity_defect(const SFFData& sff) {
  const VectorXd cf = normal_coordinates(sff, sff.value);
  const MatrixXd a = sff.shape_operator(cf);
  const int d = sff.d();
  return (a + MatrixXd::Identity(d, d)).cwiseAbs().maxCoeff();
}

BilinearForm second_fundamental_form(const SFFData& sff) {
  const int n = sff.d();
  const int p = sff.codim();
  MatrixXd vals(p, n * n);
  for (int i = 0; i < n; ++i)
    for (int jj = 0; jj < n; ++jj)
      vals.col(i * n + jj) = sff.alpha_value(i, jj);
  return BilinearForm(n, GramSpace(sff.normal_gram), std::move(vals));
}

PointDecomp decompose_at(const LightConeRep& rep, const ComplexStructure& j,
                         const VectorXd& x, double rank_tol, double flat_tol) {
  SFFData sff = sff_at(rep.F, x, rank_tol);
  BilinearForm alpha = second_fundamental_form(sff);
  GramSpace normal_space = alpha.target();
  VectorXd f_coords = normal_coordinates(sff, sff.value);
  StructureReport report =
      structure_decompose(alpha, j, rank_tol, flat_tol, &f_coords);
  return PointDecomp{std::move(sff), std::move(normal_space),
                     std::move(alpha), std::move(f_coords),
                     std::move(report)};
}

namespace {

// In a two-dimensional Lorentzian normal space the transversal null
// direction is determined outright; normalize it against the position.
VectorXd transversal_null_coords(const SFFData& sff, const GramSpace& ns,
                                 const VectorXd& f_coords) {
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(ns.gram());
  if (es.eigenvalues()[0] >= 0.0 || es.eigenvalues()[1] <= 0.0)
    throw error(errc::bad_signature, "normal plane is not Lorentzian");
  const VectorXd up =
      es.eigenvectors().col(1) / std::sqrt(es.eigenvalues()[1]);
  const VectorXd um =
      es.eigenvectors().col(0) / std::sqrt(-es.eigenvalues()[0]);
  const VectorXd n1 = up + um, n2 = up - um;
  const double p1 = ns.inner(f_coords, n1), p2 = ns.inner(f_coords, n2);
  // F spans one null line; the candidate pairing more strongly with F is
  // the other one.
  return std::abs(p1) >= std::abs(p2) ? VectorXd(n1 / p1) : VectorXd(n2 / p2);
}

}  // namespace

std::optional<DeltaScan> delta_detect(const LightConeRep& rep,
                                      const ComplexStructure& j,
                                      const std::vector<VectorXd>& samples,
                                      double var_tol, double rank_tol,
                                      double flat_tol) {
  if (samples.empty()) throw error(errc::bad_params, "no sample points");
  std::vector<VectorXd> deltas;
  double a_defect = 0.0;
  for (const VectorXd& x : samples) {
    VectorXd delta_coords;
    SFFData sff;
    if (rep.F.ambient_dim() - rep.F.domain_dim() == 2) {
      sff = sff_at(rep.F, x, rank_tol);
      const GramSpace ns(sff.normal_gram);
      delta_coords =
          transversal_null_coords(sff, ns, normal_coordinates(sff, sff.value));
    } else {
      std::optional<PointDecomp> pd;
      try {
        pd = decompose_at(rep, j, x, rank_tol, flat_tol);
      } catch (const error& e) {
        throw error(errc::unclassified_point,
                    std::string("structure decomposition failed at a "
                                "sample: ") +
                        e.what());
      }
      if (pd->report.case_tag != CaseTag::deg_L)
        throw error(errc::no_delta,
                    "no light-like normal direction at a sample point");
      sff = std::move(pd->sff);
      delta_coords = pd->report.delta;
    }
    a_defect = std::max(
        a_defect, sff.shape_operator(delta_coords).cwiseAbs().maxCoeff());
    deltas.push_back(sff.normal * delta_coords);
  }
  VectorXd mean = VectorXd::Zero(deltas[0].size());
  for (const VectorXd& d : deltas) mean += d;
  mean /= static_cast<double>(deltas.size());
  double variance = 0.0;
  const double scale = std::max(1.0, mean.cwiseAbs().maxCoeff());
  for (const VectorXd& d : deltas)
    variance = std::max(variance, (d - mean).cwiseAbs().maxCoeff() / scale);
  if (variance > var_tol) return std::nullopt;
  return DeltaScan{std::move(mean), variance, a_defect};
}

CongruenceReport congruence_defect(const LightConeRep& rep_f,
                                   const LightConeRep& rep_g,
                                   const VectorXd& base_point,
                                   const std::vector<VectorXd>& samples,
                                   double tol) {
  const SFFData sf = sff_at(rep_f.F, base_point, tol);
  const SFFData sg = sff_at(rep_g.F, base_point, tol);
  const int n = sf.d();
  const int p = sf.codim();
  if (sg.d() != n || sg.codim() != p)
    throw error(errc::bad_params, "representatives have mismatched shapes");

  CongruenceReport rep;
  rep.metric_defect = (sf.metric - sg.metric).cwiseAbs().maxCoeff() /
                      sf.metric.cwiseAbs().maxCoeff();
  if (rep.metric_defect > 1e-6)
    throw error(errc::metric_mismatch,
                "induced metrics disagree at the base point");

  // Normal-frame matching on the spanning set {alpha(e_i,e_j), F}.
  MatrixXd bf(p, n * n + 1), bg(p, n * n + 1);
  for (int i = 0; i < n; ++i)
    for (int jj = 0; jj < n; ++jj) {
      bf.col(i * n + jj) = sf.alpha_value(i, jj);
      bg.col(i * n + jj) = sg.alpha_value(i, jj);
    }
  bf.col(n * n) = normal_coordinates(sf, sf.value);
  bg.col(n * n) = normal_coordinates(sg, sg.value);
  if (rank_of(bf, tol) < p)
    throw error(errc::frame_degenerate,
                "second-order frame does not span the normal space");
  const MatrixXd tc =
      (bf * bf.transpose()).fullPivLu().solve(bf * bg.transpose()).transpose();

  const int dim = sf.tangent.rows();
  MatrixXd af(dim, dim), ag(dim, dim);
  af << sf.tangent, sf.normal;
  ag << sg.tangent, sg.normal * tc;
  const MatrixXd t = ag * af.fullPivLu().inverse();

  const MatrixXd& g_amb = sf.ambient_gram;
  rep.gram_defect = (t.transpose() * g_amb * t - g_amb).cwiseAbs().maxCoeff();

  double d = 0.0;
  for (const VectorXd& x : samples) {
    const VectorXd fv = rep_f.F.value_at(x);
    const VectorXd gv = rep_g.F.value_at(x);
    d = std::max(d, (t * fv - gv).norm() / (1.0 + gv.norm()));
  }
  rep.defect = d;
  return rep;
}

double gauss_check_alpha_L(const LightConeRep& rep, const VectorXd& delta,
                           const VectorXd& x) {
  const SFFData sff = sff_at(rep.F, x);
  const GramSpace ns(sff.normal_gram);
  const double pairing =
      delta.dot(sff.ambient_gram * sff.value);
  if (std::abs(pairing - 1.0) > 1e-6)
    throw error(errc::no_delta, "delta does not pair to 1 with the position");
  const VectorXd cd = normal_coordinates(sff, delta);
  const VectorXd cf = normal_coordinates(sff, sff.value);

  const int n = sff.d();
  const int p = sff.codim();
  // L = {delta, F}^perp inside the normal space, in frame coordinates.
  MatrixXd rows(2, p);
  rows.row(0) = cd.transpose() * ns.gram();
  rows.row(1) = cf.transpose() * ns.gram();
  const MatrixXd l_basis = kernel_of(rows);
  const MatrixXd l_gram = l_basis.transpose() * ns.gram() * l_basis;
  if (signature_of(l_gram).n_plus != l_gram.rows())
    throw error(errc::bad_signature, "L component is not space-like");

  // alpha_L = projection onto L of alpha + <,> delta.
  const Eigen::LLT<MatrixXd> l_llt(l_gram);
  MatrixXd al(static_cast<int>(l_basis.cols()), n * n);
  for (int i = 0; i < n; ++i)
    for (int jj = 0; jj < n; ++jj) {
      const VectorXd raw = sff.alpha_value(i, jj) + sff.metric(i, jj) * cd;
      al.col(i * n + jj) =
          l_llt.solve(l_basis.transpose() * ns.gram() * raw);
    }

  const CurvatureTensor r = curvature_at(sff);
  const MatrixXd pm = al.transpose() * l_gram * al;
  const double scale =
      std::max(1.0, sff.alpha_scale() * sff.alpha_scale());
  double d = 0.0;
  for (int i = 0; i < n; ++i)
    for (int jj = 0; jj < n; ++jj)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
          d = std::max(d, std::abs(r.at(i, jj, k, l) -
                                   (pm(i * n + l, jj * n + k) -
                                    pm(i * n + k, jj * n + l))));
  return d / scale;
}

}  // namespace ckgeo

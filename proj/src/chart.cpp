#include "ckgeo/chart.hpp"

#include <Eigen/Eigenvalues>
#include <nlohmann/json.hpp>

namespace ckgeo {

using nlohmann::json;

ChartPatch::ChartPatch(VectorXd lo, VectorXd hi, GramSpace ambient,
                       std::vector<Expr> components)
    : lo_(std::move(lo)),
      hi_(std::move(hi)),
      ambient_(std::move(ambient)),
      comps_(std::move(components)) {
  if (lo_.size() != hi_.size() || lo_.size() == 0)
    throw error(errc::bad_params, "domain box shape mismatch");
  if ((hi_ - lo_).minCoeff() <= 0.0)
    throw error(errc::bad_params, "empty domain box");
  if (static_cast<int>(comps_.size()) != ambient_.dim())
    throw error(errc::bad_params, "component count != ambient dimension");
  for (const Expr& c : comps_)
    if (c.max_coord_index() >= domain_dim())
      throw error(errc::bad_params, "component uses out-of-range coordinate");
}

bool ChartPatch::in_domain(const VectorXd& x) const {
  if (x.size() != lo_.size()) return false;
  return (x.array() >= lo_.array() - 1e-12).all() &&
         (x.array() <= hi_.array() + 1e-12).all();
}

void ChartPatch::require_in_domain(const VectorXd& x) const {
  if (!in_domain(x))
    throw error(errc::out_of_domain, "evaluation point outside the chart box");
}

VectorXd ChartPatch::value_at(const VectorXd& x) const {
  require_in_domain(x);
  VectorXd v(ambient_dim());
  for (int c = 0; c < ambient_dim(); ++c) v[c] = comps_[c].eval(x);
  return v;
}

PatchJet ChartPatch::jet_at(const VectorXd& x, int order) const {
  require_in_domain(x);
  (void)order;  // jets always carry all three orders
  const int d = domain_dim();
  const int D = ambient_dim();
  std::vector<Jet> coords;
  coords.reserve(d);
  for (int i = 0; i < d; ++i) coords.push_back(Jet::variable(d, i, x[i]));
  PatchJet pj;
  pj.value.resize(D);
  pj.d1.resize(D, d);
  pj.d2.resize(D);
  pj.d3.resize(D);
  for (int c = 0; c < D; ++c) {
    const Jet j = comps_[c].eval(std::span<const Jet>(coords));
    pj.value[c] = j.value();
    pj.d1.row(c) = j.grad().transpose();
    pj.d2[c] = j.hess();
    pj.d3[c].reserve(d);
    for (int k = 0; k < d; ++k) pj.d3[c].push_back(j.d3(k));
  }
  return pj;
}

json ChartPatch::to_json() const {
  json j;
  j["lo"] = std::vector<double>(lo_.data(), lo_.data() + lo_.size());
  j["hi"] = std::vector<double>(hi_.data(), hi_.data() + hi_.size());
  const Signature sig = ambient_.signature();
  if (ambient_.gram().isIdentity(1e-14))
    j["ambient"] = json{{"kind", "euclidean"}, {"dim", ambient_.dim()}};
  else if (sig.n_minus == 1 && sig.n_zero == 0 &&
           (ambient_.gram() - GramSpace::minkowski(ambient_.dim()).gram())
                   .cwiseAbs()
                   .maxCoeff() < 1e-14)
    j["ambient"] = json{{"kind", "minkowski"}, {"dim", ambient_.dim()}};
  else {
    std::vector<std::vector<double>> g;
    for (int r = 0; r < ambient_.dim(); ++r) {
      std::vector<double> row(ambient_.dim());
      for (int c = 0; c < ambient_.dim(); ++c) row[c] = ambient_.gram()(r, c);
      g.push_back(std::move(row));
    }
    j["ambient"] = json{{"kind", "gram"}, {"matrix", g}};
  }
  j["components"] = patch_components_to_json(comps_);
  return j;
}

ChartPatch ChartPatch::from_json(const json& j) {
  const auto lo_v = j.at("lo").get<std::vector<double>>();
  const auto hi_v = j.at("hi").get<std::vector<double>>();
  VectorXd lo = Eigen::Map<const VectorXd>(lo_v.data(), lo_v.size());
  VectorXd hi = Eigen::Map<const VectorXd>(hi_v.data(), hi_v.size());
  const auto& amb = j.at("ambient");
  const std::string kind = amb.at("kind").get<std::string>();
  GramSpace ambient = GramSpace::euclidean(1);
  if (kind == "euclidean")
    ambient = GramSpace::euclidean(amb.at("dim").get<int>());
  else if (kind == "minkowski")
    ambient = GramSpace::minkowski(amb.at("dim").get<int>());
  else if (kind == "gram") {
    const auto rows = amb.at("matrix").get<std::vector<std::vector<double>>>();
    MatrixXd g(rows.size(), rows.size());
    for (size_t r = 0; r < rows.size(); ++r)
      for (size_t c = 0; c < rows.size(); ++c) g(r, c) = rows[r][c];
    ambient = GramSpace(std::move(g));
  } else {
    throw error(errc::bad_params, "unknown ambient kind '" + kind + "'");
  }
  return ChartPatch(std::move(lo), std::move(hi), std::move(ambient),
                    patch_components_from_json(j.at("components")));
}

double KaehlerChart::j_orthogonality_defect(const VectorXd& x) const {
  const MatrixXd g = metric_at(reference, x);
  return (J.transpose() * g * J - g).cwiseAbs().maxCoeff() /
         g.cwiseAbs().maxCoeff();
}

VectorXd SFFData::alpha_value(int i, int j) const {
  VectorXd v(codim());
  for (int k = 0; k < codim(); ++k) v[k] = alpha[k](i, j);
  return v;
}

double SFFData::alpha_scale() const {
  double s = 0.0;
  for (const MatrixXd& m : alpha) s = std::max(s, m.cwiseAbs().maxCoeff());
  return s;
}

MatrixXd SFFData::shape_operator(const VectorXd& xi_coords) const {
  const VectorXd w = normal_gram * xi_coords;
  MatrixXd s = MatrixXd::Zero(d(), d());
  for (int k = 0; k < codim(); ++k) s += w[k] * alpha[k];
  return metric.ldlt().solve(s);
}

VectorXd SFFData::mean_curvature() const {
  const MatrixXd ginv = metric.inverse();
  VectorXd h(codim());
  for (int k = 0; k < codim(); ++k) h[k] = (ginv * alpha[k]).trace();
  return h;
}

MatrixXd metric_at(const ChartPatch& patch, const VectorXd& x) {
  const PatchJet pj = patch.jet_at(x, 1);
  return pj.d1.transpose() * patch.ambient().gram() * pj.d1;
}

SFFData sff_at(const ChartPatch& patch, const VectorXd& x, double tol) {
  const PatchJet pj = patch.jet_at(x, 2);
  const int d = patch.domain_dim();
  const int D = patch.ambient_dim();
  const MatrixXd& g_amb = patch.ambient().gram();

  SFFData sff;
  sff.point = x;
  sff.value = pj.value;
  sff.tangent = pj.d1;
  sff.metric = pj.d1.transpose() * g_amb * pj.d1;
  sff.ambient_gram = g_amb;

  {
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(sff.metric,
                                               Eigen::EigenvaluesOnly);
    const double top = es.eigenvalues().cwiseAbs().maxCoeff();
    if (es.eigenvalues().minCoeff() <= tol * std::max(top, 1e-300))
      throw error(errc::tangent_degenerate,
                  "tangent plane is degenerate or not space-like");
  }

  sff.normal = kernel_of(sff.tangent.transpose() * g_amb, tol);
  if (sff.normal.cols() != D - d)
    throw error(errc::normal_degenerate, "normal space has wrong dimension");
  sff.normal_gram = sff.normal.transpose() * g_amb * sff.normal;
  if (rank_of(sff.normal_gram, tol) != D - d)
    throw error(errc::normal_degenerate,
                "restricted normal Gram is degenerate");

  // Normal component of the second derivatives: tangent and normal space
  // are ambient-orthogonal, so the normal Gram inverts the projection.
  const Eigen::FullPivLU<MatrixXd> ngram_lu(sff.normal_gram);
  const MatrixXd ngt = sff.normal.transpose() * g_amb;  // (D-d) x D
  sff.alpha.assign(D - d, MatrixXd::Zero(d, d));
  VectorXd sec(D);
  for (int i = 0; i < d; ++i)
    for (int j = i; j < d; ++j) {
      for (int c = 0; c < D; ++c) sec[c] = pj.d2[c](i, j);
      const VectorXd b = ngram_lu.solve(ngt * sec);
      for (int k = 0; k < D - d; ++k) {
        sff.alpha[k](i, j) = b[k];
        sff.alpha[k](j, i) = b[k];
      }
    }
  return sff;
}

ConformalFactor conformal_factor(const MatrixXd& g_f, const MatrixXd& g_ref,
                                 double tol) {
  const int d = static_cast<int>(g_f.rows());
  const double lam2 = (g_ref.ldlt().solve(g_f)).trace() / d;
  if (!(lam2 > 0.0))
    throw error(errc::not_conformal, "nonpositive conformal factor");
  ConformalFactor cf;
  cf.lambda = std::sqrt(lam2);
  cf.defect =
      (g_f - lam2 * g_ref).cwiseAbs().maxCoeff() / g_f.cwiseAbs().maxCoeff();
  if (cf.defect > tol)
    throw error(errc::not_conformal,
                "metric is not conformal to the reference: defect " +
                    std::to_string(cf.defect));
  return cf;
}

ConformalFactor conformal_factor(const ChartPatch& patch,
                                 const ChartPatch& reference, const VectorXd& x,
                                 double tol) {
  return conformal_factor(metric_at(patch, x), metric_at(reference, x), tol);
}

CurvatureTensor::CurvatureTensor(int d, Eigen::VectorXd data,
                                 double alpha_scale)
    : d_(d),
      data_(std::move(data)),
      alpha_scale_(alpha_scale),
      max_abs_(data_.size() == 0 ? 0.0 : data_.cwiseAbs().maxCoeff()) {}

bool CurvatureTensor::flat_point(double tol) const {
  return max_abs_ <= tol * std::max(1.0, alpha_scale_ * alpha_scale_);
}

CurvatureTensor curvature_at(const SFFData& sff) {
  const int d = sff.d();
  const int w = sff.codim();
  MatrixXd b(w, d * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) b.col(i * d + j) = sff.alpha_value(i, j);
  const MatrixXd p = b.transpose() * sff.normal_gram * b;
  Eigen::VectorXd data(static_cast<long>(d) * d * d * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l)
          data[((i * d + j) * d + k) * d + l] =
              p(i * d + l, j * d + k) - p(i * d + k, j * d + l);
  return CurvatureTensor(d, std::move(data), sff.alpha_scale());
}

double kaehler_curvature_check(const CurvatureTensor& r, const MatrixXd& j,
                               const MatrixXd& metric) {
  const int d = r.d();
  const Eigen::LDLT<MatrixXd> gl(metric);
  double defect = 0.0;
  double scale = std::max(1.0, r.max_abs());
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) {
      MatrixXd m(d, d);  // m(k,t) = R(e_a, e_b, e_k, e_t)
      for (int k = 0; k < d; ++k)
        for (int t = 0; t < d; ++t) m(k, t) = r.at(a, b, k, t);
      const MatrixXd rop = gl.solve(m.transpose());  // columns R(e_a,e_b)e_k
      defect = std::max(defect, (j * rop - rop * j).cwiseAbs().maxCoeff());
    }
  return defect / scale;
}

double min_rotation_coupling_defect(const MatrixXd& a1, const MatrixXd& a2,
                                    const MatrixXd& j) {
  const double scale =
      std::max({1.0, a1.norm(), a2.norm()});
  double best = std::numeric_limits<double>::infinity();
  for (int orientation = 0; orientation < 2; ++orientation) {
    const double sgn = orientation == 0 ? 1.0 : -1.0;
    // eta1 = c xi1 + s xi2, eta2 = sgn(-s xi1 + c xi2):
    // residual = c (A1 - sgn J A2) + s (A2 + sgn J A1).
    const MatrixXd xm = a1 - sgn * j * a2;
    const MatrixXd ym = a2 + sgn * j * a1;
    Eigen::Matrix2d q;
    q(0, 0) = xm.cwiseProduct(xm).sum();
    q(1, 1) = ym.cwiseProduct(ym).sum();
    q(0, 1) = q(1, 0) = xm.cwiseProduct(ym).sum();
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(q);
    best = std::min(best, std::sqrt(std::max(0.0, es.eigenvalues()[0])));
  }
  return best / scale;
}

}  // namespace ckgeo

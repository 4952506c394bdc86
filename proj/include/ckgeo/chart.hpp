#pragma once

#include <vector>

#include "ckgeo/expr.hpp"
#include "ckgeo/gram.hpp"

namespace ckgeo {

// Jet of a vector-valued patch map at a point.
struct PatchJet {
  VectorXd value;                              // D
  MatrixXd d1;                                 // D x d
  std::vector<MatrixXd> d2;                    // per component: d x d
  std::vector<std::vector<MatrixXd>> d3;       // per component, per index k
};

// Smooth parametrized immersion patch over an axis-aligned box, with jet
// evaluation to order 3 through the expression trees of its components.
class ChartPatch {
 public:
  ChartPatch(VectorXd lo, VectorXd hi, GramSpace ambient,
             std::vector<Expr> components);

  int domain_dim() const { return static_cast<int>(lo_.size()); }
  int ambient_dim() const { return ambient_.dim(); }
  const GramSpace& ambient() const { return ambient_; }
  const VectorXd& lo() const { return lo_; }
  const VectorXd& hi() const { return hi_; }
  const std::vector<Expr>& components() const { return comps_; }

  bool in_domain(const VectorXd& x) const;
  void require_in_domain(const VectorXd& x) const;

  VectorXd value_at(const VectorXd& x) const;
  PatchJet jet_at(const VectorXd& x, int order = 3) const;

  nlohmann::json to_json() const;
  static ChartPatch from_json(const nlohmann::json& j);

 private:
  VectorXd lo_, hi_;
  GramSpace ambient_;
  std::vector<Expr> comps_;
};

// Chart with a constant complex structure on the coordinates and a
// designated reference patch whose pullback metric is the Kaehler metric.
struct KaehlerChart {
  ChartPatch patch;
  MatrixXd J;
  ChartPatch reference;

  // ||J^T G_ref J - G_ref|| / ||G_ref|| at x.
  double j_orthogonality_defect(const VectorXd& x) const;
};

// Second-order contact data of a patch at a point.  The normal frame is
// built from the restricted ambient Gram; it is not forced orthonormal, so
// null directions survive as honest frame vectors.
struct SFFData {
  VectorXd point;
  VectorXd value;
  MatrixXd tangent;       // D x d, columns are coordinate tangents
  MatrixXd metric;        // d x d pullback metric
  MatrixXd normal;        // D x (D - d)
  MatrixXd normal_gram;   // (D-d) x (D-d), restricted ambient Gram
  MatrixXd ambient_gram;  // D x D
  std::vector<MatrixXd> alpha;  // per normal index: d x d coefficients

  int d() const { return static_cast<int>(metric.rows()); }
  int codim() const { return static_cast<int>(normal.cols()); }
  VectorXd alpha_value(int i, int j) const;  // normal-frame coordinates
  double alpha_scale() const;

  // Shape operator for a normal vector given in frame coordinates.
  MatrixXd shape_operator(const VectorXd& xi_coords) const;
  // trace_g(alpha) in frame coordinates.
  VectorXd mean_curvature() const;
};

MatrixXd metric_at(const ChartPatch& patch, const VectorXd& x);
SFFData sff_at(const ChartPatch& patch, const VectorXd& x,
               double tol = kRankTol);

struct ConformalFactor {
  double lambda = 1.0;
  double defect = 0.0;
};
// lambda = sqrt(tr(G_ref^-1 G_f)/d); throws not_conformal above tol.
ConformalFactor conformal_factor(const MatrixXd& g_f, const MatrixXd& g_ref,
                                 double tol = 1e-6);
ConformalFactor conformal_factor(const ChartPatch& patch,
                                 const ChartPatch& reference,
                                 const VectorXd& x, double tol = 1e-6);

// Fully covariant curvature tensor assembled by the Gauss equation,
// R(X,Y,Z,T) = <alpha(X,T),alpha(Y,Z)> - <alpha(X,Z),alpha(Y,T)>.
class CurvatureTensor {
 public:
  CurvatureTensor(int d, Eigen::VectorXd data, double alpha_scale);
  int d() const { return d_; }
  double at(int i, int j, int k, int l) const {
    return data_[((i * d_ + j) * d_ + k) * d_ + l];
  }
  double max_abs() const { return max_abs_; }
  // "flat point": the curvature tensor vanishes relative to ||alpha||^2.
  bool flat_point(double tol = 1e-8) const;

 private:
  int d_;
  Eigen::VectorXd data_;
  double alpha_scale_;
  double max_abs_;
};

CurvatureTensor curvature_at(const SFFData& sff);

// max over basis pairs of ||J R(X,Y) - R(X,Y) J||, normalized.  The index
// is raised with the supplied metric.
double kaehler_curvature_check(const CurvatureTensor& r, const MatrixXd& j,
                               const MatrixXd& metric);

// Smallest value of ||A_{eta1} - J A_{eta2}|| over orthonormal frames
// (eta1, eta2) of span{xi1, xi2}, normalized; the rotation-gauge-free form
// of the coupled shape-operator relation.
double min_rotation_coupling_defect(const MatrixXd& a1, const MatrixXd& a2,
                                    const MatrixXd& j);

}  // namespace ckgeo

#include "ckgeo/gallery.hpp"

#include <cctype>
#include <random>

namespace ckgeo {

namespace {

// (re, im) expression pair for complex arithmetic on chart coordinates.
struct CExpr {
  Expr re, im;
};

CExpr cmul(const CExpr& a, const CExpr& b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}

struct SurfaceDef {
  const char* name;
  std::vector<Expr> comps;  // functions of coords 0 (u) and 1 (v)
  Eigen::Vector2d u_range, v_range;
};

SurfaceDef surface_def(SurfaceId id) {
  const Expr u = Expr::coord(0), v = Expr::coord(1);
  switch (id) {
    case SurfaceId::catenoid:
      return {"catenoid",
              {Expr::cosh(v) * Expr::cos(u), Expr::cosh(v) * Expr::sin(u), v},
              {-1.0, 1.0},
              {0.3, 1.2}};
    case SurfaceId::helicoid:
      return {"helicoid",
              {Expr::sinh(v) * Expr::cos(u), Expr::sinh(v) * Expr::sin(u), u},
              {-1.0, 1.0},
              {0.3, 1.2}};
    case SurfaceId::enneper:
      // Isothermal with factor 1 + u^2 + v^2 squared on the metric.
      return {"enneper",
              {u - Expr::pow(u, 3.0) / 3.0 + u * v * v,
               -1.0 * v + Expr::pow(v, 3.0) / 3.0 - v * u * u, u * u - v * v},
              {0.2, 1.0},
              {0.2, 1.0}};
  }
  throw error(errc::unknown_example, "unknown surface id");
}

}  // namespace

GalleryExample cylinder_hypersurface(SurfaceId surface, int n) {
  if (n < 1) throw error(errc::bad_params, "need n >= 1");
  const SurfaceDef sd = surface_def(surface);
  const int d = 2 * n;
  VectorXd lo(d), hi(d);
  lo[0] = sd.u_range[0];
  hi[0] = sd.u_range[1];
  lo[1] = sd.v_range[0];
  hi[1] = sd.v_range[1];
  for (int i = 2; i < d; ++i) {
    lo[i] = -1.0;
    hi[i] = 1.0;
  }
  std::vector<Expr> comps = sd.comps;
  for (int i = 2; i < d; ++i) comps.push_back(Expr::coord(i));
  ChartPatch patch(lo, hi, GramSpace::euclidean(d + 1), std::move(comps));
  std::optional<ExpectedClassification> expected;
  if (2 * 3 < d)  // normal space of the representative is Lorentzian p = 3
    expected = ExpectedClassification{"CASE_I_REAL_KAEHLER", 2, d - 2};
  return GalleryExample{std::string(sd.name) + "-cyl-n" + std::to_string(n),
                        patch,
                        ComplexStructure::standard(d),
                        patch,
                        Expr::constant(1.0),
                        expected};
}

GalleryExample product_pair(const GalleryExample& e1,
                            const GalleryExample& e2) {
  const int d1 = e1.patch.domain_dim(), d2 = e2.patch.domain_dim();
  if (e1.patch.ambient_dim() != d1 + 1 || e2.patch.ambient_dim() != d2 + 1)
    throw error(errc::bad_codim, "product factors must have codimension one");
  VectorXd mid1 = 0.5 * (e1.patch.lo() + e1.patch.hi());
  VectorXd mid2 = 0.5 * (e2.patch.lo() + e2.patch.hi());
  if (std::abs(e1.lambda.eval(mid1) - 1.0) > 1e-12 ||
      std::abs(e2.lambda.eval(mid2) - 1.0) > 1e-12)
    throw error(errc::bad_codim, "product factors must be isometric");

  const int d = d1 + d2;
  VectorXd lo(d), hi(d);
  lo << e1.patch.lo(), e2.patch.lo();
  hi << e1.patch.hi(), e2.patch.hi();
  std::vector<Expr> shift;
  shift.reserve(d2);
  for (int i = 0; i < d2; ++i) shift.push_back(Expr::coord(d1 + i));
  std::vector<Expr> comps = e1.patch.components();
  for (const Expr& c : e2.patch.components())
    comps.push_back(c.substitute(shift));
  ChartPatch patch(lo, hi, GramSpace::euclidean(d + 2), std::move(comps));
  std::optional<ExpectedClassification> expected;
  if (2 * 4 < d)  // representative codimension p = 4
    expected = ExpectedClassification{"CASE_I_REAL_KAEHLER", 2, d - 4};
  return GalleryExample{"product-" + e1.name + "-" + e2.name,
                        patch,
                        ComplexStructure::standard(d),
                        patch,
                        Expr::constant(1.0),
                        expected};
}

GalleryExample holomorphic_graph(const std::vector<MonomialTerm>& terms,
                                 int n) {
  if (n < 1) throw error(errc::bad_params, "need n >= 1");
  const int d = 2 * n;
  std::vector<CExpr> z;
  z.reserve(n);
  for (int k = 0; k < n; ++k)
    z.push_back({Expr::coord(2 * k), Expr::coord(2 * k + 1)});
  CExpr phi{Expr::constant(0.0), Expr::constant(0.0)};
  for (const MonomialTerm& t : terms) {
    if (static_cast<int>(t.exps.size()) != n)
      throw error(errc::bad_params, "monomial exponent count != n");
    CExpr term{Expr::constant(t.coeff.real()), Expr::constant(t.coeff.imag())};
    for (int k = 0; k < n; ++k) {
      if (t.exps[k] < 0)
        throw error(errc::bad_params, "negative monomial exponent");
      for (int e = 0; e < t.exps[k]; ++e) term = cmul(term, z[k]);
    }
    phi.re = phi.re + term.re;
    phi.im = phi.im + term.im;
  }
  VectorXd lo = VectorXd::Constant(d, 0.2);
  VectorXd hi = VectorXd::Constant(d, 0.9);
  std::vector<Expr> comps;
  comps.reserve(d + 2);
  for (int i = 0; i < d; ++i) comps.push_back(Expr::coord(i));
  comps.push_back(phi.re);
  comps.push_back(phi.im);
  ChartPatch patch(lo, hi, GramSpace::euclidean(d + 2), std::move(comps));
  std::optional<ExpectedClassification> expected;
  if (!terms.empty() && 2 * 4 < d)
    expected = ExpectedClassification{"MINIMAL_S4", 4, d};
  return GalleryExample{"graph-n" + std::to_string(n),
                        patch,
                        ComplexStructure::standard(d),
                        patch,
                        Expr::constant(1.0),
                        expected};
}

ConformalMap moebius_translation(const VectorXd& t) {
  const int n = static_cast<int>(t.size());
  if (n == 0) throw error(errc::bad_params, "empty translation");
  ConformalMap h{MoebiusKind::translation, "trans", n, {}, Expr::constant(1.0),
                 std::nullopt};
  for (int i = 0; i < n; ++i) h.map.push_back(Expr::coord(i) + t[i]);
  return h;
}

ConformalMap moebius_orthogonal(const MatrixXd& q) {
  const int n = static_cast<int>(q.rows());
  if (n == 0 || q.cols() != n ||
      (q.transpose() * q - MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() >
          1e-10)
    throw error(errc::bad_params, "matrix is not orthogonal");
  ConformalMap h{MoebiusKind::orthogonal, "orth", n, {}, Expr::constant(1.0),
                 std::nullopt};
  for (int i = 0; i < n; ++i) {
    Expr c = Expr::constant(0.0);
    for (int j = 0; j < n; ++j)
      if (q(i, j) != 0.0) c = c + q(i, j) * Expr::coord(j);
    h.map.push_back(c);
  }
  return h;
}

ConformalMap moebius_dilation(double a, int n) {
  if (!(a > 0.0) || n < 1) throw error(errc::bad_params, "need a > 0, n >= 1");
  ConformalMap h{MoebiusKind::dilation, "dil", n, {}, Expr::constant(a),
                 std::nullopt};
  for (int i = 0; i < n; ++i) h.map.push_back(a * Expr::coord(i));
  return h;
}

ConformalMap moebius_inversion(const VectorXd& center, double radius) {
  const int n = static_cast<int>(center.size());
  if (!(radius > 0.0) || n < 1)
    throw error(errc::bad_params, "need radius > 0");
  std::vector<Expr> diff;
  diff.reserve(n);
  for (int i = 0; i < n; ++i) diff.push_back(Expr::coord(i) - center[i]);
  const Expr s = Expr::sq_norm(diff);
  const double r2 = radius * radius;
  ConformalMap h{MoebiusKind::inversion, "inv", n, {}, r2 / s, center};
  for (int i = 0; i < n; ++i)
    h.map.push_back(center[i] + r2 * diff[i] / s);
  return h;
}

GalleryExample compose(const ConformalMap& h, const GalleryExample& e) {
  if (h.N != e.patch.ambient_dim())
    throw error(errc::bad_params, "map dimension != example ambient");
  if (h.singular_center) {
    // Keep the image clear of the singular point; probe the box.
    const int d = e.patch.domain_dim();
    std::mt19937_64 rng(12345);
    std::uniform_real_distribution<double> ud(0.0, 1.0);
    std::vector<VectorXd> probes;
    probes.push_back(0.5 * (e.patch.lo() + e.patch.hi()));
    for (int c = 0; c < std::min(1 << d, 64); ++c) {
      VectorXd x(d);
      for (int i = 0; i < d; ++i)
        x[i] = (c >> (i % 30)) & 1 ? e.patch.hi()[i] : e.patch.lo()[i];
      probes.push_back(std::move(x));
    }
    for (int c = 0; c < 64; ++c) {
      VectorXd x(d);
      for (int i = 0; i < d; ++i)
        x[i] = e.patch.lo()[i] + ud(rng) * (e.patch.hi()[i] - e.patch.lo()[i]);
      probes.push_back(std::move(x));
    }
    for (const VectorXd& x : probes)
      if ((e.patch.value_at(x) - *h.singular_center).norm() < 1e-3)
        throw error(errc::domain_violation,
                    "image passes through the inversion center");
  }
  std::vector<Expr> comps;
  comps.reserve(h.map.size());
  for (const Expr& c : h.map)
    comps.push_back(c.substitute(e.patch.components()));
  ChartPatch patch(e.patch.lo(), e.patch.hi(),
                   GramSpace::euclidean(h.N), std::move(comps));
  Expr lambda = h.lambda.substitute(e.patch.components()) * e.lambda;
  return GalleryExample{h.name + "-" + e.name, std::move(patch), e.J,
                        e.reference, std::move(lambda), e.expected};
}

namespace {

GalleryExample flat_identity() {
  VectorXd lo = VectorXd::Constant(2, 0.5), hi = VectorXd::Constant(2, 1.5);
  std::vector<Expr> comps{Expr::coord(0), Expr::coord(1)};
  ChartPatch patch(lo, hi, GramSpace::euclidean(2), std::move(comps));
  return GalleryExample{"flat-identity", patch, ComplexStructure::standard(2),
                        patch, Expr::constant(1.0), std::nullopt};
}

GalleryExample flat_z2() {
  VectorXd lo = VectorXd::Constant(2, 0.5), hi = VectorXd::Constant(2, 1.5);
  const Expr x = Expr::coord(0), y = Expr::coord(1);
  std::vector<Expr> comps{x * x - y * y, 2.0 * x * y};
  ChartPatch patch(lo, hi, GramSpace::euclidean(2), std::move(comps));
  const GalleryExample id = flat_identity();
  // |dz^2/dz| = 2|z|: conformal over the flat reference, never Moebius.
  Expr lambda = 2.0 * Expr::pow(Expr::sq_norm({x, y}), 0.5);
  return GalleryExample{"flat-z2", std::move(patch),
                        ComplexStructure::standard(2), id.reference,
                        std::move(lambda), std::nullopt};
}

// Splits a trailing "-n<digits>" parameter off an id.
bool split_n(const std::string& id, std::string& stem, int& n) {
  const auto pos = id.rfind("-n");
  if (pos == std::string::npos || pos + 2 >= id.size()) return false;
  for (size_t i = pos + 2; i < id.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(id[i]))) return false;
  stem = id.substr(0, pos);
  n = std::stoi(id.substr(pos + 2));
  return true;
}

GalleryExample base_example(const std::string& id) {
  if (id == "product-cat2-cat3") {
    GalleryExample e =
        product_pair(cylinder_hypersurface(SurfaceId::catenoid, 2),
                     cylinder_hypersurface(SurfaceId::catenoid, 3));
    e.name = id;  // registry contract: gallery_get(id).name == id
    return e;
  }
  if (id == "flat-identity") return flat_identity();
  if (id == "flat-z2") return flat_z2();
  std::string stem;
  int n = 0;
  if (split_n(id, stem, n)) {
    if (stem == "catenoid-cyl")
      return cylinder_hypersurface(SurfaceId::catenoid, n);
    if (stem == "helicoid-cyl")
      return cylinder_hypersurface(SurfaceId::helicoid, n);
    if (stem == "enneper-cyl")
      return cylinder_hypersurface(SurfaceId::enneper, n);
    if (stem == "graph-sumsq") {
      std::vector<MonomialTerm> terms;
      for (int k = 0; k < n; ++k) {
        MonomialTerm t{1.0, std::vector<int>(n, 0)};
        t.exps[k] = 2;
        terms.push_back(std::move(t));
      }
      GalleryExample e = holomorphic_graph(terms, n);
      e.name = id;
      return e;
    }
    if (stem == "graph-z1z2" && n >= 2) {
      MonomialTerm t{1.0, std::vector<int>(n, 0)};
      t.exps[0] = 1;
      t.exps[1] = 1;
      GalleryExample e = holomorphic_graph({t}, n);
      e.name = id;
      return e;
    }
  }
  throw error(errc::unknown_example, "no gallery example named '" + id + "'");
}

}  // namespace

std::vector<std::string> gallery_ids() {
  std::vector<std::string> ids = {
      "catenoid-cyl-n2", "catenoid-cyl-n4", "helicoid-cyl-n4",
      "enneper-cyl-n4",  "product-cat2-cat3", "graph-sumsq-n5",
      "graph-z1z2-n2",   "flat-identity",     "flat-z2"};
  const size_t base_count = ids.size();
  for (size_t i = 0; i < base_count; ++i)
    if (ids[i].rfind("flat-", 0) != 0) ids.push_back("inv-" + ids[i]);
  return ids;
}

GalleryExample gallery_get(const std::string& id) {
  if (id.rfind("inv-", 0) == 0) {
    GalleryExample base = base_example(id.substr(4));
    const int big_n = base.patch.ambient_dim();
    GalleryExample out =
        compose(moebius_inversion(VectorXd::Zero(big_n), 1.0), base);
    out.name = id;
    return out;
  }
  return base_example(id);
}

}  // namespace ckgeo

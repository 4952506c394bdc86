#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <nlohmann/json.hpp>
#include <random>

#include "ckgeo/chart.hpp"

using namespace ckgeo;

namespace {

VectorXd vec2(double a, double b) {
  VectorXd v(2);
  v << a, b;
  return v;
}

ChartPatch catenoid() {
  const Expr u = Expr::coord(0), v = Expr::coord(1);
  return ChartPatch(vec2(-1.0, 0.3), vec2(1.0, 1.2), GramSpace::euclidean(3),
                    {Expr::cosh(v) * Expr::cos(u), Expr::cosh(v) * Expr::sin(u),
                     v});
}

ChartPatch identity_patch(int d, double lo, double hi) {
  std::vector<Expr> comps;
  for (int i = 0; i < d; ++i) comps.push_back(Expr::coord(i));
  return ChartPatch(VectorXd::Constant(d, lo), VectorXd::Constant(d, hi),
                    GramSpace::euclidean(d), std::move(comps));
}

}  // namespace

TEST_CASE("patch construction and jets") {
  const Expr u = Expr::coord(0), v = Expr::coord(1);
  const ChartPatch p(vec2(-1, -1), vec2(1, 1), GramSpace::euclidean(2),
                     {Expr::pow(u, 2) * v, u + Expr::pow(v, 3)});
  CHECK(p.in_domain(vec2(0.5, -0.5)));
  CHECK(!p.in_domain(vec2(1.5, 0.0)));
  CHECK_THROWS_AS(p.value_at(vec2(2, 0)), error);

  const VectorXd x = vec2(0.4, -0.7);
  const PatchJet pj = p.jet_at(x);
  CHECK(pj.value[0] == doctest::Approx(0.16 * -0.7));
  // Exact polynomial derivatives.
  CHECK(pj.d1(0, 0) == doctest::Approx(2 * 0.4 * -0.7));
  CHECK(pj.d1(0, 1) == doctest::Approx(0.16));
  CHECK(pj.d1(1, 0) == doctest::Approx(1.0));
  CHECK(pj.d1(1, 1) == doctest::Approx(3 * 0.49));
  CHECK(pj.d2[0](0, 0) == doctest::Approx(2 * -0.7));
  CHECK(pj.d2[0](0, 1) == doctest::Approx(2 * 0.4));
  CHECK(pj.d2[1](1, 1) == doctest::Approx(6 * -0.7));
  CHECK(pj.d3[0][0](0, 1) == doctest::Approx(2.0));
  CHECK(pj.d3[1][1](1, 1) == doctest::Approx(6.0));

  CHECK_THROWS_AS(ChartPatch(vec2(0, 0), vec2(1, 1), GramSpace::euclidean(3),
                             {u, v}),
                  error);
  CHECK_THROWS_AS(ChartPatch(vec2(0, 0), vec2(0, 1), GramSpace::euclidean(2),
                             {u, v}),
                  error);
}

TEST_CASE("pullback metric and conformal factor") {
  SUBCASE("dilation") {
    const Expr u = Expr::coord(0), v = Expr::coord(1);
    const ChartPatch p(vec2(-1, -1), vec2(1, 1), GramSpace::euclidean(2),
                       {3.0 * u, 3.0 * v});
    const MatrixXd g = metric_at(p, vec2(0.2, 0.2));
    CHECK((g - 9.0 * MatrixXd::Identity(2, 2)).norm() <= 1e-12);
  }
  SUBCASE("catenoid is isothermal with factor cosh v") {
    const ChartPatch cat = catenoid();
    const ChartPatch ref = identity_patch(2, -2.0, 2.0);
    for (double v : {0.35, 0.8, 1.1}) {
      const VectorXd x = vec2(0.4, v);
      const MatrixXd g = metric_at(cat, x);
      CHECK(std::abs(g(0, 1)) <= 1e-12);
      const ConformalFactor cf = conformal_factor(cat, ref, x);
      CHECK(cf.lambda == doctest::Approx(std::cosh(v)).epsilon(1e-12));
      CHECK(cf.defect <= 1e-12);
    }
  }
  SUBCASE("a shear is not conformal") {
    const Expr u = Expr::coord(0), v = Expr::coord(1);
    const ChartPatch shear(vec2(-1, -1), vec2(1, 1), GramSpace::euclidean(2),
                           {u + 0.5 * v, v});
    CHECK_THROWS_AS(
        conformal_factor(shear, identity_patch(2, -1, 1), vec2(0.1, 0.1)),
        error);
  }
}

TEST_CASE("second fundamental form on model surfaces") {
  SUBCASE("affine plane has vanishing alpha") {
    const Expr u = Expr::coord(0), v = Expr::coord(1);
    const ChartPatch plane(vec2(-1, -1), vec2(1, 1), GramSpace::euclidean(4),
                           {u + v, u - 2.0 * v, 3.0 * u, Expr::constant(1.0)});
    const SFFData sff = sff_at(plane, vec2(0.3, 0.3));
    CHECK(sff.codim() == 2);
    CHECK(sff.alpha_scale() <= 1e-12);
    CHECK(curvature_at(sff).flat_point());
    // Normal frame really is ambient-orthogonal to the tangents.
    CHECK((sff.tangent.transpose() * sff.ambient_gram * sff.normal)
              .cwiseAbs()
              .maxCoeff() <= 1e-12);
  }
  SUBCASE("circular cylinder principal curvatures") {
    const double r = 2.0;
    const Expr u = Expr::coord(0), v = Expr::coord(1);
    const ChartPatch cyl(vec2(0.1, -1), vec2(1.4, 1), GramSpace::euclidean(3),
                         {r * Expr::cos(u), r * Expr::sin(u), v});
    const SFFData sff = sff_at(cyl, vec2(0.9, 0.2));
    REQUIRE(sff.codim() == 1);
    VectorXd unit_normal(1);
    unit_normal << 1.0 / std::sqrt(sff.normal_gram(0, 0));
    const MatrixXd s = sff.shape_operator(unit_normal);
    Eigen::VectorXd ev =
        Eigen::EigenSolver<MatrixXd>(s).eigenvalues().real().cwiseAbs();
    std::sort(ev.data(), ev.data() + ev.size());
    CHECK(ev[0] <= 1e-12);
    CHECK(ev[1] == doctest::Approx(1.0 / r).epsilon(1e-10));
    const VectorXd h = sff.mean_curvature();
    CHECK(std::abs(h[0] * std::sqrt(sff.normal_gram(0, 0))) ==
          doctest::Approx(1.0 / r).epsilon(1e-10));
  }
  SUBCASE("sphere sectional curvature 1/r^2") {
    const double r = 2.0;
    const Expr th = Expr::coord(0), ph = Expr::coord(1);
    const ChartPatch sph(vec2(0.4, 0.2), vec2(1.2, 1.0),
                         GramSpace::euclidean(3),
                         {r * Expr::sin(th) * Expr::cos(ph),
                          r * Expr::sin(th) * Expr::sin(ph),
                          r * Expr::cos(th)});
    const VectorXd x = vec2(0.7, 0.5);
    const SFFData sff = sff_at(sph, x);
    const CurvatureTensor rt = curvature_at(sff);
    const MatrixXd g = sff.metric;
    const double sec =
        rt.at(0, 1, 1, 0) / (g(0, 0) * g(1, 1) - g(0, 1) * g(0, 1));
    CHECK(sec == doctest::Approx(1.0 / (r * r)).epsilon(1e-8));
    CHECK(!rt.flat_point());

    // Gauss-tensor symmetries.
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k)
          for (int l = 0; l < 2; ++l) {
            CHECK(rt.at(i, j, k, l) ==
                  doctest::Approx(-rt.at(j, i, k, l)).epsilon(1e-10));
            CHECK(rt.at(i, j, k, l) ==
                  doctest::Approx(rt.at(k, l, i, j)).epsilon(1e-10));
            CHECK(std::abs(rt.at(i, j, k, l) + rt.at(j, k, i, l) +
                           rt.at(k, i, j, l)) <= 1e-10);
          }
  }
  SUBCASE("degenerate tangent frame is rejected") {
    const Expr u = Expr::coord(0), v = Expr::coord(1);
    const ChartPatch bad(vec2(-1, -1), vec2(1, 1), GramSpace::euclidean(3),
                         {u + v, u + v, Expr::constant(0.0)});
    CHECK_THROWS_AS(sff_at(bad, vec2(0, 0)), error);
  }
}

TEST_CASE("curvature commutation with the complex structure") {
  // Product of two holomorphic parabola graphs: Kaehler with the standard
  // product complex structure.
  const Expr x1 = Expr::coord(0), y1 = Expr::coord(1);
  const Expr x2 = Expr::coord(2), y2 = Expr::coord(3);
  const ChartPatch prod(
      VectorXd::Constant(4, 0.2), VectorXd::Constant(4, 0.9),
      GramSpace::euclidean(8),
      {x1, y1, x1 * x1 - y1 * y1, 2.0 * x1 * y1, x2, y2, x2 * x2 - y2 * y2,
       2.0 * x2 * y2});
  MatrixXd j = MatrixXd::Zero(4, 4);
  j(1, 0) = j(3, 2) = 1.0;
  j(0, 1) = j(2, 3) = -1.0;
  const VectorXd x = VectorXd::Constant(4, 0.5);
  const SFFData sff = sff_at(prod, x);
  const CurvatureTensor rt = curvature_at(sff);
  CHECK(!rt.flat_point());
  CHECK(kaehler_curvature_check(rt, j, sff.metric) <= 1e-8);

  // Negative control: the round sphere in non-conformal coordinates.
  const Expr th = Expr::coord(0), ph = Expr::coord(1);
  const ChartPatch sph(vec2(0.4, 0.2), vec2(1.2, 1.0),
                       GramSpace::euclidean(3),
                       {Expr::sin(th) * Expr::cos(ph),
                        Expr::sin(th) * Expr::sin(ph), Expr::cos(th)});
  const SFFData ssff = sff_at(sph, vec2(0.5, 0.5));
  MatrixXd j2(2, 2);
  j2 << 0, -1, 1, 0;
  CHECK(kaehler_curvature_check(curvature_at(ssff), j2, ssff.metric) > 1e-3);
}

TEST_CASE("rotation-free shape operator coupling") {
  MatrixXd j(2, 2);
  j << 0, -1, 1, 0;
  MatrixXd a2(2, 2);
  a2 << 1, 0, 0, -1;  // anticommutes with J, J*a2 stays symmetric
  const MatrixXd a1 = j * a2;
  CHECK(min_rotation_coupling_defect(a1, a2, j) <= 1e-12);
  // The relation is rotation-gauge covariant.
  const double c = std::cos(0.7), s = std::sin(0.7);
  CHECK(min_rotation_coupling_defect(c * a1 + s * a2, -s * a1 + c * a2, j) <=
        1e-10);
  CHECK(min_rotation_coupling_defect(MatrixXd::Identity(2, 2),
                                     MatrixXd::Identity(2, 2), j) > 0.5);
}

TEST_CASE("patch JSON round-trip") {
  const ChartPatch cat = catenoid();
  const ChartPatch back = ChartPatch::from_json(cat.to_json());
  CHECK(back.to_json() == cat.to_json());
  const VectorXd x = vec2(0.3, 0.7);
  CHECK((back.value_at(x) - cat.value_at(x)).norm() == 0.0);

  // Minkowski and explicit-Gram ambients survive the round trip.
  const Expr u = Expr::coord(0);
  const ChartPatch mink(VectorXd::Constant(1, 0.0), VectorXd::Constant(1, 1.0),
                        GramSpace::minkowski(3),
                        {u, Expr::constant(0.0), 2.0 * u});
  CHECK(ChartPatch::from_json(mink.to_json()).to_json() == mink.to_json());

  MatrixXd g(2, 2);
  g << 2, 1, 1, 3;
  const ChartPatch custom(VectorXd::Constant(1, 0.0),
                          VectorXd::Constant(1, 1.0), GramSpace(g),
                          {u, u * u});
  const ChartPatch cback = ChartPatch::from_json(custom.to_json());
  CHECK((cback.ambient().gram() - g).norm() == 0.0);
}

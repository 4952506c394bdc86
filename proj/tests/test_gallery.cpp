#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <nlohmann/json.hpp>
#include <random>

#include "ckgeo/gallery.hpp"

using namespace ckgeo;

namespace {

VectorXd random_point(const ChartPatch& p, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> ud(0.0, 1.0);
  VectorXd x(p.domain_dim());
  for (int i = 0; i < x.size(); ++i)
    x[i] = p.lo()[i] + ud(rng) * (p.hi()[i] - p.lo()[i]);
  return x;
}

}  // namespace

TEST_CASE("registry lists and constructs every example") {
  const std::vector<std::string> ids = gallery_ids();
  for (const char* expected :
       {"catenoid-cyl-n4", "product-cat2-cat3", "graph-sumsq-n5", "flat-z2",
        "inv-catenoid-cyl-n2", "inv-graph-z1z2-n2"})
    CHECK(std::find(ids.begin(), ids.end(), expected) != ids.end());
  for (const std::string& id : ids) {
    const GalleryExample e = gallery_get(id);
    CHECK(e.name == id);
    CHECK(e.patch.domain_dim() == e.J.dim());
    // Deterministic construction.
    CHECK(gallery_get(id).patch.to_json() == e.patch.to_json());
  }
}

TEST_CASE("declared conformal factors are exact") {
  std::mt19937_64 rng(53);
  for (const std::string& id :
       {std::string("catenoid-cyl-n2"), std::string("enneper-cyl-n2"),
        std::string("flat-z2"), std::string("inv-catenoid-cyl-n2"),
        std::string("inv-graph-z1z2-n2")}) {
    const GalleryExample e = gallery_get(id);
    for (int it = 0; it < 20; ++it) {
      const VectorXd x = random_point(e.patch, rng);
      CAPTURE(id);
      const ConformalFactor cf = conformal_factor(e.patch, e.reference, x);
      CHECK(cf.defect <= 1e-9);
      CHECK(cf.lambda ==
            doctest::Approx(e.lambda.eval(x)).epsilon(1e-9));
      CHECK(e.kaehler().j_orthogonality_defect(x) <= 1e-10);
    }
  }
}

TEST_CASE("moebius maps") {
  SUBCASE("inversion closed form") {
    const ConformalMap inv = moebius_inversion(VectorXd::Zero(3), 1.0);
    VectorXd x(3);
    x << 2.0, 0.0, 0.0;
    CHECK(inv.lambda.eval(x) == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(inv.map[0].eval(x) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(inv.map[1].eval(x) == 0.0);
  }
  SUBCASE("validation") {
    MatrixXd notq(2, 2);
    notq << 1, 1, 0, 1;
    CHECK_THROWS_AS(moebius_orthogonal(notq), error);
    CHECK_THROWS_AS(moebius_dilation(-1.0, 2), error);
    CHECK_THROWS_AS(moebius_inversion(VectorXd::Zero(2), 0.0), error);
  }
  SUBCASE("image through the inversion center is rejected") {
    const GalleryExample flat = gallery_get("flat-identity");
    const ConformalMap bad = moebius_inversion(VectorXd::Ones(2), 1.0);
    CHECK_THROWS_AS(compose(bad, flat), error);
  }
  SUBCASE("chained factors stay exact") {
    const GalleryExample base = gallery_get("inv-catenoid-cyl-n2");
    const GalleryExample chained =
        compose(moebius_dilation(1.7, base.patch.ambient_dim()), base);
    std::mt19937_64 rng(3);
    for (int it = 0; it < 5; ++it) {
      const VectorXd x = random_point(chained.patch, rng);
      const ConformalFactor cf =
          conformal_factor(chained.patch, chained.reference, x);
      CHECK(cf.lambda ==
            doctest::Approx(chained.lambda.eval(x)).epsilon(1e-9));
    }
  }
}

TEST_CASE("construction guards") {
  CHECK_THROWS_AS(gallery_get("no-such-example"), error);
  CHECK_THROWS_AS(gallery_get("graph-z1z2-n1"), error);
  // Graphs have codimension two, so they cannot enter the product pairing.
  const GalleryExample graph = gallery_get("graph-z1z2-n2");
  const GalleryExample cyl = gallery_get("catenoid-cyl-n2");
  try {
    product_pair(cyl, graph);
    CHECK(false);
  } catch (const error& e) {
    CHECK(e.code() == errc::bad_codim);
  }
}

TEST_CASE("holomorphic graphs are minimal with coupled shape operators") {
  const GalleryExample g = gallery_get("graph-z1z2-n2");
  std::mt19937_64 rng(11);
  for (int it = 0; it < 5; ++it) {
    const VectorXd x = random_point(g.patch, rng);
    const SFFData sff = sff_at(g.patch, x);
    REQUIRE(sff.codim() == 2);
    CHECK(sff.mean_curvature().norm() <= 1e-10);

    // Orthonormal normal frame, then the rotation-free coupling check.
    const Eigen::LLT<MatrixXd> llt(sff.normal_gram);
    const MatrixXd li = MatrixXd(llt.matrixL()).inverse();
    const MatrixXd a1 = sff.shape_operator(li.transpose().col(0));
    const MatrixXd a2 = sff.shape_operator(li.transpose().col(1));
    CHECK(min_rotation_coupling_defect(a1, a2, g.J.matrix()) <= 1e-7);
  }
}

TEST_CASE("expected classifications are attached where pinned") {
  const GalleryExample cyl4 = gallery_get("catenoid-cyl-n4");
  REQUIRE(cyl4.expected.has_value());
  CHECK(cyl4.expected->classification == "CASE_I_REAL_KAEHLER");
  CHECK(cyl4.expected->s == 2);
  CHECK(cyl4.expected->dim_delta == 6);

  const GalleryExample prod = gallery_get("product-cat2-cat3");
  REQUIRE(prod.expected.has_value());
  CHECK(prod.expected->classification == "CASE_I_REAL_KAEHLER");
  CHECK(prod.expected->dim_delta == 6);

  const GalleryExample graph = gallery_get("graph-sumsq-n5");
  REQUIRE(graph.expected.has_value());
  CHECK(graph.expected->classification == "MINIMAL_S4");
  CHECK(graph.expected->s == 4);
  CHECK(graph.expected->dim_delta == 10);

  CHECK(!gallery_get("catenoid-cyl-n2").expected.has_value());
  CHECK(!gallery_get("flat-z2").expected.has_value());
  // Moebius moves never change the expected outcome.
  REQUIRE(gallery_get("inv-catenoid-cyl-n4").expected.has_value());
  CHECK(gallery_get("inv-catenoid-cyl-n4").expected->s == 2);
}

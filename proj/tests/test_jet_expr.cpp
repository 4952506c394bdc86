#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <nlohmann/json.hpp>
#include <random>

#include "ckgeo/expr.hpp"

using namespace ckgeo;

namespace {

Jet jet_of(const Expr& e, const Eigen::VectorXd& x) {
  std::vector<Jet> coords;
  for (int i = 0; i < x.size(); ++i)
    coords.push_back(Jet::variable(static_cast<int>(x.size()), i, x[i]));
  return e.eval(coords);
}

// Central finite differences on a scalar function of d variables.
template <class F>
Eigen::VectorXd fd_grad(const F& f, Eigen::VectorXd x, double h) {
  Eigen::VectorXd g(x.size());
  for (int i = 0; i < x.size(); ++i) {
    const double xi = x[i];
    x[i] = xi + h;
    const double fp = f(x);
    x[i] = xi - h;
    const double fm = f(x);
    x[i] = xi;
    g[i] = (fp - fm) / (2.0 * h);
  }
  return g;
}

}  // namespace

TEST_CASE("jet derivatives match finite differences") {
  // A composite with every node kind that the patch maps use.
  const Expr x = Expr::coord(0), y = Expr::coord(1);
  const Expr f = Expr::exp(Expr::sin(x) * Expr::cosh(y) * 0.3) +
                 Expr::pow(x, 3) * y / (1.0 + y * y) +
                 Expr::log(2.0 + Expr::cos(x)) +
                 Expr::sinh(x * 0.5) * Expr::pow(1.0 + y * y, 0.5);
  auto fval = [&](const Eigen::VectorXd& p) { return f.eval(p); };

  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> ud(-1.0, 1.0);
  for (int it = 0; it < 20; ++it) {
    Eigen::VectorXd p(2);
    p << ud(rng), ud(rng);
    const Jet j = jet_of(f, p);
    CHECK(j.value() == doctest::Approx(f.eval(p)).epsilon(1e-14));

    const Eigen::VectorXd g = fd_grad(fval, p, 1e-5);
    CHECK((j.grad() - g).cwiseAbs().maxCoeff() <= 1e-8);

    // Hessian rows via differentiated gradients.
    for (int i = 0; i < 2; ++i) {
      auto gi = [&](const Eigen::VectorXd& q) {
        return jet_of(f, q).grad()[i];
      };
      const Eigen::VectorXd hrow = fd_grad(gi, p, 1e-5);
      CHECK((j.hess().row(i).transpose() - hrow).cwiseAbs().maxCoeff() <=
            1e-7);
      for (int k = 0; k < 2; ++k) {
        auto hik = [&](const Eigen::VectorXd& q) {
          return jet_of(f, q).hess()(i, k);
        };
        const Eigen::VectorXd trow = fd_grad(hik, p, 2e-4);
        CHECK((j.d3(k).row(i).transpose() - trow).cwiseAbs().maxCoeff() <=
              1e-5);
      }
    }
    // Symmetry of the stored third-order block.
    for (int k = 0; k < 2; ++k)
      CHECK((j.d3(k) - j.d3(k).transpose()).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("jet power edge cases") {
  const Jet x = Jet::variable(1, 0, -2.0);
  const Jet c = pow(x, 3.0);
  CHECK(c.value() == doctest::Approx(-8.0));
  CHECK(c.grad()[0] == doctest::Approx(12.0));
  CHECK(c.hess()(0, 0) == doctest::Approx(-12.0));
  CHECK(c.d3(0)(0, 0) == doctest::Approx(6.0));

  const Jet zero = Jet::variable(1, 0, 0.0);
  CHECK(pow(zero, 2.0).value() == 0.0);
  CHECK(pow(zero, 2.0).hess()(0, 0) == doctest::Approx(2.0));
  CHECK(pow(zero, 0.0).value() == 1.0);

  const Jet half = Jet::variable(1, 0, 0.5);
  CHECK(pow(half, -2.0).value() == doctest::Approx(4.0));
  CHECK(pow(half, -2.0).grad()[0] == doctest::Approx(-16.0));
  CHECK(sqrt(Jet::variable(1, 0, 2.25)).value() == doctest::Approx(1.5));

  CHECK_THROWS_AS(pow(x, 0.5), error);
  CHECK_THROWS_AS(log(x), error);
  CHECK_THROWS_AS(1.0 / zero, error);
}

TEST_CASE("expression JSON round-trip") {
  const Expr x = Expr::coord(0), y = Expr::coord(1);
  const Expr f = Expr::sq_norm({Expr::sin(x), Expr::cosh(y), x * y - 2.0}) /
                 (1.0 + Expr::pow(x, 2));
  const Expr back = Expr::from_json(f.to_json());
  CHECK(back.to_json() == f.to_json());

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> ud(-1.0, 1.0);
  for (int it = 0; it < 50; ++it) {
    Eigen::VectorXd p(2);
    p << ud(rng), ud(rng);
    CHECK(back.eval(p) == f.eval(p));
  }
  CHECK(f.max_coord_index() == 1);

  const std::vector<Expr> comps = {f, x + y, Expr::constant(3.5)};
  const std::vector<Expr> back2 =
      patch_components_from_json(patch_components_to_json(comps));
  REQUIRE(back2.size() == 3);
  Eigen::VectorXd p(2);
  p << 0.3, -0.4;
  for (size_t i = 0; i < comps.size(); ++i)
    CHECK(back2[i].eval(p) == comps[i].eval(p));
}

TEST_CASE("substitution composes structurally") {
  const Expr x = Expr::coord(0), y = Expr::coord(1);
  const Expr f = Expr::exp(x) * y + Expr::pow(y, 2);
  const std::vector<Expr> inner = {Expr::sin(x * y), x - 2.0 * y};
  const Expr g = f.substitute(inner);

  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> ud(-1.0, 1.0);
  for (int it = 0; it < 50; ++it) {
    Eigen::VectorXd p(2);
    p << ud(rng), ud(rng);
    Eigen::VectorXd q(2);
    q << inner[0].eval(p), inner[1].eval(p);
    CHECK(g.eval(p) == doctest::Approx(f.eval(q)).epsilon(1e-14));
  }
}

TEST_CASE("compose node in the JSON format") {
  const Expr x = Expr::coord(0), y = Expr::coord(1);
  const Expr f = Expr::exp(x) + y;
  const std::vector<Expr> inner = {x * y, Expr::constant(1.0)};
  nlohmann::json doc = {
      {"op", "compose"},
      {"outer", f.to_json()},
      {"inner", patch_components_to_json(inner)},
  };
  const Expr g = Expr::from_json(doc);
  Eigen::VectorXd p(2);
  p << 0.7, -0.2;
  CHECK(g.eval(p) ==
        doctest::Approx(std::exp(0.7 * -0.2) + 1.0).epsilon(1e-14));
}

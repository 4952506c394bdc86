#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "ckgeo/gram.hpp"

using namespace ckgeo;

namespace {

MatrixXd random_matrix(int r, int c, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  MatrixXd m(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) m(i, j) = nd(rng);
  return m;
}

}  // namespace

TEST_CASE("signature of elementary Gram matrices") {
  MatrixXd d2(2, 2);
  d2 << 1, 0, 0, -1;
  CHECK(signature_of(d2) == Signature{1, 1, 0});

  // Hyperbolic plane: two null vectors pairing to 1.
  MatrixXd hyp(2, 2);
  hyp << 0, 1, 1, 0;
  CHECK(signature_of(hyp) == Signature{1, 1, 0});

  for (int m : {2, 5, 12}) {
    const GramSpace mink = GramSpace::minkowski(m + 2);
    CHECK(mink.signature() == Signature{m + 1, 1, 0});
    CHECK(mink.is_lorentzian());
  }

  MatrixXd asym(2, 2);
  asym << 0, 1, 0, 0;
  CHECK_THROWS_AS(signature_of(asym), error);
}

TEST_CASE("signature is a congruence invariant") {
  std::mt19937_64 rng(7);
  const std::vector<std::vector<int>> classes = {
      {1, 1, 1, -1}, {1, 1, -1, -1}, {1, 1, 1, 0}, {1, -1, 0, 0}};
  for (const auto& diag : classes) {
    Signature expect;
    const int d = static_cast<int>(diag.size());
    MatrixXd D = MatrixXd::Zero(d, d);
    for (int i = 0; i < d; ++i) {
      D(i, i) = diag[i];
      if (diag[i] > 0)
        ++expect.n_plus;
      else if (diag[i] < 0)
        ++expect.n_minus;
      else
        ++expect.n_zero;
    }
    for (int it = 0; it < 100; ++it) {
      MatrixXd a = random_matrix(d, d, rng);
      while (std::abs(a.determinant()) < 0.1) a = random_matrix(d, d, rng);
      CHECK(signature_of(a.transpose() * D * a) == expect);
    }
  }
}

TEST_CASE("radical of model subspaces") {
  const GramSpace mink = GramSpace::minkowski(3);
  VectorXd delta(3);
  delta << 1, 0, 1;  // light-like

  SUBCASE("null line is its own radical") {
    const Subspace s(mink, delta);
    const Subspace r = radical(s);
    CHECK(r.dim() == 1);
    CHECK(r.contains(delta));
  }
  SUBCASE("definite restriction has trivial radical") {
    const Subspace s(mink, VectorXd(Eigen::Vector3d(1, 0, 0)));
    CHECK(radical(s).dim() == 0);
  }
  SUBCASE("mixed null + space-like span") {
    // Hand oracle: restricted Gram [[0,0],[0,1]], null space = first vector.
    MatrixXd b(3, 2);
    b.col(0) = delta;
    b.col(1) << 0, 1, 0;
    const Subspace r = radical(Subspace(mink, b));
    CHECK(r.dim() == 1);
    CHECK(r.contains(delta));
  }
}

TEST_CASE("radical dimension identity on random subspaces") {
  std::mt19937_64 rng(11);
  MatrixXd g = MatrixXd::Identity(8, 8);
  g.bottomRightCorner(4, 4) *= -1.0;  // (4,4) split metric
  const GramSpace w(g);
  for (int it = 0; it < 50; ++it) {
    const int k = 1 + static_cast<int>(rng() % 6);
    const Subspace s = Subspace::span_of(w, random_matrix(8, k, rng));
    const Subspace sp = orthogonal_complement(s);
    MatrixXd sum(8, s.dim() + sp.dim());
    sum << s.basis(), sp.basis();
    const int dim_sum = rank_of(sum);
    CHECK(radical(s).dim() == s.dim() + sp.dim() - dim_sum);
  }
}

TEST_CASE("orthogonal complements") {
  MatrixXd g = MatrixXd::Identity(8, 8);
  g.bottomRightCorner(4, 4) *= -1.0;
  const GramSpace w(g);

  CHECK(orthogonal_complement(Subspace::full(w)).dim() == 0);

  VectorXd delta = VectorXd::Zero(8);
  delta[0] = 1.0;
  delta[4] = 1.0;  // null in the split metric
  const Subspace comp = orthogonal_complement(Subspace(w, delta));
  CHECK(comp.dim() == 7);
  CHECK(comp.contains(delta));

  std::mt19937_64 rng(3);
  const Subspace s = Subspace::span_of(w, random_matrix(8, 3, rng));
  const Subspace sp = orthogonal_complement(s);
  const MatrixXd pairings = s.basis().transpose() * g * sp.basis();
  CHECK(pairings.cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("null partner construction") {
  SUBCASE("hyperbolic plane closed form") {
    const GramSpace u(MatrixXd((MatrixXd(2, 2) << 1, 0, 0, -1).finished()));
    VectorXd delta(2);
    delta << 1, 1;
    const VectorXd zeta = null_partner(delta, u, Subspace::zero(u));
    CHECK((zeta - 0.5 * VectorXd(Eigen::Vector2d(1, -1))).norm() <= 1e-12);
  }
  SUBCASE("Lorentzian dim 4 avoiding a space-like plane") {
    const GramSpace u = GramSpace::minkowski(4);
    VectorXd delta(4);
    delta << 1, 0, 0, 1;
    MatrixXd avoid(4, 2);
    avoid << 0, 0, 1, 0, 0, 1, 0, 0;  // e2, e3, both orthogonal to delta
    const VectorXd zeta = null_partner(delta, u, Subspace(u, avoid));
    CHECK(std::abs(u.inner(zeta, zeta)) <= 1e-12);
    CHECK(std::abs(u.inner(delta, zeta) - 1.0) <= 1e-12);
    CHECK((avoid.transpose() * u.gram() * zeta).cwiseAbs().maxCoeff() <=
          1e-12);
  }
  SUBCASE("space-like delta has no partner") {
    const GramSpace u = GramSpace::minkowski(3);
    VectorXd delta(3);
    delta << 1, 0, 0;
    CHECK_THROWS_AS(null_partner(delta, u, Subspace::zero(u)), error);
  }
}

TEST_CASE("projection onto nondegenerate subspaces") {
  const GramSpace mink = GramSpace::minkowski(4);
  MatrixXd b(4, 2);
  b << 1, 0, 0, 1, 0, 0, 0.2, 0;  // slightly tilted space-like plane
  const Subspace s(mink, b);

  std::mt19937_64 rng(5);
  std::normal_distribution<double> nd;
  for (int it = 0; it < 20; ++it) {
    VectorXd x(4);
    for (int i = 0; i < 4; ++i) x[i] = nd(rng);
    const VectorXd p = project_onto(x, s);
    CHECK((project_onto(p, s) - p).norm() <= 1e-10 * std::max(1.0, p.norm()));
    // The residual lands in the orthogonal complement: it pairs to zero
    // with S itself.
    CHECK((s.basis().transpose() * mink.gram() * (x - p))
              .cwiseAbs()
              .maxCoeff() <= 1e-10 * std::max(1.0, x.norm()));
  }

  const VectorXd in_s = b.col(0) + 2.0 * b.col(1);
  CHECK((project_onto(in_s, s) - in_s).norm() <= 1e-10);

  VectorXd delta(4);
  delta << 1, 0, 0, 1;
  CHECK_THROWS_AS(project_onto(delta, Subspace(mink, delta), kRankTol),
                  error);
}

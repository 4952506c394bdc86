#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "ckgeo/bilinear.hpp"
#include "ckgeo/chart.hpp"

namespace ckgeo {

struct ExpectedClassification {
  std::string classification;
  int s = 0;
  int dim_delta = -1;  // -1 when not pinned down
};

// A conformal immersion patch with its Kaehler bookkeeping: a constant J
// on chart coordinates, the reference patch whose pullback is the Kaehler
// metric, and the exact conformal factor relating the two.
struct GalleryExample {
  std::string name;
  ChartPatch patch;
  ComplexStructure J;
  ChartPatch reference;
  Expr lambda;
  std::optional<ExpectedClassification> expected;

  KaehlerChart kaehler() const { return {patch, J.matrix(), reference}; }
};

enum class SurfaceId { catenoid, enneper, helicoid };

// Cylinder (u, v, t) -> (S(u, v), t) over a minimal surface in isothermal
// coordinates: an isometric immersion of complex dimension n into
// R^{2n+1}, curved exactly where the surface is.
GalleryExample cylinder_hypersurface(SurfaceId surface, int n);

// Extrinsic product of two isometric codimension-one examples.
GalleryExample product_pair(const GalleryExample& e1,
                            const GalleryExample& e2);

struct MonomialTerm {
  std::complex<double> coeff;
  std::vector<int> exps;  // one exponent per complex variable
};

// Real form of z -> (z, phi(z)) for a holomorphic polynomial phi: C^n -> C.
GalleryExample holomorphic_graph(const std::vector<MonomialTerm>& terms,
                                 int n);

enum class MoebiusKind { translation, orthogonal, dilation, inversion };

// Conformal self-map of (an open subset of) R^N with its exact factor.
struct ConformalMap {
  MoebiusKind kind;
  std::string name;
  int N = 0;
  std::vector<Expr> map;
  Expr lambda;
  // Inversion center; compositions must keep the image away from it.
  std::optional<VectorXd> singular_center;
};

ConformalMap moebius_translation(const VectorXd& t);
ConformalMap moebius_orthogonal(const MatrixXd& q);
ConformalMap moebius_dilation(double a, int n);
ConformalMap moebius_inversion(const VectorXd& center, double radius);

// h after the example's patch, with the exact factor chained.
GalleryExample compose(const ConformalMap& h, const GalleryExample& e);

std::vector<std::string> gallery_ids();
GalleryExample gallery_get(const std::string& id);

}  // namespace ckgeo

#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "ckgeo/jet.hpp"

namespace ckgeo {

// Immutable scalar expression tree over coordinate variables.  Patch maps
// are vectors of these; jets flow through the tree, so every node only has
// to know its own local rule.
//
// Node kinds: coord, const, add, mul, div, pow, exp, log, sin, cos, sinh,
// cosh, norm2 (sum of squares of its children).  Composition is performed
// by coordinate substitution, both programmatically and when loading the
// JSON "compose" node.
class Expr {
 public:
  Expr() : Expr(constant(0.0)) {}

  static Expr coord(int index);
  static Expr constant(double value);
  static Expr pow(const Expr& base, double exponent);
  static Expr exp(const Expr& a);
  static Expr log(const Expr& a);
  static Expr sin(const Expr& a);
  static Expr cos(const Expr& a);
  static Expr sinh(const Expr& a);
  static Expr cosh(const Expr& a);
  static Expr sq_norm(const std::vector<Expr>& components);

  friend Expr operator+(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a, const Expr& b);
  friend Expr operator*(const Expr& a, const Expr& b);
  friend Expr operator/(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a);
  friend Expr operator+(const Expr& a, double c) { return a + constant(c); }
  friend Expr operator+(double c, const Expr& a) { return constant(c) + a; }
  friend Expr operator-(const Expr& a, double c) { return a - constant(c); }
  friend Expr operator-(double c, const Expr& a) { return constant(c) - a; }
  friend Expr operator*(const Expr& a, double c) { return a * constant(c); }
  friend Expr operator*(double c, const Expr& a) { return constant(c) * a; }
  friend Expr operator/(const Expr& a, double c) { return a / constant(c); }
  friend Expr operator/(double c, const Expr& a) { return constant(c) / a; }

  double eval(const Eigen::VectorXd& x) const;
  Jet eval(std::span<const Jet> coords) const;

  // Replace coordinate i by inner[i]: the composition node of the patch
  // format, resolved structurally.
  Expr substitute(const std::vector<Expr>& inner) const;

  int max_coord_index() const;

  nlohmann::json to_json() const;
  static Expr from_json(const nlohmann::json& j);

  // Implementation node access; the node type lives in the .cpp.
  struct Node;
  const Node* node() const;
  static Expr from_node(std::shared_ptr<const Node> node);

 private:
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

nlohmann::json patch_components_to_json(const std::vector<Expr>& comps);
std::vector<Expr> patch_components_from_json(const nlohmann::json& j);

}  // namespace ckgeo

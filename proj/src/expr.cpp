#include "ckgeo/expr.hpp"

#include <map>

#include <nlohmann/json.hpp>

namespace ckgeo {

using nlohmann::json;

enum class Op {
  coord,
  constant,
  add,
  mul,
  divide,
  pow,
  exp_,
  log_,
  sin_,
  cos_,
  sinh_,
  cosh_,
  norm2,
};

struct Expr::Node {
  Op op;
  double payload = 0.0;  // constant value, pow exponent
  int index = 0;         // coord index
  std::vector<Expr> args;
};

namespace {

Expr make_node(Op op, std::vector<Expr> args, double payload = 0.0,
               int index = 0) {
  auto n = std::make_shared<Expr::Node>();
  // Accessed through the friendless path below.
  n->op = op;
  n->payload = payload;
  n->index = index;
  n->args = std::move(args);
  return Expr::from_node(std::move(n));
}

}  // namespace

// Private-constructor trampoline (kept out of the public header).
Expr Expr::from_node(std::shared_ptr<const Node> node) {
  return Expr(std::move(node));
}

Expr Expr::coord(int index) {
  if (index < 0) throw error(errc::bad_params, "negative coordinate index");
  return make_node(Op::coord, {}, 0.0, index);
}
Expr Expr::constant(double value) {
  return make_node(Op::constant, {}, value);
}
Expr Expr::pow(const Expr& base, double exponent) {
  return make_node(Op::pow, {base}, exponent);
}
Expr Expr::exp(const Expr& a) { return make_node(Op::exp_, {a}); }
Expr Expr::log(const Expr& a) { return make_node(Op::log_, {a}); }
Expr Expr::sin(const Expr& a) { return make_node(Op::sin_, {a}); }
Expr Expr::cos(const Expr& a) { return make_node(Op::cos_, {a}); }
Expr Expr::sinh(const Expr& a) { return make_node(Op::sinh_, {a}); }
Expr Expr::cosh(const Expr& a) { return make_node(Op::cosh_, {a}); }
Expr Expr::sq_norm(const std::vector<Expr>& components) {
  return make_node(Op::norm2, components);
}

Expr operator+(const Expr& a, const Expr& b) {
  return make_node(Op::add, {a, b});
}
Expr operator-(const Expr& a, const Expr& b) {
  return make_node(Op::add, {a, make_node(Op::mul, {Expr::constant(-1.0), b})});
}
Expr operator*(const Expr& a, const Expr& b) {
  return make_node(Op::mul, {a, b});
}
Expr operator/(const Expr& a, const Expr& b) {
  return make_node(Op::divide, {a, b});
}
Expr operator-(const Expr& a) {
  return make_node(Op::mul, {Expr::constant(-1.0), a});
}

template <typename Scalar, typename CoordFn>
static Scalar eval_impl(const Expr::Node& n, const CoordFn& coord_at) {
  using ckgeo::cos;
  using ckgeo::cosh;
  using ckgeo::exp;
  using ckgeo::log;
  using ckgeo::pow;
  using ckgeo::sin;
  using ckgeo::sinh;
  using std::cos;
  using std::cosh;
  using std::exp;
  using std::log;
  using std::pow;
  using std::sin;
  using std::sinh;
  auto arg = [&](int i) {
    return eval_impl<Scalar>(*n.args[i].node(), coord_at);
  };
  switch (n.op) {
    case Op::coord:
      return coord_at(n.index);
    case Op::constant:
      return coord_at(-1) * 0.0 + n.payload;  // typed zero + constant
    case Op::add: {
      Scalar s = arg(0);
      for (size_t i = 1; i < n.args.size(); ++i) s += arg(i);
      return s;
    }
    case Op::mul: {
      Scalar s = arg(0);
      for (size_t i = 1; i < n.args.size(); ++i) s = s * arg(i);
      return s;
    }
    case Op::divide:
      return arg(0) / arg(1);
    case Op::pow:
      return pow(arg(0), n.payload);
    case Op::exp_:
      return exp(arg(0));
    case Op::log_:
      return log(arg(0));
    case Op::sin_:
      return sin(arg(0));
    case Op::cos_:
      return cos(arg(0));
    case Op::sinh_:
      return sinh(arg(0));
    case Op::cosh_:
      return cosh(arg(0));
    case Op::norm2: {
      Scalar s = coord_at(-1) * 0.0;
      for (size_t i = 0; i < n.args.size(); ++i) {
        Scalar c = arg(i);
        s += c * c;
      }
      return s;
    }
  }
  throw error(errc::bad_params, "corrupt expression node");
}

const Expr::Node* Expr::node() const { return node_.get(); }

double Expr::eval(const Eigen::VectorXd& x) const {
  return eval_impl<double>(*node_, [&](int i) -> double {
    if (i < 0) return 0.0;
    if (i >= x.size())
      throw error(errc::bad_params, "coordinate index out of range");
    return x[i];
  });
}

Jet Expr::eval(std::span<const Jet> coords) const {
  const int d = coords.empty() ? 0 : coords[0].dim();
  return eval_impl<Jet>(*node_, [&](int i) -> Jet {
    if (i < 0) return Jet::constant(d, 0.0);
    if (i >= static_cast<int>(coords.size()))
      throw error(errc::bad_params, "coordinate index out of range");
    return coords[i];
  });
}

Expr Expr::substitute(const std::vector<Expr>& inner) const {
  const Node& n = *node_;
  if (n.op == Op::coord) {
    if (n.index >= static_cast<int>(inner.size()))
      throw error(errc::bad_params, "composition arity mismatch");
    return inner[n.index];
  }
  if (n.args.empty()) return *this;
  std::vector<Expr> args;
  args.reserve(n.args.size());
  for (const Expr& a : n.args) args.push_back(a.substitute(inner));
  return make_node(n.op, std::move(args), n.payload, n.index);
}

int Expr::max_coord_index() const {
  const Node& n = *node_;
  int m = n.op == Op::coord ? n.index : -1;
  for (const Expr& a : n.args) m = std::max(m, a.max_coord_index());
  return m;
}

json Expr::to_json() const {
  const Node& n = *node_;
  json j;
  switch (n.op) {
    case Op::coord:
      return json{{"op", "coord"}, {"index", n.index}};
    case Op::constant:
      return json{{"op", "const"}, {"value", n.payload}};
    case Op::pow:
      return json{{"op", "pow"},
                  {"base", n.args[0].to_json()},
                  {"exponent", n.payload}};
    default:
      break;
  }
  static const std::map<Op, std::string> names = {
      {Op::add, "add"},   {Op::mul, "mul"},   {Op::divide, "div"},
      {Op::exp_, "exp"},  {Op::log_, "log"},  {Op::sin_, "sin"},
      {Op::cos_, "cos"},  {Op::sinh_, "sinh"}, {Op::cosh_, "cosh"},
      {Op::norm2, "norm2"}};
  j["op"] = names.at(n.op);
  json args = json::array();
  for (const Expr& a : n.args) args.push_back(a.to_json());
  j["args"] = std::move(args);
  return j;
}

Expr Expr::from_json(const json& j) {
  const std::string op = j.at("op").get<std::string>();
  if (op == "coord") return coord(j.at("index").get<int>());
  if (op == "const") return constant(j.at("value").get<double>());
  if (op == "pow")
    return pow(from_json(j.at("base")), j.at("exponent").get<double>());
  if (op == "compose") {
    // {"op":"compose","outer":expr,"inner":[expr,...]} resolved by
    // substitution on load.
    std::vector<Expr> inner;
    for (const auto& e : j.at("inner")) inner.push_back(from_json(e));
    return from_json(j.at("outer")).substitute(inner);
  }
  std::vector<Expr> args;
  for (const auto& e : j.at("args")) args.push_back(from_json(e));
  if (op == "norm2") return sq_norm(args);
  static const std::map<std::string, Op> ops = {
      {"add", Op::add},   {"mul", Op::mul},   {"div", Op::divide},
      {"exp", Op::exp_},  {"log", Op::log_},  {"sin", Op::sin_},
      {"cos", Op::cos_},  {"sinh", Op::sinh_}, {"cosh", Op::cosh_}};
  const auto it = ops.find(op);
  if (it == ops.end())
    throw error(errc::bad_params, "unknown expression op '" + op + "'");
  if (it->second == Op::divide) {
    if (args.size() != 2)
      throw error(errc::bad_params, "div takes two arguments");
    return args[0] / args[1];
  }
  return make_node(it->second, std::move(args));
}

json patch_components_to_json(const std::vector<Expr>& comps) {
  json arr = json::array();
  for (const Expr& c : comps) arr.push_back(c.to_json());
  return arr;
}

std::vector<Expr> patch_components_from_json(const json& j) {
  std::vector<Expr> comps;
  for (const auto& e : j) comps.push_back(Expr::from_json(e));
  return comps;
}

}  // namespace ckgeo

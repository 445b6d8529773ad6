#include <cmath>
#include <sstream>

#include "hyps/symbols.hpp"
#include "symbols/node.hpp"

namespace hyps {

using detail::Node;

class ExprBuilder {
 public:
  static Expr wrap(Node n) { return Expr(std::make_shared<const Node>(std::move(n))); }

  static Expr bump(const Expr& arg, double center, double width, int k);
  static Expr step(const Expr& arg, double edge, double width, int k);
  static Expr bracket(double order, int dim);
  static Expr mollified(const Expr& source, std::shared_ptr<const MollifiedData> data, int k);
};

namespace {

unsigned deps_of(const std::vector<Expr>& children) {
  unsigned d = 0;
  for (const auto& c : children) d |= c.node()->deps;
  return d;
}

void check_axis(int axis) {
  if (axis < 0 || axis > 1) throw Error(ErrorKind::kInvalidArgument, "axis must be 0 or 1");
}

}  // namespace

Expr ExprBuilder::bump(const Expr& arg, double center, double width, int k) {
  if (!(width > 0.0)) throw Error(ErrorKind::kInvalidArgument, "smooth_bump width must be > 0");
  if (arg.is_constant()) {
    return Expr::constant(bump_derivative((arg.constant_value().real() - center) / width, k));
  }
  Node n;
  n.kind = NodeKind::kSmoothBump;
  n.p0 = center;
  n.p1 = width;
  n.deriv = k;
  n.children = {arg};
  n.deps = arg.node()->deps;
  return wrap(std::move(n));
}

Expr ExprBuilder::step(const Expr& arg, double edge, double width, int k) {
  if (!(width > 0.0)) throw Error(ErrorKind::kInvalidArgument, "smooth_step width must be > 0");
  if (arg.is_constant()) {
    return Expr::constant(step_derivative((arg.constant_value().real() - edge) / width, k));
  }
  Node n;
  n.kind = NodeKind::kSmoothStep;
  n.p0 = edge;
  n.p1 = width;
  n.deriv = k;
  n.children = {arg};
  n.deps = arg.node()->deps;
  return wrap(std::move(n));
}

Expr ExprBuilder::bracket(double order, int dim) {
  if (dim < 1 || dim > 2) throw Error(ErrorKind::kInvalidArgument, "bracket dim must be 1 or 2");
  if (order == 0.0) return Expr::constant(1.0);
  Node n;
  n.kind = NodeKind::kJapaneseBracket;
  n.p0 = order;
  n.bdim = dim;
  n.deps = detail::kDepXi0 | (dim == 2 ? detail::kDepXi1 : 0u);
  return wrap(std::move(n));
}

Expr ExprBuilder::mollified(const Expr& source, std::shared_ptr<const MollifiedData> data, int k) {
  Node n;
  n.kind = NodeKind::kMollifiedInX;
  n.axis = data->axis;
  n.deriv = k;
  n.p0 = data->omega;
  n.p1 = data->period;
  n.source = std::make_shared<const Expr>(source);
  n.moll = std::move(data);
  n.deps = detail::dep_x(n.axis);
  return wrap(std::move(n));
}

Expr::Expr() {
  static const std::shared_ptr<const Node> zero = std::make_shared<const Node>();
  node_ = zero;
}

Expr::Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

Expr Expr::constant(Complex c) {
  Node n;
  n.kind = NodeKind::kConstant;
  n.value = c;
  return ExprBuilder::wrap(std::move(n));
}

Expr Expr::x(int axis) {
  check_axis(axis);
  Node n;
  n.kind = NodeKind::kCoordX;
  n.axis = axis;
  n.deps = detail::dep_x(axis);
  return ExprBuilder::wrap(std::move(n));
}

Expr Expr::xi(int axis) {
  check_axis(axis);
  Node n;
  n.kind = NodeKind::kCoordXi;
  n.axis = axis;
  n.deps = detail::dep_xi(axis);
  return ExprBuilder::wrap(std::move(n));
}

Expr Expr::t() {
  Node n;
  n.kind = NodeKind::kCoordT;
  n.deps = detail::kDepT;
  return ExprBuilder::wrap(std::move(n));
}

Expr Expr::sum(std::vector<Expr> terms) {
  Complex c{0.0, 0.0};
  std::vector<Expr> flat;
  for (auto& e : terms) {
    if (e.is_constant()) {
      c += e.constant_value();
    } else if (e.kind() == NodeKind::kSum) {
      for (const auto& sub : e.children()) {
        if (sub.is_constant()) {
          c += sub.constant_value();
        } else {
          flat.push_back(sub);
        }
      }
    } else {
      flat.push_back(std::move(e));
    }
  }
  if (c != Complex{0.0, 0.0}) flat.push_back(constant(c));
  if (flat.empty()) return constant(0.0);
  if (flat.size() == 1) return flat.front();
  Node n;
  n.kind = NodeKind::kSum;
  n.deps = deps_of(flat);
  n.children = std::move(flat);
  return ExprBuilder::wrap(std::move(n));
}

Expr Expr::product(std::vector<Expr> factors) {
  Complex c{1.0, 0.0};
  std::vector<Expr> flat;
  for (auto& e : factors) {
    if (e.is_constant()) {
      c *= e.constant_value();
    } else if (e.kind() == NodeKind::kProduct) {
      for (const auto& sub : e.children()) {
        if (sub.is_constant()) {
          c *= sub.constant_value();
        } else {
          flat.push_back(sub);
        }
      }
    } else {
      flat.push_back(std::move(e));
    }
  }
  if (c == Complex{0.0, 0.0}) return constant(0.0);
  if (flat.empty()) return constant(c);
  if (c != Complex{1.0, 0.0}) flat.insert(flat.begin(), constant(c));
  if (flat.size() == 1) return flat.front();
  Node n;
  n.kind = NodeKind::kProduct;
  n.deps = deps_of(flat);
  n.children = std::move(flat);
  return ExprBuilder::wrap(std::move(n));
}

Expr Expr::power(const Expr& base, int exponent) {
  if (exponent < 0) throw Error(ErrorKind::kInvalidArgument, "power exponent must be >= 0");
  if (exponent == 0) return constant(1.0);
  if (exponent == 1) return base;
  if (base.is_constant()) {
    Complex v{1.0, 0.0};
    for (int i = 0; i < exponent; ++i) v *= base.constant_value();
    return constant(v);
  }
  Node n;
  n.kind = NodeKind::kPower;
  n.exponent = exponent;
  n.children = {base};
  n.deps = base.node()->deps;
  return ExprBuilder::wrap(std::move(n));
}

Expr Expr::sin(const Expr& arg) {
  if (arg.is_constant()) return constant(std::sin(arg.constant_value()));
  Node n;
  n.kind = NodeKind::kSin;
  n.children = {arg};
  n.deps = arg.node()->deps;
  return ExprBuilder::wrap(std::move(n));
}

Expr Expr::cos(const Expr& arg) {
  if (arg.is_constant()) return constant(std::cos(arg.constant_value()));
  Node n;
  n.kind = NodeKind::kCos;
  n.children = {arg};
  n.deps = arg.node()->deps;
  return ExprBuilder::wrap(std::move(n));
}

Expr Expr::smooth_bump(const Expr& arg, double center, double width, int deriv) {
  return ExprBuilder::bump(arg, center, width, deriv);
}

Expr Expr::smooth_step(const Expr& arg, double edge, double width, int deriv) {
  return ExprBuilder::step(arg, edge, width, deriv);
}

Expr Expr::japanese_bracket(double order, int dim) { return ExprBuilder::bracket(order, dim); }

Expr Expr::mollified_in_x(const Expr& source, double omega, double period, int axis,
                          double transition_width) {
  check_axis(axis);
  if (!(omega > 0.0)) throw Error(ErrorKind::kInvalidArgument, "omega must be > 0");
  if (!(period > 0.0)) throw Error(ErrorKind::kInvalidArgument, "period must be > 0");
  if (source.is_constant()) return source;
  auto data = detail::mollified_weights(source, omega, period, axis, transition_width);
  return ExprBuilder::mollified(source, std::move(data), 0);
}

Expr Expr::rough(std::shared_ptr<const RoughCoefficient> coefficient) {
  if (!coefficient) throw Error(ErrorKind::kInvalidArgument, "null rough coefficient");
  check_axis(coefficient->axis());
  Node n;
  n.kind = NodeKind::kRough;
  n.axis = coefficient->axis();
  n.rough = std::move(coefficient);
  n.deps = detail::dep_x(n.axis);
  return ExprBuilder::wrap(std::move(n));
}

NodeKind Expr::kind() const { return node_->kind; }
bool Expr::is_constant() const { return node_->kind == NodeKind::kConstant; }
bool Expr::is_zero() const {
  return is_constant() && node_->value == Complex{0.0, 0.0};
}
Complex Expr::constant_value() const { return node_->value; }

bool Expr::depends_on_t() const { return (node_->deps & detail::kDepT) != 0; }
bool Expr::depends_on_x(int axis) const { return (node_->deps & detail::dep_x(axis)) != 0; }
bool Expr::depends_on_xi(int axis) const { return (node_->deps & detail::dep_xi(axis)) != 0; }
bool Expr::depends_on_any_x() const {
  return (node_->deps & (detail::kDepX0 | detail::kDepX1)) != 0;
}
bool Expr::depends_on_any_xi() const {
  return (node_->deps & (detail::kDepXi0 | detail::kDepXi1)) != 0;
}

const std::vector<Expr>& Expr::children() const { return node_->children; }
int Expr::axis() const { return node_->axis; }
int Expr::exponent() const { return node_->exponent; }
int Expr::deriv_order() const { return node_->deriv; }
double Expr::param0() const { return node_->p0; }
double Expr::param1() const { return node_->p1; }
int Expr::bracket_dim() const { return node_->bdim; }
const Expr& Expr::source() const {
  static const Expr none;
  return node_->source ? *node_->source : none;
}
const std::shared_ptr<const MollifiedData>& Expr::mollified() const { return node_->moll; }
const std::shared_ptr<const RoughCoefficient>& Expr::rough_coefficient() const {
  return node_->rough;
}

Complex Expr::eval(const SymbolPoint& p) const {
  const Node& n = *node_;
  switch (n.kind) {
    case NodeKind::kConstant:
      return n.value;
    case NodeKind::kCoordX:
      return p.x[n.axis];
    case NodeKind::kCoordXi:
      return p.xi[n.axis];
    case NodeKind::kCoordT:
      return p.t;
    case NodeKind::kSum: {
      Complex s{0.0, 0.0};
      for (const auto& c : n.children) s += c.eval(p);
      return s;
    }
    case NodeKind::kProduct: {
      Complex s{1.0, 0.0};
      for (const auto& c : n.children) {
        s *= c.eval(p);
        if (s == Complex{0.0, 0.0}) break;
      }
      return s;
    }
    case NodeKind::kPower: {
      const Complex b = n.children[0].eval(p);
      Complex s{1.0, 0.0};
      for (int i = 0; i < n.exponent; ++i) s *= b;
      return s;
    }
    case NodeKind::kSin:
      return std::sin(n.children[0].eval(p));
    case NodeKind::kCos:
      return std::cos(n.children[0].eval(p));
    case NodeKind::kSmoothBump:
      return bump_derivative((n.children[0].eval(p).real() - n.p0) / n.p1, n.deriv);
    case NodeKind::kSmoothStep:
      return step_derivative((n.children[0].eval(p).real() - n.p0) / n.p1, n.deriv);
    case NodeKind::kJapaneseBracket: {
      double r2 = 1.0 + p.xi[0] * p.xi[0];
      if (n.bdim == 2) r2 += p.xi[1] * p.xi[1];
      return std::pow(r2, 0.5 * n.p0);
    }
    case NodeKind::kMollifiedInX:
      return detail::eval_mollified(*n.moll, n.deriv, p.x[n.axis]);
    case NodeKind::kRough:
      return (*n.rough)(p.x[n.axis]);
  }
  return 0.0;
}

namespace {

// Derivative with respect to one variable; `var` is 0 for t, 1 + axis for x,
// 3 + axis for xi.
Expr diff(const Expr& e, int var);

unsigned var_mask(int var) {
  if (var == 0) return detail::kDepT;
  if (var <= 2) return detail::dep_x(var - 1);
  return detail::dep_xi(var - 3);
}

Expr diff(const Expr& e, int var) {
  if ((e.node()->deps & var_mask(var)) == 0) return Expr::constant(0.0);
  switch (e.kind()) {
    case NodeKind::kConstant:
      return Expr::constant(0.0);
    case NodeKind::kCoordX:
    case NodeKind::kCoordXi:
    case NodeKind::kCoordT:
      return Expr::constant(1.0);
    case NodeKind::kSum: {
      std::vector<Expr> terms;
      for (const auto& c : e.children()) terms.push_back(diff(c, var));
      return Expr::sum(std::move(terms));
    }
    case NodeKind::kProduct: {
      const auto& ch = e.children();
      std::vector<Expr> terms;
      for (std::size_t i = 0; i < ch.size(); ++i) {
        Expr di = diff(ch[i], var);
        if (di.is_zero()) continue;
        std::vector<Expr> f;
        f.reserve(ch.size());
        for (std::size_t j = 0; j < ch.size(); ++j) f.push_back(j == i ? di : ch[j]);
        terms.push_back(Expr::product(std::move(f)));
      }
      return Expr::sum(std::move(terms));
    }
    case NodeKind::kPower: {
      const Expr& b = e.children()[0];
      return Expr::product({Expr::constant(static_cast<double>(e.exponent())),
                            Expr::power(b, e.exponent() - 1), diff(b, var)});
    }
    case NodeKind::kSin: {
      const Expr& a = e.children()[0];
      return Expr::product({Expr::cos(a), diff(a, var)});
    }
    case NodeKind::kCos: {
      const Expr& a = e.children()[0];
      return Expr::product({Expr::constant(-1.0), Expr::sin(a), diff(a, var)});
    }
    case NodeKind::kSmoothBump: {
      const Expr& a = e.children()[0];
      return Expr::product({Expr::constant(1.0 / e.param1()),
                            ExprBuilder::bump(a, e.param0(), e.param1(), e.deriv_order() + 1),
                            diff(a, var)});
    }
    case NodeKind::kSmoothStep: {
      const Expr& a = e.children()[0];
      return Expr::product({Expr::constant(1.0 / e.param1()),
                            ExprBuilder::step(a, e.param0(), e.param1(), e.deriv_order() + 1),
                            diff(a, var)});
    }
    case NodeKind::kJapaneseBracket: {
      const int axis = var - 3;
      const double m = e.param0();
      return Expr::product({Expr::constant(m), Expr::xi(axis),
                            ExprBuilder::bracket(m - 2.0, e.bracket_dim())});
    }
    case NodeKind::kMollifiedInX:
      return ExprBuilder::mollified(e.source(), e.mollified(), e.deriv_order() + 1);
    case NodeKind::kRough:
      throw Error(ErrorKind::kUnsupportedDerivativeOrder,
                  "rough coefficient has no classical x-derivative; wrap it in mollified_in_x");
  }
  return Expr::constant(0.0);
}

}  // namespace

Expr Expr::diff_t() const { return diff(*this, 0); }
Expr Expr::diff_x(int axis) const {
  check_axis(axis);
  return diff(*this, 1 + axis);
}
Expr Expr::diff_xi(int axis) const {
  check_axis(axis);
  return diff(*this, 3 + axis);
}

Expr Expr::derivative(int d, const MultiIndex& alpha, const MultiIndex& beta) const {
  if (d < 0 || alpha[0] < 0 || alpha[1] < 0 || beta[0] < 0 || beta[1] < 0) {
    throw Error(ErrorKind::kInvalidArgument, "negative derivative order");
  }
  Expr e = *this;
  for (int i = 0; i < d; ++i) e = e.diff_t();
  for (int a = 0; a < 2; ++a) {
    for (int i = 0; i < alpha[a]; ++i) e = e.diff_xi(a);
  }
  for (int a = 0; a < 2; ++a) {
    for (int i = 0; i < beta[a]; ++i) e = e.diff_x(a);
  }
  return e;
}

namespace {

void print(std::ostringstream& os, const Expr& e) {
  auto list = [&](const char* name) {
    os << name << '(';
    bool first = true;
    for (const auto& c : e.children()) {
      if (!first) os << ", ";
      first = false;
      print(os, c);
    }
    os << ')';
  };
  switch (e.kind()) {
    case NodeKind::kConstant: {
      const Complex v = e.constant_value();
      if (v.imag() == 0.0) {
        os << v.real();
      } else {
        os << '(' << v.real() << (v.imag() < 0 ? "-" : "+") << std::abs(v.imag()) << "i)";
      }
      return;
    }
    case NodeKind::kCoordX: os << 'x' << e.axis(); return;
    case NodeKind::kCoordXi: os << "xi" << e.axis(); return;
    case NodeKind::kCoordT: os << 't'; return;
    case NodeKind::kSum: list("sum"); return;
    case NodeKind::kProduct: list("prod"); return;
    case NodeKind::kPower:
      os << "pow(";
      print(os, e.children()[0]);
      os << ", " << e.exponent() << ')';
      return;
    case NodeKind::kSin: list("sin"); return;
    case NodeKind::kCos: list("cos"); return;
    case NodeKind::kSmoothBump:
    case NodeKind::kSmoothStep:
      os << (e.kind() == NodeKind::kSmoothBump ? "bump" : "step");
      if (e.deriv_order() > 0) os << '^' << e.deriv_order();
      os << '(';
      print(os, e.children()[0]);
      os << "; " << e.param0() << ", " << e.param1() << ')';
      return;
    case NodeKind::kJapaneseBracket: os << "<xi>^" << e.param0(); return;
    case NodeKind::kMollifiedInX:
      os << "moll";
      if (e.deriv_order() > 0) os << '^' << e.deriv_order();
      os << '(';
      print(os, e.source());
      os << "; omega=" << e.param0() << ')';
      return;
    case NodeKind::kRough: os << "rough:" << e.rough_coefficient()->kind_name(); return;
  }
}

}  // namespace

std::string Expr::to_string() const {
  std::ostringstream os;
  os.precision(17);
  print(os, *this);
  return os.str();
}

Expr Expr::operator-() const { return product({constant(-1.0), *this}); }
Expr operator+(const Expr& a, const Expr& b) { return Expr::sum({a, b}); }
Expr operator-(const Expr& a, const Expr& b) { return Expr::sum({a, -b}); }
Expr operator*(const Expr& a, const Expr& b) { return Expr::product({a, b}); }
Expr operator*(Complex c, const Expr& e) { return Expr::product({Expr::constant(c), e}); }

Complex eval_symbol(const SymbolExpr& s, double t, const std::array<double, 2>& x,
                    const std::array<double, 2>& xi, int d, const MultiIndex& alpha,
                    const MultiIndex& beta, int max_order) {
  if (d > max_order || order_of(alpha) > max_order || order_of(beta) > max_order) {
    throw Error(ErrorKind::kUnsupportedDerivativeOrder,
                "derivative order exceeds configured maximum " + std::to_string(max_order));
  }
  if (s.dim == 1 && (alpha[1] != 0 || beta[1] != 0)) {
    throw Error(ErrorKind::kDimensionMismatch, "second-axis derivative of a 1-D symbol");
  }
  SymbolPoint p{t, x, xi};
  const Complex v = s.expr.derivative(d, alpha, beta).eval(p);
  if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
    throw Error(ErrorKind::kNonFinite, "symbol evaluation is not finite");
  }
  return v;
}

}  // namespace hyps

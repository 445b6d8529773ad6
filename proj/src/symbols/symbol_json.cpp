#include "symbols/symbol_json.hpp"

#include <memory>

namespace hyps {

using nlohmann::json;

void config_error(const std::string& path, const std::string& msg) {
  throw Error(ErrorKind::kConfigInvalid, path + ": " + msg);
}

namespace {

double number_at(const json& j, const std::string& key, const std::string& path) {
  if (!j.contains(key)) config_error(path + "." + key, "missing field");
  if (!j.at(key).is_number()) config_error(path + "." + key, "expected a number");
  return j.at(key).get<double>();
}

int int_at(const json& j, const std::string& key, const std::string& path, int fallback,
           bool required) {
  if (!j.contains(key)) {
    if (required) config_error(path + "." + key, "missing field");
    return fallback;
  }
  if (!j.at(key).is_number_integer()) config_error(path + "." + key, "expected an integer");
  return j.at(key).get<int>();
}

std::vector<double> numbers(const json& j, const std::string& key, const std::string& path) {
  if (!j.contains(key)) config_error(path + "." + key, "missing field");
  const json& a = j.at(key);
  if (!a.is_array()) config_error(path + "." + key, "expected an array of numbers");
  std::vector<double> v;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!a[i].is_number()) config_error(path + "." + key + "[" + std::to_string(i) + "]",
                                        "expected a number");
    v.push_back(a[i].get<double>());
  }
  return v;
}

int axis_name(const std::string& s, const std::string& stem) {
  if (s == stem || s == stem + "0") return 0;
  if (s == stem + "1") return 1;
  return -1;
}

}  // namespace

RoughCoefficient rough_from_json(const json& j, const std::string& path) {
  if (!j.is_object()) config_error(path, "expected an object");
  if (!j.contains("kind") || !j.at("kind").is_string()) config_error(path + ".kind", "missing field");
  const std::string kind = j.at("kind").get<std::string>();
  const double period = number_at(j, "period", path);
  const int axis = int_at(j, "axis", path, 0, false);
  try {
    if (kind == "piecewise_constant") {
      return RoughCoefficient::piecewise_constant(numbers(j, "breakpoints", path),
                                                  numbers(j, "values", path), period, axis);
    }
    if (kind == "piecewise_linear") {
      return RoughCoefficient::piecewise_linear(numbers(j, "nodes", path),
                                                numbers(j, "values", path), period, axis);
    }
    if (kind == "table") {
      return RoughCoefficient::table(numbers(j, "values", path), period, axis);
    }
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::kConfigInvalid) throw;
    config_error(path, e.what());
  }
  throw Error(ErrorKind::kUnsupportedRoughKind, path + ".kind: unknown rough kind '" + kind + "'");
}

json rough_to_json(const RoughCoefficient& c) {
  json j;
  j["kind"] = c.kind_name();
  switch (c.kind()) {
    case RoughCoefficient::Kind::kPiecewiseConstant: j["breakpoints"] = c.points(); break;
    case RoughCoefficient::Kind::kPiecewiseLinear: j["nodes"] = c.points(); break;
    case RoughCoefficient::Kind::kTable: break;
  }
  j["values"] = c.values();
  j["period"] = c.period();
  j["axis"] = c.axis();
  return j;
}

Expr expr_from_json(const json& j, const std::string& path) {
  if (j.is_number()) return Expr::constant(j.get<double>());
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "t") return Expr::t();
    // Check xi before x: "xi" also starts with 'x'.
    if (int a = axis_name(s, "xi"); a >= 0) return Expr::xi(a);
    if (int a = axis_name(s, "x"); a >= 0) return Expr::x(a);
    config_error(path, "unknown variable '" + s + "'");
  }
  if (!j.is_object() || j.size() != 1) {
    config_error(path, "expected a number, a variable name or a single-key object");
  }
  const std::string tag = j.begin().key();
  const json& body = j.begin().value();
  const std::string sub = path + "." + tag;
  auto list = [&]() {
    if (!body.is_array() || body.empty()) config_error(sub, "expected a non-empty array");
    std::vector<Expr> v;
    for (std::size_t i = 0; i < body.size(); ++i) {
      v.push_back(expr_from_json(body[i], sub + "[" + std::to_string(i) + "]"));
    }
    return v;
  };
  auto need_object = [&]() {
    if (!body.is_object()) config_error(sub, "expected an object");
  };
  auto child = [&](const char* key) {
    if (!body.contains(key)) config_error(sub + "." + key, "missing field");
    return expr_from_json(body.at(key), sub + "." + key);
  };

  if (tag == "const") {
    if (body.is_number()) return Expr::constant(body.get<double>());
    if (body.is_array() && body.size() == 2 && body[0].is_number() && body[1].is_number()) {
      return Expr::constant(Complex(body[0].get<double>(), body[1].get<double>()));
    }
    config_error(sub, "expected a number or [re, im]");
  }
  if (tag == "sum") return Expr::sum(list());
  if (tag == "product") return Expr::product(list());
  if (tag == "sin") return Expr::sin(expr_from_json(body, sub));
  if (tag == "cos") return Expr::cos(expr_from_json(body, sub));
  if (tag == "power") {
    need_object();
    const int n = int_at(body, "exponent", sub, 0, true);
    if (n < 0) config_error(sub + ".exponent", "must be >= 0");
    return Expr::power(child("base"), n);
  }
  if (tag == "bump" || tag == "step") {
    need_object();
    const double c = number_at(body, tag == "bump" ? "center" : "edge", sub);
    const double w = number_at(body, "width", sub);
    if (!(w > 0.0)) config_error(sub + ".width", "must be > 0");
    const int k = int_at(body, "deriv", sub, 0, false);
    if (k < 0) config_error(sub + ".deriv", "must be >= 0");
    return tag == "bump" ? Expr::smooth_bump(child("arg"), c, w, k)
                         : Expr::smooth_step(child("arg"), c, w, k);
  }
  if (tag == "bracket") {
    need_object();
    const int dim = int_at(body, "dim", sub, 1, false);
    if (dim < 1 || dim > 2) config_error(sub + ".dim", "must be 1 or 2");
    return Expr::japanese_bracket(number_at(body, "order", sub), dim);
  }
  if (tag == "mollified") {
    need_object();
    const double omega = number_at(body, "omega", sub);
    const double period = number_at(body, "period", sub);
    if (!(omega > 0.0)) config_error(sub + ".omega", "must be > 0");
    if (!(period > 0.0)) config_error(sub + ".period", "must be > 0");
    const int axis = int_at(body, "axis", sub, 0, false);
    if (axis < 0 || axis > 1) config_error(sub + ".axis", "must be 0 or 1");
    const double width = body.contains("transition") ? number_at(body, "transition", sub) : 1.0;
    if (!(width > 0.0)) config_error(sub + ".transition", "must be > 0");
    const int k = int_at(body, "deriv", sub, 0, false);
    if (k < 0) config_error(sub + ".deriv", "must be >= 0");
    Expr e;
    try {
      e = Expr::mollified_in_x(child("source"), omega, period, axis, width);
    } catch (const Error& err) {
      if (err.kind() == ErrorKind::kConfigInvalid) throw;
      config_error(sub, err.what());
    }
    for (int i = 0; i < k; ++i) e = e.diff_x(axis);
    return e;
  }
  if (tag == "rough") {
    return Expr::rough(std::make_shared<const RoughCoefficient>(rough_from_json(body, sub)));
  }
  config_error(path, "unknown node '" + tag + "'");
}

json expr_to_json(const Expr& e) {
  auto list = [&](const char* tag) {
    json a = json::array();
    for (const auto& c : e.children()) a.push_back(expr_to_json(c));
    return json{{tag, a}};
  };
  switch (e.kind()) {
    case NodeKind::kConstant: {
      const Complex v = e.constant_value();
      if (v.imag() == 0.0) return v.real();
      return json{{"const", json::array({v.real(), v.imag()})}};
    }
    case NodeKind::kCoordX: return "x" + std::to_string(e.axis());
    case NodeKind::kCoordXi: return "xi" + std::to_string(e.axis());
    case NodeKind::kCoordT: return "t";
    case NodeKind::kSum: return list("sum");
    case NodeKind::kProduct: return list("product");
    case NodeKind::kPower:
      return json{{"power", {{"base", expr_to_json(e.children()[0])}, {"exponent", e.exponent()}}}};
    case NodeKind::kSin: return json{{"sin", expr_to_json(e.children()[0])}};
    case NodeKind::kCos: return json{{"cos", expr_to_json(e.children()[0])}};
    case NodeKind::kSmoothBump:
    case NodeKind::kSmoothStep: {
      const bool bump = e.kind() == NodeKind::kSmoothBump;
      json b{{"arg", expr_to_json(e.children()[0])},
             {bump ? "center" : "edge", e.param0()},
             {"width", e.param1()}};
      if (e.deriv_order() > 0) b["deriv"] = e.deriv_order();
      return json{{bump ? "bump" : "step", b}};
    }
    case NodeKind::kJapaneseBracket:
      return json{{"bracket", {{"order", e.param0()}, {"dim", e.bracket_dim()}}}};
    case NodeKind::kMollifiedInX: {
      const auto& m = *e.mollified();
      json b{{"source", expr_to_json(e.source())},
             {"omega", m.omega},
             {"period", m.period},
             {"axis", m.axis},
             {"transition", m.transition_width}};
      if (e.deriv_order() > 0) b["deriv"] = e.deriv_order();
      return json{{"mollified", b}};
    }
    case NodeKind::kRough: return json{{"rough", rough_to_json(*e.rough_coefficient())}};
  }
  return 0.0;
}

Expr expr_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    config_error("$", std::string("malformed JSON: ") + e.what());
  }
  return expr_from_json(j, "$");
}

std::string expr_to_json_text(const Expr& e) { return expr_to_json(e).dump(); }

}  // namespace hyps

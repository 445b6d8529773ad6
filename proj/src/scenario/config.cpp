#include <fstream>
#include <set>
#include <sstream>

#include "hyps/scenario.hpp"
#include "symbols/symbol_json.hpp"

namespace hyps {

using nlohmann::json;

namespace {

// Field access with JSON-path error messages and unknown-key rejection.
class Reader {
 public:
  Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) config_error(path_, "expected an object");
  }

  bool has(const char* key) const { return j_.contains(key); }
  std::string at(const char* key) const { return path_ + "." + key; }
  const json& raw(const char* key) const {
    used_.insert(key);
    if (!j_.contains(key)) config_error(at(key), "missing field");
    return j_.at(key);
  }

  double num(const char* key) const {
    const json& v = raw(key);
    if (!v.is_number()) config_error(at(key), "expected a number");
    return v.get<double>();
  }
  double num(const char* key, double fallback) const { return has(key) ? num(key) : mark(key, fallback); }
  int integer(const char* key) const {
    const json& v = raw(key);
    if (!v.is_number_integer()) config_error(at(key), "expected an integer");
    return v.get<int>();
  }
  int integer(const char* key, int fallback) const {
    return has(key) ? integer(key) : mark(key, fallback);
  }
  bool boolean(const char* key, bool fallback) const {
    if (!has(key)) return mark(key, fallback);
    const json& v = raw(key);
    if (!v.is_boolean()) config_error(at(key), "expected true or false");
    return v.get<bool>();
  }
  std::string str(const char* key) const {
    const json& v = raw(key);
    if (!v.is_string()) config_error(at(key), "expected a string");
    return v.get<std::string>();
  }
  std::string str(const char* key, const std::string& fallback) const {
    return has(key) ? str(key) : mark(key, fallback);
  }
  std::vector<double> nums(const char* key) const {
    const json& v = raw(key);
    if (!v.is_array()) config_error(at(key), "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_number()) config_error(at(key) + "[" + std::to_string(i) + "]", "expected a number");
      out.push_back(v[i].get<double>());
    }
    return out;
  }
  std::array<double, 2> point(const char* key, int dim) const {
    const auto v = nums(key);
    if (static_cast<int>(v.size()) != dim) {
      config_error(at(key), "expected " + std::to_string(dim) + " coordinates");
    }
    return {v[0], dim == 2 ? v[1] : 0.0};
  }
  Expr expr(const char* key) const { return expr_from_json(raw(key), at(key)); }

  // Rejects keys that were never read.
  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!used_.count(it.key())) config_error(path_ + "." + it.key(), "unknown field");
    }
  }

 private:
  template <class T>
  T mark(const char* key, T v) const {
    used_.insert(key);
    return v;
  }

  const json& j_;
  std::string path_;
  mutable std::set<std::string> used_;
};

const char* field_kind_name(FieldSpec::Kind k) {
  switch (k) {
    case FieldSpec::Kind::kExpr: return "expr";
    case FieldSpec::Kind::kGaussian: return "gaussian";
    case FieldSpec::Kind::kDelta: return "delta";
    case FieldSpec::Kind::kStep: return "step";
    case FieldSpec::Kind::kBandlimited: return "bandlimited";
  }
  return "expr";
}

FieldSpec parse_field(const json& j, const std::string& path, int dim) {
  Reader r(j, path);
  FieldSpec f;
  const std::string kind = r.str("kind");
  if (kind == "expr") {
    f.kind = FieldSpec::Kind::kExpr;
    f.expr = r.expr("expr");
    if (f.expr.depends_on_t() || f.expr.depends_on_any_xi()) {
      config_error(r.at("expr"), "field expressions may depend on x only");
    }
  } else if (kind == "gaussian") {
    f.kind = FieldSpec::Kind::kGaussian;
    f.center = r.point("center", dim);
    f.width = r.num("width");
    if (!(f.width > 0.0)) config_error(r.at("width"), "must be > 0");
    f.width_exponent = r.num("width_exponent", 0.0);
    if (f.width_exponent < 0.0) config_error(r.at("width_exponent"), "must be >= 0");
  } else if (kind == "delta") {
    f.kind = FieldSpec::Kind::kDelta;
    f.center = r.point("center", dim);
  } else if (kind == "step") {
    f.kind = FieldSpec::Kind::kStep;
    f.lo = r.num("lo");
    f.hi = r.num("hi");
    if (!(f.hi > f.lo)) config_error(r.at("hi"), "must exceed lo");
  } else if (kind == "bandlimited") {
    f.kind = FieldSpec::Kind::kBandlimited;
    const json& m = r.raw("modes");
    const std::string mp = r.at("modes");
    if (!m.is_array() || m.empty()) config_error(mp, "expected a non-empty array");
    const std::size_t width = dim == 1 ? 3 : 4;
    for (std::size_t i = 0; i < m.size(); ++i) {
      const std::string ip = mp + "[" + std::to_string(i) + "]";
      if (!m[i].is_array() || m[i].size() != width) {
        config_error(ip, dim == 1 ? "expected [k, re, im]" : "expected [k0, k1, re, im]");
      }
      for (std::size_t c = 0; c < width; ++c) {
        if (!m[i][c].is_number()) config_error(ip, "expected numbers");
        if (c + 2 < width && !m[i][c].is_number_integer()) config_error(ip, "mode indices must be integers");
      }
      std::array<double, 4> e{};
      e[0] = m[i][0].get<double>();
      e[1] = dim == 2 ? m[i][1].get<double>() : 0.0;
      e[2] = m[i][width - 2].get<double>();
      e[3] = m[i][width - 1].get<double>();
      f.modes.push_back(e);
    }
  } else {
    config_error(r.at("kind"), "unknown field kind '" + kind + "'");
  }
  f.amplitude = r.num("amplitude", 1.0);
  f.mollify = r.boolean("mollify", f.kind == FieldSpec::Kind::kDelta);
  if (f.kind == FieldSpec::Kind::kDelta && !f.mollify) {
    config_error(r.at("mollify"), "delta data must be mollified");
  }
  r.finish();
  return f;
}

json field_to_json(const FieldSpec& f, int dim) {
  json j{{"kind", field_kind_name(f.kind)}};
  auto pt = [&](const std::array<double, 2>& p) {
    return dim == 1 ? json::array({p[0]}) : json::array({p[0], p[1]});
  };
  switch (f.kind) {
    case FieldSpec::Kind::kExpr: j["expr"] = expr_to_json(f.expr); break;
    case FieldSpec::Kind::kGaussian:
      j["center"] = pt(f.center);
      j["width"] = f.width;
      j["width_exponent"] = f.width_exponent;
      break;
    case FieldSpec::Kind::kDelta: j["center"] = pt(f.center); break;
    case FieldSpec::Kind::kStep:
      j["lo"] = f.lo;
      j["hi"] = f.hi;
      break;
    case FieldSpec::Kind::kBandlimited: {
      json m = json::array();
      for (const auto& e : f.modes) {
        if (dim == 1) {
          m.push_back({static_cast<int>(e[0]), e[2], e[3]});
        } else {
          m.push_back({static_cast<int>(e[0]), static_cast<int>(e[1]), e[2], e[3]});
        }
      }
      j["modes"] = m;
      break;
    }
  }
  j["amplitude"] = f.amplitude;
  j["mollify"] = f.mollify;
  return j;
}

CoefficientSpec parse_coefficient(const json& j, const std::string& path) {
  if (j.is_object() && j.contains("expr")) {
    Reader r(j, path);
    Expr e = r.expr("expr");
    r.finish();
    return CoefficientSpec::smooth(std::move(e));
  }
  return CoefficientSpec::rough(rough_from_json(j, path));
}

json coefficient_to_json(const CoefficientSpec& c) {
  if (c.is_rough()) return rough_to_json(*std::get<1>(c.value));
  return json{{"expr", expr_to_json(std::get<0>(c.value))}};
}

SymbolSpec parse_symbol(const json& j, const std::string& path, const Grid& grid) {
  Reader r(j, path);
  SymbolSpec s;
  const std::string kind = r.str("kind");
  if (kind == "smooth") {
    s.kind = SymbolSpec::Kind::kSmooth;
    s.a1 = r.expr("a1");
    s.a0 = r.has("a0") ? r.expr("a0") : Expr();
  } else if (kind == "rough") {
    s.kind = SymbolSpec::Kind::kRough;
    s.rough.dim = grid.dim;
    s.rough.period = r.num("period", grid.L);
    const json& sp = r.raw("speeds");
    if (!sp.is_array() || static_cast<int>(sp.size()) != grid.dim) {
      config_error(r.at("speeds"), "expected one coefficient per axis");
    }
    for (std::size_t i = 0; i < sp.size(); ++i) {
      s.rough.speeds.push_back(parse_coefficient(sp[i], r.at("speeds") + "[" + std::to_string(i) + "]"));
    }
    if (r.has("lower")) s.rough.lower = parse_coefficient(r.raw("lower"), r.at("lower"));
    if (r.has("lower_scale")) {
      const auto v = r.nums("lower_scale");
      if (v.size() != 2) config_error(r.at("lower_scale"), "expected [re, im]");
      s.rough.lower_scale = Complex(v[0], v[1]);
    }
    s.rough.transition_width = r.num("transition", 1.0);
    if (!(s.rough.transition_width > 0.0)) config_error(r.at("transition"), "must be > 0");
    s.k = r.integer("k", 1);
    if (s.k < 1) config_error(r.at("k"), "must be >= 1");
  } else {
    config_error(r.at("kind"), "expected 'smooth' or 'rough'");
  }
  if (r.has("x_independent_outside")) {
    s.x_independent_outside = r.num("x_independent_outside");
    if (!(*s.x_independent_outside > 0.0)) config_error(r.at("x_independent_outside"), "must be > 0");
  }
  r.finish();
  return s;
}

json symbol_to_json(const SymbolSpec& s) {
  json j;
  if (s.kind == SymbolSpec::Kind::kSmooth) {
    j["kind"] = "smooth";
    j["a1"] = expr_to_json(s.a1);
    j["a0"] = expr_to_json(s.a0);
  } else {
    j["kind"] = "rough";
    j["period"] = s.rough.period;
    json sp = json::array();
    for (const auto& c : s.rough.speeds) sp.push_back(coefficient_to_json(c));
    j["speeds"] = sp;
    if (s.rough.lower) j["lower"] = coefficient_to_json(*s.rough.lower);
    j["lower_scale"] = {s.rough.lower_scale.real(), s.rough.lower_scale.imag()};
    j["transition"] = s.rough.transition_width;
    j["k"] = s.k;
  }
  if (s.x_independent_outside) j["x_independent_outside"] = *s.x_independent_outside;
  return j;
}

DataSpec parse_data(const json& j, const std::string& path, int dim) {
  Reader r(j, path);
  DataSpec d;
  d.g = parse_field(r.raw("g"), r.at("g"), dim);
  if (r.has("f")) {
    const json& f = r.raw("f");
    if (!f.is_array()) config_error(r.at("f"), "expected an array of forcing terms");
    for (std::size_t i = 0; i < f.size(); ++i) {
      Reader t(f[i], r.at("f") + "[" + std::to_string(i) + "]");
      ForcingTermSpec term;
      term.tau = t.expr("tau");
      if (term.tau.depends_on_any_x() || term.tau.depends_on_any_xi()) {
        config_error(t.at("tau"), "tau may depend on t only");
      }
      term.phi = parse_field(t.raw("phi"), t.at("phi"), dim);
      t.finish();
      d.f.push_back(std::move(term));
    }
  }
  const std::string scale = r.str("scale", "none");
  if (scale == "none") {
    d.scale = DataSpec::Scale::kNone;
  } else if (scale == "negligible") {
    d.scale = DataSpec::Scale::kNegligible;
  } else if (scale == "power") {
    d.scale = DataSpec::Scale::kPower;
    d.scale_power = r.num("scale_power");
  } else {
    config_error(r.at("scale"), "expected 'none', 'negligible' or 'power'");
  }
  r.finish();
  return d;
}

json data_to_json(const DataSpec& d, int dim) {
  json j{{"g", field_to_json(d.g, dim)}};
  json f = json::array();
  for (const auto& t : d.f) f.push_back({{"tau", expr_to_json(t.tau)}, {"phi", field_to_json(t.phi, dim)}});
  j["f"] = f;
  switch (d.scale) {
    case DataSpec::Scale::kNone: j["scale"] = "none"; break;
    case DataSpec::Scale::kNegligible: j["scale"] = "negligible"; break;
    case DataSpec::Scale::kPower:
      j["scale"] = "power";
      j["scale_power"] = d.scale_power;
      break;
  }
  return j;
}

// Parameter keys accepted by each check type.
const std::vector<std::pair<std::string, std::set<std::string>>>& check_catalog() {
  static const std::vector<std::pair<std::string, std::set<std::string>>> c = {
      {"energy", {}},
      {"gronwall", {}},
      {"unitarity", {"tol"}},
      {"transport", {"speed", "tol", "dts", "ratio", "ratio_tol", "floor"}},
      {"cascade", {"max_order"}},
      {"cases", {}},
      {"moderateness", {"max_alpha"}},
      {"negligible", {"q_max"}},
      {"association", {"probes", "reference", "speed", "factor", "terminal_tol"}},
      {"classical_identity", {"tol", "data"}},
      {"remainder", {"part", "symbol", "tol", "M", "L", "Ms"}},
      {"ginf", {"expect", "data", "cap", "slack"}},
  };
  return c;
}

void check_number(const json& p, const char* key, const std::string& path, bool positive) {
  if (!p.contains(key)) return;
  if (!p.at(key).is_number()) config_error(path + "." + key, "expected a number");
  if (positive && !(p.at(key).get<double>() > 0.0)) config_error(path + "." + key, "must be > 0");
}

void check_int(const json& p, const char* key, const std::string& path, int lo) {
  if (!p.contains(key)) return;
  if (!p.at(key).is_number_integer()) config_error(path + "." + key, "expected an integer");
  if (p.at(key).get<int>() < lo) config_error(path + "." + key, "must be >= " + std::to_string(lo));
}

void check_point(const json& p, const char* key, const std::string& path, int dim) {
  if (!p.contains(key)) return;
  const json& v = p.at(key);
  if (!v.is_array() || static_cast<int>(v.size()) != dim) {
    config_error(path + "." + key, "expected " + std::to_string(dim) + " numbers");
  }
  for (const auto& x : v) {
    if (!x.is_number()) config_error(path + "." + key, "expected numbers");
  }
}

CheckSpec parse_check(const json& j, const std::string& path, const Grid& grid) {
  if (!j.is_object()) config_error(path, "expected an object");
  if (!j.contains("type") || !j.at("type").is_string()) config_error(path + ".type", "missing field");
  CheckSpec c;
  c.type = j.at("type").get<std::string>();
  const std::set<std::string>* keys = nullptr;
  for (const auto& [name, k] : check_catalog()) {
    if (name == c.type) keys = &k;
  }
  if (!keys) config_error(path + ".type", "unknown check '" + c.type + "'");
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (it.key() == "type") continue;
    if (!keys->count(it.key())) config_error(path + "." + it.key(), "unknown field for check '" + c.type + "'");
    c.params[it.key()] = it.value();
  }
  const json& p = c.params;
  for (const char* k : {"tol", "ratio", "ratio_tol", "floor", "terminal_tol", "slack", "L"}) {
    check_number(p, k, path, true);
  }
  for (const char* k : {"max_order", "max_alpha", "cap"}) check_int(p, k, path, 0);
  check_int(p, "q_max", path, 1);
  check_int(p, "factor", path, 2);
  check_int(p, "M", path, 4);
  check_point(p, "speed", path, grid.dim);
  if (p.contains("dts")) {
    const json& d = p.at("dts");
    if (!d.is_array() || d.size() < 2) config_error(path + ".dts", "expected >= 2 step sizes");
    for (const auto& x : d) {
      if (!x.is_number() || !(x.get<double>() > 0.0)) config_error(path + ".dts", "expected positive numbers");
    }
  }
  if (p.contains("Ms")) {
    const json& m = p.at("Ms");
    if (!m.is_array() || m.size() < 2) config_error(path + ".Ms", "expected >= 2 grid sizes");
    for (const auto& x : m) {
      if (!x.is_number_integer() || x.get<int>() < 4) config_error(path + ".Ms", "expected integers >= 4");
    }
  }
  if (p.contains("expect") && !p.at("expect").is_boolean()) config_error(path + ".expect", "expected true or false");
  if (p.contains("symbol")) c.params["symbol"] = expr_to_json(expr_from_json(p.at("symbol"), path + ".symbol"));
  if (p.contains("data")) {
    Reader r(p.at("data"), path + ".data");
    const FieldSpec g = parse_field(r.raw("g"), r.at("g"), grid.dim);
    r.finish();
    c.params["data"] = {{"g", field_to_json(g, grid.dim)}};
  }
  if (c.type == "remainder") {
    if (!p.contains("part") || !p.at("part").is_string()) config_error(path + ".part", "missing field");
    const std::string part = p.at("part").get<std::string>();
    if (part != "x_independent" && part != "oracle" && part != "stability" && part != "defect") {
      config_error(path + ".part", "expected x_independent, oracle, stability or defect");
    }
    if (!p.contains("symbol")) config_error(path + ".symbol", "missing field");
  }
  if (c.type == "association") {
    if (!p.contains("probes") || !p.at("probes").is_array() || p.at("probes").empty()) {
      config_error(path + ".probes", "expected a non-empty array");
    }
    for (std::size_t i = 0; i < p.at("probes").size(); ++i) {
      const std::string ip = path + ".probes[" + std::to_string(i) + "]";
      Reader r(p.at("probes")[i], ip);
      r.point("center", grid.dim);
      if (!(r.num("width") > 0.0)) config_error(ip + ".width", "must be > 0");
      r.finish();
    }
    const std::string ref = p.value("reference", std::string("high_resolution"));
    if (ref != "exact_transport" && ref != "high_resolution") {
      config_error(path + ".reference", "expected exact_transport or high_resolution");
    }
    if (ref == "exact_transport" && !p.contains("speed")) config_error(path + ".speed", "missing field");
  }
  if (c.type == "transport" && !p.contains("speed")) config_error(path + ".speed", "missing field");
  if (c.type == "ginf" && !p.contains("expect")) config_error(path + ".expect", "missing field");
  return c;
}

}  // namespace

ScenarioConfig parse_config(const json& j) {
  Reader r(j, "$");
  ScenarioConfig c;
  c.name = r.str("name");
  c.description = r.str("description", "");
  {
    const json& s = r.raw("seed");
    if (!s.is_number_unsigned()) config_error(r.at("seed"), "expected a non-negative integer");
    c.seed = s.get<std::uint64_t>();
  }
  {
    Reader g(r.raw("grid"), r.at("grid"));
    c.grid.dim = g.integer("n");
    c.grid.M = g.integer("M");
    c.grid.L = g.num("L");
    g.finish();
    if (c.grid.dim < 1 || c.grid.dim > 2) config_error("$.grid.n", "must be 1 or 2");
    if (c.grid.M < 4 || (c.grid.M & (c.grid.M - 1)) != 0) config_error("$.grid.M", "must be a power of 2 >= 4");
    if (!(c.grid.L > 0.0)) config_error("$.grid.L", "must be > 0");
  }
  c.T = r.num("T");
  if (!(c.T > 0.0)) config_error(r.at("T"), "must be > 0");
  c.symbol = parse_symbol(r.raw("symbol"), r.at("symbol"), c.grid);
  c.data = parse_data(r.raw("data"), r.at("data"), c.grid.dim);
  if (r.has("sweep")) {
    Reader s(r.raw("sweep"), r.at("sweep"));
    SweepSpec sw;
    sw.eps0 = s.num("eps0");
    sw.ratio = s.num("ratio");
    sw.count = s.integer("count");
    if (!(sw.eps0 > 0.0 && sw.eps0 <= 1.0)) config_error(s.at("eps0"), "must lie in (0, 1]");
    if (!(sw.ratio > 0.0 && sw.ratio < 1.0)) config_error(s.at("ratio"), "must lie in (0, 1)");
    if (sw.count < 2) config_error(s.at("count"), "must be >= 2");
    c.max_order = s.integer("max_alpha", 0);
    if (c.max_order < 0) config_error(s.at("max_alpha"), "must be >= 0");
    s.finish();
    c.sweep = sw;
  }
  if (r.has("solve")) {
    Reader s(r.raw("solve"), r.at("solve"));
    if (s.has("dt")) {
      c.dt = s.num("dt");
      if (!(*c.dt > 0.0)) config_error(s.at("dt"), "must be > 0");
    }
    c.stride = s.integer("stride", 8);
    if (c.stride < 1) config_error(s.at("stride"), "must be >= 1");
    s.finish();
  }
  if (r.has("thresholds")) {
    Reader t(r.raw("thresholds"), r.at("thresholds"));
    c.thresholds.log_type_residual = t.num("log_type_residual", c.thresholds.log_type_residual);
    c.thresholds.p_max = t.integer("p_max", c.thresholds.p_max);
    c.thresholds.min_points = t.integer("min_points", c.thresholds.min_points);
    c.thresholds.min_decades = t.num("min_decades", c.thresholds.min_decades);
    t.finish();
  }
  {
    const json& ch = r.raw("checks");
    if (!ch.is_array() || ch.empty()) config_error(r.at("checks"), "expected a non-empty array");
    for (std::size_t i = 0; i < ch.size(); ++i) {
      c.checks.push_back(parse_check(ch[i], r.at("checks") + "[" + std::to_string(i) + "]", c.grid));
    }
  }
  if (r.has("outputs")) {
    Reader o(r.raw("outputs"), r.at("outputs"));
    c.out_dir = o.str("dir", "");
    o.finish();
  }
  c.jobs = r.integer("jobs", 1);
  if (c.jobs < 1) config_error(r.at("jobs"), "must be >= 1");
  r.finish();
  validate_config(c);
  return c;
}

ScenarioConfig parse_config_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    config_error("$", std::string("malformed JSON: ") + e.what());
  }
  return parse_config(j);
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error(ErrorKind::kIo, "cannot open " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config_text(ss.str());
}

json config_to_json(const ScenarioConfig& c) {
  json j;
  j["name"] = c.name;
  j["description"] = c.description;
  j["seed"] = c.seed;
  j["grid"] = {{"n", c.grid.dim}, {"M", c.grid.M}, {"L", c.grid.L}};
  j["T"] = c.T;
  j["symbol"] = symbol_to_json(c.symbol);
  j["data"] = data_to_json(c.data, c.grid.dim);
  if (c.sweep) {
    j["sweep"] = {{"eps0", c.sweep->eps0},
                  {"ratio", c.sweep->ratio},
                  {"count", c.sweep->count},
                  {"max_alpha", c.max_order}};
  }
  json s{{"stride", c.stride}};
  if (c.dt) s["dt"] = *c.dt;
  j["solve"] = s;
  j["thresholds"] = {{"log_type_residual", c.thresholds.log_type_residual},
                     {"p_max", c.thresholds.p_max},
                     {"min_points", c.thresholds.min_points},
                     {"min_decades", c.thresholds.min_decades}};
  json ch = json::array();
  for (const auto& k : c.checks) {
    json e = k.params;
    e["type"] = k.type;
    ch.push_back(e);
  }
  j["checks"] = ch;
  j["outputs"] = {{"dir", c.out_dir}};
  j["jobs"] = c.jobs;
  return j;
}

std::string config_to_text(const ScenarioConfig& c) { return config_to_json(c).dump(2); }

FieldSpec parse_field_spec(const json& j, const std::string& path, int dim) {
  return parse_field(j, path, dim);
}

void validate_config(const ScenarioConfig& c) {
  auto needs_eps = [](const FieldSpec& f) {
    return f.mollify || f.kind == FieldSpec::Kind::kDelta || f.width_exponent != 0.0;
  };
  bool eps_data = needs_eps(c.data.g) || c.data.scale != DataSpec::Scale::kNone;
  for (const auto& t : c.data.f) eps_data = eps_data || needs_eps(t.phi);
  if (!c.sweep) {
    if (eps_data) config_error("$.sweep", "missing field (data depend on eps)");
    if (c.symbol.kind == SymbolSpec::Kind::kRough) {
      config_error("$.sweep", "missing field (rough symbols are regularized per eps)");
    }
  }
  if (c.symbol.kind == SymbolSpec::Kind::kSmooth && c.grid.dim == 1) {
    for (const Expr* e : {&c.symbol.a1, &c.symbol.a0}) {
      if (e->depends_on_x(1) || e->depends_on_xi(1)) {
        config_error("$.symbol", "1-D symbol depends on a second axis");
      }
    }
  }
  for (std::size_t i = 0; i < c.checks.size(); ++i) {
    const auto& k = c.checks[i];
    const std::string path = "$.checks[" + std::to_string(i) + "]";
    static const std::set<std::string> sweep_checks = {"moderateness", "negligible", "association",
                                                       "classical_identity", "ginf"};
    if (sweep_checks.count(k.type) && !c.sweep) {
      config_error("$.sweep", "missing field (required by check '" + k.type + "')");
    }
    if (k.type == "moderateness" && k.params.value("max_alpha", 3) > c.max_order) {
      config_error("$.sweep.max_alpha", "must cover the moderateness orders");
    }
    if (k.type == "transport") {
      if (c.symbol.kind != SymbolSpec::Kind::kSmooth) config_error(path, "transport needs a smooth symbol");
      const auto gk = c.data.g.kind;
      if (gk == FieldSpec::Kind::kDelta || c.data.g.mollify || c.data.g.width_exponent != 0.0 ||
          !c.data.f.empty()) {
        config_error("$.data", "transport needs unforced, unmollified, eps-independent data");
      }
    }
    if (k.type == "classical_identity" && c.symbol.kind != SymbolSpec::Kind::kSmooth) {
      config_error(path, "classical_identity needs an eps-independent symbol");
    }
    if (k.type == "association" && k.params.value("reference", std::string()) == "exact_transport" &&
        c.data.g.kind != FieldSpec::Kind::kDelta) {
      config_error("$.data.g", "exact_transport pairings need delta data");
    }
    if (k.type == "remainder" && c.grid.dim != 1) {
      config_error(path, "remainder checks are 1-D");
    }
  }
}

}  // namespace hyps

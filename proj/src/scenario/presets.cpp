#include <map>

#include "hyps/scenario.hpp"

namespace hyps {

namespace {

struct PresetEntry {
  const char* summary;
  const char* json;
};

// Budgets are recorded in docs/presets.md.
const std::map<std::string, PresetEntry>& catalog() {
  static const std::map<std::string, PresetEntry> c = {
      {"transport_smoke",
       {"constant-speed transport, exact shift oracle and dt-halving order",
        R"({
  "name": "transport_smoke",
  "description": "a = xi, M = 256, smooth periodic Gaussian data, T = 1, dt = 1e-3",
  "seed": 12345,
  "grid": {"n": 1, "M": 256, "L": 6.283185307179586},
  "T": 1.0,
  "symbol": {"kind": "smooth", "a1": "xi0"},
  "data": {"g": {"kind": "gaussian", "center": [3.141592653589793], "width": 0.5}},
  "solve": {"dt": 1e-3, "stride": 8},
  "checks": [
    {"type": "energy"},
    {"type": "gronwall"},
    {"type": "unitarity", "tol": 1e-10},
    {"type": "transport", "speed": [1.0], "tol": 1e-6, "dts": [1e-2, 5e-3, 2.5e-3],
     "ratio": 16.0, "ratio_tol": 0.2, "floor": 1e-12}
  ]
})"}},
      {"unitary_multiplier",
       {"real x-independent order-1 multiplier conserves the L2 norm",
        R"({
  "name": "unitary_multiplier",
  "description": "a = <xi>, band-limited data, M = 64",
  "seed": 12345,
  "grid": {"n": 1, "M": 64, "L": 6.283185307179586},
  "T": 1.0,
  "symbol": {"kind": "smooth", "a1": {"bracket": {"order": 1.0, "dim": 1}}},
  "data": {"g": {"kind": "bandlimited", "modes": [[1, 1.0, 0.0], [3, 0.5, 0.25], [-2, 0.3, 0.0]]}},
  "solve": {"dt": 1e-3, "stride": 8},
  "checks": [
    {"type": "energy"},
    {"type": "gronwall"},
    {"type": "unitarity", "tol": 1e-10}
  ]
})"}},
      {"variable_speed_smooth",
       {"x-dependent speed with complex lower-order term and forcing",
        R"({
  "name": "variable_speed_smooth",
  "description": "a = (2 + sin x) xi + 0.2 cos x + 0.1 i, forced, M = 128",
  "seed": 12345,
  "grid": {"n": 1, "M": 128, "L": 6.283185307179586},
  "T": 1.0,
  "symbol": {"kind": "smooth",
             "a1": {"product": [{"sum": [2.0, {"sin": "x0"}]}, "xi0"]},
             "a0": {"sum": [{"product": [0.2, {"cos": "x0"}]}, {"const": [0.0, 0.1]}]}},
  "data": {"g": {"kind": "gaussian", "center": [3.141592653589793], "width": 0.4},
           "f": [{"tau": {"sin": "t"}, "phi": {"kind": "gaussian", "center": [2.0], "width": 0.5}}]},
  "solve": {"stride": 4},
  "checks": [
    {"type": "energy"},
    {"type": "gronwall"},
    {"type": "cascade", "max_order": 3},
    {"type": "cases"}
  ]
})"}},
      {"piecewise_speed_logtype",
       {"one-way wave with a jump in the speed, log-type mollification, moderateness",
        R"({
  "name": "piecewise_speed_logtype",
  "description": "c = 1 on [0, pi), 2 on [pi, 2 pi), k = 1, eps in [1e-6, 1e-1]",
  "seed": 12345,
  "grid": {"n": 1, "M": 256, "L": 6.283185307179586},
  "T": 1.0,
  "symbol": {"kind": "rough", "k": 1,
             "speeds": [{"kind": "piecewise_constant", "breakpoints": [0.0, 3.141592653589793],
                         "values": [1.0, 2.0], "period": 6.283185307179586}]},
  "data": {"g": {"kind": "gaussian", "center": [1.5707963267948966], "width": 0.5}},
  "sweep": {"eps0": 0.1, "ratio": 0.1, "count": 6, "max_alpha": 3},
  "solve": {"stride": 8},
  "checks": [
    {"type": "energy"},
    {"type": "gronwall"},
    {"type": "cascade", "max_order": 3},
    {"type": "moderateness", "max_alpha": 3}
  ]
})"}},
      {"delta_association",
       {"transported delta: weak pairings converge; band-limited data stay classical",
        R"({
  "name": "delta_association",
  "description": "a = xi, delta at x = 2 mollified per eps, eps in [4.9e-4, 0.5]",
  "seed": 12345,
  "grid": {"n": 1, "M": 256, "L": 6.283185307179586},
  "T": 1.0,
  "symbol": {"kind": "smooth", "a1": "xi0"},
  "data": {"g": {"kind": "delta", "center": [2.0]}},
  "sweep": {"eps0": 0.5, "ratio": 0.25, "count": 6},
  "solve": {"dt": 2e-3, "stride": 50},
  "checks": [
    {"type": "energy"},
    {"type": "gronwall"},
    {"type": "association", "reference": "exact_transport", "speed": [1.0], "terminal_tol": 1e-2,
     "probes": [{"center": [2.5], "width": 0.3}, {"center": [3.0], "width": 0.3},
                {"center": [3.5], "width": 0.3}]},
    {"type": "classical_identity", "tol": 1e-10,
     "data": {"g": {"kind": "bandlimited", "modes": [[1, 1.0, 0.0], [2, 0.5, -0.5]], "mollify": true}}}
  ]
})"}},
      {"negligible_uniqueness",
       {"exp(-1/eps)-scaled data give a negligible solution family",
        R"({
  "name": "negligible_uniqueness",
  "description": "piecewise speed, g_eps = exp(-1/eps) g, eps in [1e-4, 1e-1]",
  "seed": 12345,
  "grid": {"n": 1, "M": 256, "L": 6.283185307179586},
  "T": 1.0,
  "symbol": {"kind": "rough", "k": 1,
             "speeds": [{"kind": "piecewise_constant", "breakpoints": [0.0, 3.141592653589793],
                         "values": [1.0, 2.0], "period": 6.283185307179586}]},
  "data": {"g": {"kind": "gaussian", "center": [1.5707963267948966], "width": 0.5},
           "scale": "negligible"},
  "sweep": {"eps0": 0.1, "ratio": 0.1778279410038923, "count": 5},
  "solve": {"stride": 8},
  "checks": [
    {"type": "energy"},
    {"type": "gronwall"},
    {"type": "negligible", "q_max": 10}
  ]
})"}},
      {"adjoint_remainder_desk",
       {"adjoint symbol remainder against the dense-matrix adjoint, M = 32",
        R"({
  "name": "adjoint_remainder_desk",
  "description": "a = (1 + 0.5 bump(x; pi, 3)) xi on L = 2 pi, M = 32",
  "seed": 12345,
  "grid": {"n": 1, "M": 32, "L": 6.283185307179586},
  "T": 0.5,
  "symbol": {"kind": "smooth",
             "a1": {"product": [{"sum": [1.0, {"product": [0.5, {"bump": {"arg": "x0", "center": 3.141592653589793, "width": 3.0}}]}]}, "xi0"]}},
  "data": {"g": {"kind": "gaussian", "center": [3.141592653589793], "width": 0.6}},
  "solve": {"stride": 4},
  "checks": [
    {"type": "energy"},
    {"type": "gronwall"},
    {"type": "remainder", "part": "x_independent", "tol": 1e-10,
     "symbol": {"sum": [{"bracket": {"order": 1.0, "dim": 1}}, {"product": [0.5, "xi0"]}]}},
    {"type": "remainder", "part": "oracle", "tol": 5e-2,
     "symbol": {"product": [{"sum": [1.0, {"product": [0.5, {"bump": {"arg": "x0", "center": 3.141592653589793, "width": 3.0}}]}]}, "xi0"]}},
    {"type": "remainder", "part": "stability", "tol": 0.2,
     "symbol": {"product": [{"sum": [1.0, {"product": [0.5, {"bump": {"arg": "x0", "center": 3.141592653589793, "width": 3.0}}]}]}, "xi0"]}},
    {"type": "remainder", "part": "defect", "tol": 1.1, "Ms": [64, 128, 256],
     "symbol": {"product": [{"sum": [2.0, {"sin": "x0"}]}, "xi0"]}}
  ]
})"}},
      {"ginf_regularity",
       {"uniform derivative exponents for smooth data, not for shrinking data",
        R"({
  "name": "ginf_regularity",
  "description": "a = (1.5 + 0.5 sin x) xi, M = 512, eps in [1e-4, 1e-1], orders d + |alpha| <= 4",
  "seed": 12345,
  "grid": {"n": 1, "M": 512, "L": 6.283185307179586},
  "T": 1.0,
  "symbol": {"kind": "smooth", "a1": {"product": [{"sum": [1.5, {"product": [0.5, {"sin": "x0"}]}]}, "xi0"]}},
  "data": {"g": {"kind": "gaussian", "center": [1.5707963267948966], "width": 0.5}},
  "sweep": {"eps0": 0.1, "ratio": 0.1778279410038923, "count": 5},
  "solve": {"stride": 8},
  "checks": [
    {"type": "energy"},
    {"type": "gronwall"},
    {"type": "ginf", "expect": true, "cap": 4, "slack": 0.1},
    {"type": "ginf", "expect": false, "cap": 4, "slack": 0.1,
     "data": {"g": {"kind": "gaussian", "center": [3.141592653589793], "width": 1.0,
                    "width_exponent": 0.3333333333333333}}}
  ]
})"}},
  };
  return c;
}

}  // namespace

std::vector<std::string> preset_names() {
  std::vector<std::string> out;
  for (const auto& [name, e] : catalog()) out.push_back(name);
  return out;
}

ScenarioConfig preset(const std::string& name) {
  const auto it = catalog().find(name);
  if (it == catalog().end()) {
    throw Error(ErrorKind::kConfigInvalid, "$: unknown preset '" + name + "'");
  }
  return parse_config_text(it->second.json);
}

std::string preset_summary(const std::string& name) {
  const auto it = catalog().find(name);
  if (it == catalog().end()) return {};
  return it->second.summary;
}

}  // namespace hyps

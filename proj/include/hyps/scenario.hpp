#pragma once

#include <array>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "hyps/asymptotics.hpp"
#include "hyps/cauchy.hpp"
#include "hyps/regularization.hpp"
#include "hyps/symbols.hpp"

namespace hyps {

// A function on the torus, possibly depending on eps.
struct FieldSpec {
  enum class Kind { kExpr, kGaussian, kDelta, kStep, kBandlimited };
  Kind kind = Kind::kExpr;
  Expr expr;                            // kExpr: expression in x
  std::array<double, 2> center{0.0, 0.0};
  double width = 1.0;                   // gaussian sigma, step smoothing
  double width_exponent = 0.0;          // gaussian sigma * eps^width_exponent
  double amplitude = 1.0;
  double lo = 0.0, hi = 0.0;            // kStep: indicator of [lo, hi) along x0
  std::vector<std::array<double, 4>> modes;  // kBandlimited: {k0, k1, re, im}
  // Multiply the spectrum by psi(eps |xi|); always on for deltas.
  bool mollify = false;
};

struct ForcingTermSpec {
  Expr tau;
  FieldSpec phi;
};

struct DataSpec {
  enum class Scale { kNone, kNegligible, kPower };
  FieldSpec g;
  std::vector<ForcingTermSpec> f;
  Scale scale = Scale::kNone;
  double scale_power = 0.0;  // kPower: data * eps^scale_power
};

struct SymbolSpec {
  enum class Kind { kSmooth, kRough };
  Kind kind = Kind::kSmooth;
  Expr a1;
  Expr a0;
  RoughSymbolSpec rough;
  int k = 1;  // mollification exponent of omega = log(1/eps)^(1/k)
  std::optional<double> x_independent_outside;
};

struct SweepSpec {
  double eps0 = 0.1;
  double ratio = 0.1;
  int count = 6;

  std::vector<double> grid() const { return GenSymbolFamily::geometric_grid(eps0, ratio, count); }
};

struct CheckSpec {
  std::string type;
  nlohmann::json params = nlohmann::json::object();
};

struct ScenarioConfig {
  std::string name;
  std::string description;
  std::uint64_t seed = 12345;
  Grid grid;
  double T = 1.0;
  SymbolSpec symbol;
  DataSpec data;
  std::optional<SweepSpec> sweep;
  std::optional<double> dt;
  int stride = 8;
  int max_order = 0;  // largest |alpha| with d = 0 tracked in sweeps
  AsymptoticThresholds thresholds;
  std::vector<CheckSpec> checks;
  std::string out_dir;
  int jobs = 1;
};

// Throws Error(kConfigInvalid, "<json path>: message").
ScenarioConfig parse_config(const nlohmann::json& j);
ScenarioConfig parse_config_text(const std::string& text);
ScenarioConfig load_config(const std::string& path);
FieldSpec parse_field_spec(const nlohmann::json& j, const std::string& path, int dim);
nlohmann::json config_to_json(const ScenarioConfig& cfg);
std::string config_to_text(const ScenarioConfig& cfg);
// Referential completeness: every check has what it needs.
void validate_config(const ScenarioConfig& cfg);

std::vector<std::string> preset_names();
ScenarioConfig preset(const std::string& name);
std::string preset_summary(const std::string& name);

// Building blocks shared by the runner and tests.
GridFunction build_field(const FieldSpec& s, double eps, const Grid& g);
SweepData build_data(const DataSpec& s, double eps, const Grid& g);
GenSymbolFamily build_family(const ScenarioConfig& cfg);
SweepPlan build_plan(const ScenarioConfig& cfg);

enum class CheckStatus { kPass, kFail, kReport, kError };
std::string_view to_string(CheckStatus s);

struct CheckOutcome {
  std::string name;
  CheckStatus status = CheckStatus::kReport;
  std::string summary;
  bool asserting = true;
};

struct ScenarioResult {
  std::vector<CheckOutcome> checks;
  std::vector<std::string> artifacts;
  int exit_code = 0;  // 0 pass, 2 check failure, 4 runtime error
};

// Runs every check, writes artifacts under cfg.out_dir (if set) and prints
// one line per check to `log` (if given).
ScenarioResult run_scenario(const ScenarioConfig& cfg, std::ostream* log = nullptr);

}  // namespace hyps

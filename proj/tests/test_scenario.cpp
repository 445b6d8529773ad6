#include <filesystem>
#include <fstream>
#include <iterator>
#include <set>
#include <sstream>

#include <doctest.h>
#include <json.hpp>

#include "hyps/scenario.hpp"

using namespace hyps;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string config_error_of(const json& j) {
  try {
    validate_config(parse_config(j));
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kConfigInvalid);
    return e.what();
  }
  return "";
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

fs::path fresh_dir(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / name;
  fs::remove_all(d);
  return d;
}

const CheckOutcome* find(const ScenarioResult& r, const std::string& name) {
  for (const auto& c : r.checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

}  // namespace

TEST_CASE("preset catalog") {
  const std::vector<std::string> names = preset_names();
  CHECK(names.size() >= 8);
  const std::set<std::string> have(names.begin(), names.end());
  for (const char* n : {"transport_smoke", "unitary_multiplier", "variable_speed_smooth", "piecewise_speed_logtype",
                        "delta_association", "negligible_uniqueness", "adjoint_remainder_desk", "ginf_regularity"}) {
    CHECK(have.count(n) == 1);
  }
  for (const auto& n : names) CHECK_FALSE(preset_summary(n).empty());
  CHECK_THROWS_AS(preset("no_such_preset"), Error);
}

TEST_CASE("every preset round-trips and validates") {
  for (const auto& n : preset_names()) {
    CAPTURE(n);
    const ScenarioConfig cfg = preset(n);
    CHECK_NOTHROW(validate_config(cfg));
    const std::string text = config_to_text(cfg);
    const ScenarioConfig back = parse_config_text(text);
    CHECK(config_to_text(back) == text);
    CHECK(back.name == cfg.name);
    CHECK(back.grid == cfg.grid);
    CHECK(back.checks.size() == cfg.checks.size());
  }
}

TEST_CASE("config errors name the offending field") {
  const json base = config_to_json(preset("transport_smoke"));
  SUBCASE("missing symbol") {
    json j = base;
    j.erase("symbol");
    CHECK(config_error_of(j).find("$.symbol") != std::string::npos);
  }
  SUBCASE("bad grid size") {
    json j = base;
    j["grid"]["M"] = 6;
    CHECK(config_error_of(j).find("$.grid") != std::string::npos);
  }
  SUBCASE("unknown key") {
    json j = base;
    j["grid"]["spacing"] = 0.1;
    CHECK(config_error_of(j).find("$.grid.spacing") != std::string::npos);
  }
  SUBCASE("wrong type") {
    json j = base;
    j["T"] = "one";
    CHECK(config_error_of(j).find("$.T") != std::string::npos);
  }
  SUBCASE("unknown check") {
    json j = base;
    j["checks"] = json::array({{{"type", "telepathy"}}});
    CHECK(config_error_of(j).find("$.checks[0]") != std::string::npos);
  }
  SUBCASE("sweep check without a sweep") {
    json j = base;
    j["checks"] = json::array({{{"type", "moderateness"}}});
    CHECK(config_error_of(j).find("$.sweep") != std::string::npos);
  }
  SUBCASE("bad expression") {
    json j = base;
    j["symbol"]["a1"] = {{"power", {{"base", "xi0"}}}};
    CHECK(config_error_of(j).find("$.symbol.a1") != std::string::npos);
  }
}

TEST_CASE("build_field shapes") {
  const Grid g{1, 128, 2 * M_PI};
  FieldSpec d;
  d.kind = FieldSpec::Kind::kDelta;
  d.center = {1.0, 0.0};
  d.amplitude = 2.0;
  for (double eps : {1e-1, 1e-2}) {
    const GridFunction f = build_field(d, eps, g);
    Complex mass = 0.0;
    for (const Complex& v : f.values) mass += v * g.dx();
    CHECK(std::abs(mass - 2.0) <= 1e-12);
  }
  FieldSpec gs;
  gs.kind = FieldSpec::Kind::kGaussian;
  gs.center = {M_PI, 0.0};
  gs.width = 0.5;
  const GridFunction f = build_field(gs, 0.5, g);
  CHECK(f.values[64].real() == doctest::Approx(1.0));
  CHECK(f.values[64 + 16].real() == doctest::Approx(std::exp(-0.5 * std::pow(16 * g.dx() / 0.5, 2))));
}

TEST_CASE("run_scenario: transport_smoke passes") {
  std::ostringstream log;
  const ScenarioResult r = run_scenario(preset("transport_smoke"), &log);
  CHECK(r.exit_code == 0);
  for (const char* n : {"energy", "unitarity", "transport"}) {
    CAPTURE(n);
    const CheckOutcome* c = find(r, n);
    REQUIRE(c != nullptr);
    CHECK(c->status == CheckStatus::kPass);
  }
  CHECK(log.str().find("PASS transport") != std::string::npos);
}

TEST_CASE("run_scenario exit codes") {
  SUBCASE("asserting failure gives 2") {
    ScenarioConfig cfg = preset("unitary_multiplier");
    cfg.symbol.a0 = Expr::constant(Complex(0.0, -0.5));  // damping breaks unitarity
    const ScenarioResult r = run_scenario(cfg);
    CHECK(r.exit_code == 2);
    REQUIRE(find(r, "unitarity") != nullptr);
    CHECK(find(r, "unitarity")->status == CheckStatus::kFail);
  }
  SUBCASE("runtime error gives 4") {
    ScenarioConfig cfg = preset("unitary_multiplier");
    cfg.dt = 1.0;  // beyond the RK4 margin
    const ScenarioResult r = run_scenario(cfg);
    CHECK(r.exit_code == 4);
    bool any_error = false;
    for (const auto& c : r.checks) any_error = any_error || c.status == CheckStatus::kError;
    CHECK(any_error);
  }
  SUBCASE("invalid config throws") {
    ScenarioConfig cfg = preset("transport_smoke");
    cfg.checks.push_back({"moderateness", json::object()});
    CHECK_THROWS_AS(run_scenario(cfg), Error);
  }
}

TEST_CASE("artifacts are byte-identical across runs and job counts") {
  ScenarioConfig cfg = preset("piecewise_speed_logtype");
  const fs::path a = fresh_dir("hyps_det_a"), b = fresh_dir("hyps_det_b");
  cfg.out_dir = a.string();
  cfg.jobs = 1;
  const ScenarioResult ra = run_scenario(cfg);
  cfg.out_dir = b.string();
  cfg.jobs = 3;
  const ScenarioResult rb = run_scenario(cfg);
  CHECK(ra.exit_code == 0);
  REQUIRE(ra.artifacts.size() == rb.artifacts.size());
  CHECK(ra.artifacts.size() >= 5);
  for (const auto& entry : fs::directory_iterator(a)) {
    const std::string name = entry.path().filename().string();
    CAPTURE(name);
    if (name == "config.json") {
      // Differ only in the fields that were changed.
      json ja = json::parse(slurp(entry.path())), jb = json::parse(slurp(b / name));
      for (json* j : {&ja, &jb}) {
        j->erase("jobs");
        j->erase("outputs");
      }
      CHECK(ja == jb);
      continue;
    }
    CHECK(slurp(entry.path()) == slurp(b / name));
  }
  fs::remove_all(a);
  fs::remove_all(b);
}

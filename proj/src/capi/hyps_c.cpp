#include "hyps/hyps.h"

#include <cstring>
#include <functional>
#include <sstream>
#include <string>

#include "hyps/scenario.hpp"

struct hyps_scenario {
  hyps::ScenarioConfig cfg;
};

struct hyps_result {
  hyps::ScenarioResult res;
};

namespace {

thread_local std::string last_error;

hyps_status status_of(hyps::ErrorKind k) {
  using hyps::ErrorKind;
  switch (k) {
    case ErrorKind::kConfigInvalid: return HYPS_ERR_CONFIG;
    case ErrorKind::kInvalidArgument:
    case ErrorKind::kBadEps:
    case ErrorKind::kGridMismatch:
    case ErrorKind::kEmptyBox:
    case ErrorKind::kInsufficientSweep:
    case ErrorKind::kTagMismatch:
    case ErrorKind::kIncompleteLedger:
    case ErrorKind::kInsufficientOrders: return HYPS_ERR_INVALID_ARGUMENT;
    case ErrorKind::kIo: return HYPS_ERR_IO;
    case ErrorKind::kNonFinite:
    case ErrorKind::kNoConvergence:
    case ErrorKind::kUnstableStep:
    case ErrorKind::kBoxTooSmall: return HYPS_ERR_NUMERICAL;
    case ErrorKind::kUnsupportedDerivativeOrder:
    case ErrorKind::kUnsupportedRoughKind:
    case ErrorKind::kDimensionMismatch:
    case ErrorKind::kTooLarge:
    case ErrorKind::kNotApplicable: return HYPS_ERR_UNSUPPORTED;
  }
  return HYPS_ERR_RUNTIME;
}

hyps_status fail(hyps_status s, std::string msg) {
  last_error = std::move(msg);
  return s;
}

template <class F>
hyps_status guarded(F&& f) {
  try {
    f();
    last_error.clear();
    return HYPS_OK;
  } catch (const hyps::Error& e) {
    return fail(status_of(e.kind()), e.what());
  } catch (const std::exception& e) {
    return fail(HYPS_ERR_RUNTIME, e.what());
  } catch (...) {
    return fail(HYPS_ERR_RUNTIME, "unknown error");
  }
}

const std::vector<std::string>& names() {
  static const std::vector<std::string> n = hyps::preset_names();
  return n;
}

const std::vector<std::string>& summaries() {
  static const std::vector<std::string> s = [] {
    std::vector<std::string> out;
    for (const auto& n : names()) out.push_back(hyps::preset_summary(n));
    return out;
  }();
  return s;
}

hyps_status make_scenario(hyps_scenario** out, const std::function<hyps::ScenarioConfig()>& make) {
  if (!out) return fail(HYPS_ERR_INVALID_ARGUMENT, "null output pointer");
  *out = nullptr;
  return guarded([&] { *out = new hyps_scenario{make()}; });
}

#define HYPS_REQUIRE(p) \
  if (!(p)) return fail(HYPS_ERR_INVALID_ARGUMENT, "null argument: " #p)

}  // namespace

extern "C" {

const char* hyps_version(void) { return "0.1.0"; }

const char* hyps_last_error(void) { return last_error.c_str(); }

const char* hyps_status_name(hyps_status s) {
  switch (s) {
    case HYPS_OK: return "ok";
    case HYPS_ERR_CONFIG: return "config error";
    case HYPS_ERR_INVALID_ARGUMENT: return "invalid argument";
    case HYPS_ERR_IO: return "i/o error";
    case HYPS_ERR_NUMERICAL: return "numerical failure";
    case HYPS_ERR_UNSUPPORTED: return "unsupported";
    case HYPS_ERR_RUNTIME: return "runtime error";
  }
  return "unknown";
}

void hyps_string_free(char* s) { delete[] s; }

size_t hyps_preset_count(void) { return names().size(); }

const char* hyps_preset_name(size_t index) {
  return index < names().size() ? names()[index].c_str() : nullptr;
}

const char* hyps_preset_summary(size_t index) {
  return index < summaries().size() ? summaries()[index].c_str() : nullptr;
}

hyps_status hyps_scenario_from_preset(const char* name, hyps_scenario** out) {
  HYPS_REQUIRE(name);
  return make_scenario(out, [&] { return hyps::preset(name); });
}

hyps_status hyps_scenario_from_json(const char* text, hyps_scenario** out) {
  HYPS_REQUIRE(text);
  return make_scenario(out, [&] { return hyps::parse_config_text(text); });
}

hyps_status hyps_scenario_from_file(const char* path, hyps_scenario** out) {
  HYPS_REQUIRE(path);
  return make_scenario(out, [&] { return hyps::load_config(path); });
}

void hyps_scenario_free(hyps_scenario* s) { delete s; }

hyps_status hyps_scenario_validate(const hyps_scenario* s) {
  HYPS_REQUIRE(s);
  return guarded([&] { hyps::validate_config(s->cfg); });
}

hyps_status hyps_scenario_to_json(const hyps_scenario* s, char** out) {
  HYPS_REQUIRE(s);
  HYPS_REQUIRE(out);
  *out = nullptr;
  return guarded([&] {
    const std::string t = hyps::config_to_text(s->cfg);
    char* buf = new char[t.size() + 1];
    std::memcpy(buf, t.c_str(), t.size() + 1);
    *out = buf;
  });
}

hyps_status hyps_scenario_name(const hyps_scenario* s, const char** out) {
  HYPS_REQUIRE(s);
  HYPS_REQUIRE(out);
  *out = s->cfg.name.c_str();
  return HYPS_OK;
}

hyps_status hyps_scenario_set_eps_count(hyps_scenario* s, int count) {
  HYPS_REQUIRE(s);
  if (!s->cfg.sweep) return fail(HYPS_ERR_CONFIG, "$.sweep: scenario has no sweep to resize");
  if (count < 2) return fail(HYPS_ERR_CONFIG, "$.sweep.count: must be >= 2");
  s->cfg.sweep->count = count;
  return HYPS_OK;
}

hyps_status hyps_scenario_set_grid_M(hyps_scenario* s, int M) {
  HYPS_REQUIRE(s);
  hyps::Grid g = s->cfg.grid;
  g.M = M;
  return guarded([&] {
    try {
      g.validate();
    } catch (const hyps::Error& e) {
      throw hyps::Error(hyps::ErrorKind::kConfigInvalid, std::string("$.grid.M: ") + e.what());
    }
    s->cfg.grid = g;
  });
}

hyps_status hyps_scenario_set_out_dir(hyps_scenario* s, const char* dir) {
  HYPS_REQUIRE(s);
  s->cfg.out_dir = dir ? dir : "";
  return HYPS_OK;
}

hyps_status hyps_scenario_set_jobs(hyps_scenario* s, int jobs) {
  HYPS_REQUIRE(s);
  if (jobs < 1) return fail(HYPS_ERR_INVALID_ARGUMENT, "jobs must be >= 1");
  s->cfg.jobs = jobs;
  return HYPS_OK;
}

hyps_status hyps_scenario_set_seed(hyps_scenario* s, unsigned long long seed) {
  HYPS_REQUIRE(s);
  s->cfg.seed = seed;
  return HYPS_OK;
}

hyps_status hyps_scenario_run(const hyps_scenario* s, hyps_log_fn log, void* user,
                              hyps_result** out) {
  HYPS_REQUIRE(s);
  HYPS_REQUIRE(out);
  *out = nullptr;
  return guarded([&] {
    // Forward whole lines to the callback as they are produced.
    struct LineBuf : std::stringbuf {
      hyps_log_fn fn;
      void* user;
      int sync() override {
        std::string t = str();
        std::size_t start = 0, nl;
        while ((nl = t.find('\n', start)) != std::string::npos) {
          fn(t.substr(start, nl - start).c_str(), user);
          start = nl + 1;
        }
        str(t.substr(start));
        return 0;
      }
    };
    LineBuf buf;
    buf.fn = log;
    buf.user = user;
    std::ostream os(&buf);
    auto res = hyps::run_scenario(s->cfg, log ? &os : nullptr);
    os.flush();
    *out = new hyps_result{std::move(res)};
  });
}

int hyps_result_exit_code(const hyps_result* r) { return r ? r->res.exit_code : 4; }

size_t hyps_result_check_count(const hyps_result* r) { return r ? r->res.checks.size() : 0; }

hyps_status hyps_result_check(const hyps_result* r, size_t index, const char** name,
                              hyps_check_status* status, const char** summary, int* asserting) {
  HYPS_REQUIRE(r);
  if (index >= r->res.checks.size()) return fail(HYPS_ERR_INVALID_ARGUMENT, "check index out of range");
  const auto& c = r->res.checks[index];
  if (name) *name = c.name.c_str();
  if (status) *status = static_cast<hyps_check_status>(c.status);
  if (summary) *summary = c.summary.c_str();
  if (asserting) *asserting = c.asserting ? 1 : 0;
  return HYPS_OK;
}

size_t hyps_result_artifact_count(const hyps_result* r) { return r ? r->res.artifacts.size() : 0; }

const char* hyps_result_artifact(const hyps_result* r, size_t index) {
  return r && index < r->res.artifacts.size() ? r->res.artifacts[index].c_str() : nullptr;
}

void hyps_result_free(hyps_result* r) { delete r; }

}  // extern "C"

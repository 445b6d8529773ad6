#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "hyps/hyps.h"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitConfig = 3;
constexpr int kExitRuntime = 4;

int exit_for(hyps_status s) { return s == HYPS_ERR_CONFIG ? kExitConfig : kExitRuntime; }

int report(hyps_status s, const std::string& context) {
  std::cerr << "hyps: " << context << ": " << hyps_last_error() << '\n';
  return exit_for(s);
}

bool is_preset(const std::string& name) {
  for (size_t i = 0; i < hyps_preset_count(); ++i) {
    if (name == hyps_preset_name(i)) return true;
  }
  return false;
}

// A config argument is a file path, or the name of a shipped preset when no
// such file exists.
hyps_status open_scenario(const std::string& arg, hyps_scenario** out) {
  if (!std::filesystem::exists(arg) && is_preset(arg)) return hyps_scenario_from_preset(arg.c_str(), out);
  return hyps_scenario_from_file(arg.c_str(), out);
}

struct Overrides {
  std::optional<int> eps_count;
  std::optional<int> grid_M;
  std::optional<std::string> out;
  std::optional<unsigned long long> seed;
  int jobs = 0;
};

hyps_status apply(hyps_scenario* s, const Overrides& o) {
  hyps_status st = HYPS_OK;
  if (o.eps_count && (st = hyps_scenario_set_eps_count(s, *o.eps_count)) != HYPS_OK) return st;
  if (o.grid_M && (st = hyps_scenario_set_grid_M(s, *o.grid_M)) != HYPS_OK) return st;
  if (o.out && (st = hyps_scenario_set_out_dir(s, o.out->c_str())) != HYPS_OK) return st;
  if (o.seed && (st = hyps_scenario_set_seed(s, *o.seed)) != HYPS_OK) return st;
  const int jobs = o.jobs > 0 ? o.jobs : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  return hyps_scenario_set_jobs(s, jobs);
}

void print_line(const char* line, void*) {
  std::fputs(line, stdout);
  std::fputc('\n', stdout);
  std::fflush(stdout);
}

int cmd_run(const std::string& arg, const Overrides& o) {
  hyps_scenario* s = nullptr;
  hyps_status st = open_scenario(arg, &s);
  if (st != HYPS_OK) return report(st, arg);
  st = apply(s, o);
  if (st == HYPS_OK) st = hyps_scenario_validate(s);
  if (st != HYPS_OK) {
    hyps_scenario_free(s);
    return report(st, arg);
  }
  hyps_result* r = nullptr;
  st = hyps_scenario_run(s, print_line, nullptr, &r);
  hyps_scenario_free(s);
  if (st != HYPS_OK) return report(st, arg);
  const int code = hyps_result_exit_code(r);
  size_t pass = 0, fail = 0, other = 0;
  for (size_t i = 0; i < hyps_result_check_count(r); ++i) {
    hyps_check_status cs;
    int asserting = 0;
    hyps_result_check(r, i, nullptr, &cs, nullptr, &asserting);
    if (cs == HYPS_CHECK_PASS) ++pass;
    else if (cs == HYPS_CHECK_FAIL && asserting) ++fail;
    else ++other;
  }
  std::printf("%zu passed, %zu failed, %zu other; %zu artifacts\n", pass, fail, other,
              hyps_result_artifact_count(r));
  hyps_result_free(r);
  return code;
}

int cmd_validate(const std::string& arg, const Overrides& o) {
  hyps_scenario* s = nullptr;
  hyps_status st = open_scenario(arg, &s);
  if (st != HYPS_OK) return report(st, arg);
  st = apply(s, o);
  if (st == HYPS_OK) st = hyps_scenario_validate(s);
  const char* name = "";
  hyps_scenario_name(s, &name);
  const std::string n = name;
  hyps_scenario_free(s);
  if (st != HYPS_OK) return report(st, arg);
  std::printf("valid: %s\n", n.c_str());
  return kExitPass;
}

int cmd_presets(const std::optional<std::string>& dump) {
  if (dump) {
    hyps_scenario* s = nullptr;
    hyps_status st = hyps_scenario_from_preset(dump->c_str(), &s);
    if (st != HYPS_OK) return report(st, *dump);
    char* text = nullptr;
    st = hyps_scenario_to_json(s, &text);
    hyps_scenario_free(s);
    if (st != HYPS_OK) return report(st, *dump);
    std::printf("%s\n", text);
    hyps_string_free(text);
    return kExitPass;
  }
  for (size_t i = 0; i < hyps_preset_count(); ++i) {
    std::printf("%-26s %s\n", hyps_preset_name(i), hyps_preset_summary(i));
  }
  return kExitPass;
}

void add_overrides(CLI::App* c, Overrides& o) {
  c->add_option("--eps-count", o.eps_count, "number of sweep points")->check(CLI::Range(2, 64));
  c->add_option("--grid-M", o.grid_M, "grid points per axis")->check(CLI::PositiveNumber);
  c->add_option("--out", o.out, "artifact directory");
  c->add_option("--seed", o.seed, "seed for randomized norm estimates");
  c->add_option("--jobs", o.jobs, "sweep worker threads (default: logical cores)")
      ->check(CLI::NonNegativeNumber);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hyps scenario runner"};
  app.set_version_flag("--version", std::string(hyps_version()));
  app.require_subcommand(1);

  Overrides over;
  std::string config;
  std::optional<std::string> dump;

  auto* run = app.add_subcommand("run", "run a scenario config (file path or preset name)");
  run->add_option("config", config, "config JSON file or preset name")->required();
  add_overrides(run, over);

  auto* validate = app.add_subcommand("validate", "check a config without running it");
  validate->add_option("config", config, "config JSON file or preset name")->required();
  add_overrides(validate, over);

  auto* presets = app.add_subcommand("presets", "list the shipped presets");
  presets->add_option("--dump", dump, "print the JSON config of one preset");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  if (*run) return cmd_run(config, over);
  if (*validate) return cmd_validate(config, over);
  return cmd_presets(dump);
}

// specdrive command-line front end. Talks to the core exclusively through the
// C API in specdrive.h.

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <memory>
#include <string>

#include <CLI11.hpp>

#include "specdrive.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerificationFailed = 1;
constexpr int kExitUsage = 2;

int fail_usage(const char* what) {
  std::fprintf(stderr, "error: %s\n", what ? what : sd_last_error());
  return kExitUsage;
}

struct ModelHandle {
  sd_model* p = nullptr;
  ~ModelHandle() { sd_model_free(p); }
};
struct ControllerHandle {
  sd_controller* p = nullptr;
  ~ControllerHandle() { sd_controller_free(p); }
};
struct SpecsHandle {
  sd_specset* p = nullptr;
  ~SpecsHandle() { sd_specs_free(p); }
};

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

sd_controller* load_controller_any(const std::string& path) {
  if (ends_with(path, ".steps")) return sd_controller_from_steps(path.c_str());
  return sd_controller_load(path.c_str());
}

std::string scenario_model_path(const std::string& assets, const std::string& scenario) {
  return assets + "/models/" + scenario + ".model";
}

void print_string(char* s) {
  if (!s) return;
  std::fputs(s, stdout);
  sd_string_free(s);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"automaton-based controller verification, simulation and preference-data generation"};
  app.require_subcommand(1);
  app.fallthrough();  // --seed etc. may follow the subcommand

  std::uint64_t seed = 1;
  int jobs = 1;
  std::string format = "text";
  app.add_option("--seed", seed, "random seed")->capture_default_str();
  app.add_option("--jobs", jobs, "worker threads for scoring")->capture_default_str();
  app.add_option("--format", format, "output format")->check(CLI::IsMember({"text", "records"}));

  std::string default_assets = SPECDRIVE_ASSET_DIR;
  std::string assets = default_assets;
  app.add_option("--assets", assets, "bundled asset directory")->capture_default_str();

  // verify
  auto* verify = app.add_subcommand("verify", "model-check a controller against a specification file");
  std::string v_model, v_controller, v_specs;
  verify->add_option("--model", v_model, "model file")->required();
  verify->add_option("--controller", v_controller, "controller (.ctrl) or step (.steps) file")->required();
  verify->add_option("--specs", v_specs, "specification file")->required();

  // simulate
  auto* simulate = app.add_subcommand("simulate", "run seeded episodes and report per-spec satisfaction");
  std::string s_controller, s_scenario, s_specs, s_trace_log;
  int s_runs = 200, s_max_steps = 12;
  simulate->add_option("--controller", s_controller, "controller or step file")->required();
  simulate->add_option("--scenario", s_scenario,
                       "scenario name (traffic_light_intersection, left_turn_signal, wide_median, "
                       "two_way_stop, roundabout) or a model file path")
      ->required();
  simulate->add_option("--specs", s_specs, "specification file")->required();
  simulate->add_option("--runs", s_runs, "number of episodes")->capture_default_str();
  simulate->add_option("--max-steps", s_max_steps, "episode length cap")->capture_default_str();
  simulate->add_option("--trace-log", s_trace_log, "write per-run trace logs to this file");

  // rank
  auto* rank = app.add_subcommand("rank", "sample responses, score them, emit a preference dataset");
  std::string r_prompts, r_backend = "mock", r_model, r_specs, r_out, r_mode = "formal", r_fixtures;
  int r_samples = 2;
  rank->add_option("--prompts", r_prompts, "prompt file, one task per line")->required();
  rank->add_option("--backend", r_backend, "mock or http")->capture_default_str();
  rank->add_option("--fixtures", r_fixtures, "fixture directory for the mock backend");
  rank->add_option("--model", r_model, "model file used for scoring")->required();
  rank->add_option("--specs", r_specs, "specification file")->required();
  rank->add_option("--out", r_out, "output dataset path")->required();
  rank->add_option("--samples", r_samples, "responses per prompt")->capture_default_str();
  rank->add_option("--mode", r_mode, "formal or empirical")->check(CLI::IsMember({"formal", "empirical"}));

  // export-smv
  auto* export_smv = app.add_subcommand("export-smv", "emit a NuSMV module for external checking");
  std::string e_model, e_controller, e_specs, e_out;
  export_smv->add_option("--model", e_model, "model file")->required();
  export_smv->add_option("--controller", e_controller, "controller or step file")->required();
  export_smv->add_option("--specs", e_specs, "specification file")->required();
  export_smv->add_option("--out", e_out, "output path (stdout when omitted)");

  // build-model
  auto* build = app.add_subcommand("build-model", "enumerate a state-space model from a predicate file");
  std::string b_predicate, b_out;
  bool b_no_prune = false;
  build->add_option("--predicate", b_predicate, "predicate file")->required();
  build->add_option("--out", b_out, "output model path")->required();
  build->add_flag("--no-prune", b_no_prune, "keep states with no incident transitions");

  CLI11_PARSE(app, argc, argv);
  const int fmt = format == "records" ? 1 : 0;

  if (verify->parsed()) {
    ModelHandle model{sd_model_load(v_model.c_str())};
    if (!model.p) return fail_usage(nullptr);
    ControllerHandle controller{load_controller_any(v_controller)};
    if (!controller.p) return fail_usage(nullptr);
    SpecsHandle specs{sd_specs_load(v_specs.c_str())};
    if (!specs.p) return fail_usage(nullptr);
    sd_report* report = sd_verify(model.p, controller.p, specs.p);
    if (!report) return fail_usage(nullptr);
    print_string(sd_report_render(report, fmt));
    const bool all = sd_report_satisfied(report) == sd_report_total(report);
    sd_report_free(report);
    return all ? kExitOk : kExitVerificationFailed;
  }

  if (simulate->parsed()) {
    const std::string model_path =
        ends_with(s_scenario, ".model") ? s_scenario : scenario_model_path(assets, s_scenario);
    ModelHandle model{sd_model_load(model_path.c_str())};
    if (!model.p) return fail_usage(nullptr);
    ControllerHandle controller{load_controller_any(s_controller)};
    if (!controller.p) return fail_usage(nullptr);
    SpecsHandle specs{sd_specs_load(s_specs.c_str())};
    if (!specs.p) return fail_usage(nullptr);
    sd_stats* stats = sd_simulate(model.p, controller.p, specs.p, s_runs, s_max_steps, seed);
    if (!stats) return fail_usage(nullptr);
    print_string(sd_stats_render(stats, fmt));
    sd_stats_free(stats);
    if (!s_trace_log.empty()) {
      if (sd_write_trace_logs(model.p, controller.p, s_runs, s_max_steps, seed, s_trace_log.c_str()) !=
          SD_OK)
        return fail_usage(nullptr);
    }
    return kExitOk;
  }

  if (rank->parsed()) {
    if (r_fixtures.empty()) r_fixtures = assets + "/fixtures/lm";
    char* summary = nullptr;
    const int rc = sd_rank(r_prompts.c_str(), r_backend.c_str(), r_fixtures.c_str(), r_model.c_str(),
                           r_specs.c_str(), r_out.c_str(), r_samples, r_mode.c_str(), seed, jobs,
                           &summary);
    if (rc != SD_OK) return fail_usage(nullptr);
    print_string(summary);
    return kExitOk;
  }

  if (export_smv->parsed()) {
    ModelHandle model{sd_model_load(e_model.c_str())};
    if (!model.p) return fail_usage(nullptr);
    ControllerHandle controller{load_controller_any(e_controller)};
    if (!controller.p) return fail_usage(nullptr);
    SpecsHandle specs{sd_specs_load(e_specs.c_str())};
    if (!specs.p) return fail_usage(nullptr);
    char* text = sd_export_smv(model.p, controller.p, specs.p);
    if (!text) return fail_usage(nullptr);
    if (e_out.empty()) {
      print_string(text);
    } else {
      std::FILE* f = std::fopen(e_out.c_str(), "wb");
      if (!f) {
        sd_string_free(text);
        return fail_usage("cannot open output file");
      }
      std::fputs(text, f);
      std::fclose(f);
      sd_string_free(text);
    }
    return kExitOk;
  }

  if (build->parsed()) {
    ModelHandle model{sd_model_build(b_predicate.c_str(), b_no_prune ? 0 : 1)};
    if (!model.p) return fail_usage(nullptr);
    if (sd_model_save(model.p, b_out.c_str()) != SD_OK) return fail_usage(nullptr);
    std::printf("wrote %s (%d states)\n", b_out.c_str(), sd_model_state_count(model.p));
    return kExitOk;
  }

  return fail_usage("no subcommand");
}

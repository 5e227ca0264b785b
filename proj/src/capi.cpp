#include "specdrive.h"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <string>

#include "specdrive/canonical.hpp"
#include "specdrive/empirical.hpp"
#include "specdrive/feedback.hpp"
#include "specdrive/formats.hpp"
#include "specdrive/modelcheck.hpp"
#include "specdrive/pipeline.hpp"
#include "specdrive/product.hpp"

using namespace specdrive;

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& msg) { g_last_error = msg; }

sd_status classify(const Error& e) {
  if (dynamic_cast<const IoError*>(&e)) return SD_ERR_IO;
  if (dynamic_cast<const SyntaxError*>(&e) || dynamic_cast<const StepSyntaxError*>(&e) ||
      dynamic_cast<const UnknownPropositionError*>(&e))
    return SD_ERR_PARSE;
  if (dynamic_cast<const EndpointUnreachableError*>(&e) || dynamic_cast<const AuthError*>(&e) ||
      dynamic_cast<const MalformedResponseError*>(&e))
    return SD_ERR_BACKEND;
  return SD_ERR_INVALID;
}

template <typename Fn>
auto guarded_ptr(Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const Error& e) {
    set_error(e.what());
    return nullptr;
  } catch (const std::exception& e) {
    set_error(e.what());
    return nullptr;
  }
}

template <typename Fn>
int guarded_status(Fn&& fn) {
  try {
    fn();
    return SD_OK;
  } catch (const Error& e) {
    set_error(e.what());
    return classify(e);
  } catch (const std::exception& e) {
    set_error(e.what());
    return SD_ERR_INTERNAL;
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) return nullptr;
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

}  // namespace

struct sd_model {
  TransitionSystem model;
};

struct sd_controller {
  ControllerFsa controller;
};

struct sd_specset {
  std::vector<std::pair<std::string, FormulaPtr>> specs;
};

struct sd_report {
  VerificationReport report;
  ProductAutomaton product;
};

struct sd_stats {
  SatisfactionStats stats;
};

extern "C" {

const char* sd_version(void) { return "0.1.0"; }

const char* sd_last_error(void) { return g_last_error.c_str(); }

void sd_string_free(char* s) { std::free(s); }

sd_model* sd_model_load(const char* path) {
  return guarded_ptr([&]() -> sd_model* { return new sd_model{load_model(path)}; });
}

sd_model* sd_model_build(const char* predicate_path, int prune) {
  return guarded_ptr([&]() -> sd_model* {
    const PredicateSpec spec = load_predicate(predicate_path);
    std::string name = predicate_path;
    if (auto slash = name.find_last_of("/\\"); slash != std::string::npos) name = name.substr(slash + 1);
    if (auto dot = name.find_last_of('.'); dot != std::string::npos && dot > 0) name = name.substr(0, dot);
    return new sd_model{
        build_model(spec.props, TransitionPredicate::from_pairs(spec.pairs), prune != 0, name)};
  });
}

int sd_model_save(const sd_model* model, const char* path) {
  return guarded_status([&] {
    if (!model) throw ValidationError("null model");
    save_model(model->model, path);
  });
}

int sd_model_state_count(const sd_model* model) {
  return model ? static_cast<int>(model->model.states().size()) : -1;
}

void sd_model_free(sd_model* model) { delete model; }

sd_controller* sd_controller_load(const char* path) {
  return guarded_ptr([&]() -> sd_controller* { return new sd_controller{load_controller(path)}; });
}

sd_controller* sd_controller_from_steps(const char* path) {
  return guarded_ptr([&]() -> sd_controller* {
    const StepList steps = load_steps(path, canonical_props());
    return new sd_controller{steps_to_controller(steps, canonical_props())};
  });
}

int sd_controller_state_count(const sd_controller* controller) {
  return controller ? static_cast<int>(controller->controller.state_names().size()) : -1;
}

void sd_controller_free(sd_controller* controller) { delete controller; }

sd_specset* sd_specs_load(const char* path) {
  return guarded_ptr([&]() -> sd_specset* { return new sd_specset{load_specs(path, canonical_props())}; });
}

int sd_specs_count(const sd_specset* specs) {
  return specs ? static_cast<int>(specs->specs.size()) : -1;
}

void sd_specs_free(sd_specset* specs) { delete specs; }

sd_report* sd_verify(const sd_model* model, const sd_controller* controller, const sd_specset* specs) {
  return guarded_ptr([&]() -> sd_report* {
    if (!model || !controller || !specs) throw ValidationError("null argument");
    const ControllerFsa completed = complete_controller(controller->controller);
    ProductAutomaton prod = build_product(model->model, completed);
    VerificationReport report = check_all(prod, specs->specs, completed.name());
    return new sd_report{std::move(report), std::move(prod)};
  });
}

int sd_report_total(const sd_report* report) { return report ? report->report.total : -1; }

int sd_report_satisfied(const sd_report* report) { return report ? report->report.satisfied_count : -1; }

int sd_report_spec_holds(const sd_report* report, const char* spec_name) {
  if (!report || !spec_name) return -1;
  for (const auto& v : report->report.verdicts)
    if (v.spec_name == spec_name) return v.holds ? 1 : 0;
  return -1;
}

char* sd_report_render(const sd_report* report, int format) {
  if (!report) {
    set_error("null report");
    return nullptr;
  }
  const std::string text = format == 1 ? report_to_records(report->report, report->product)
                                       : report_to_text(report->report, report->product);
  return dup_string(text);
}

void sd_report_free(sd_report* report) { delete report; }

sd_stats* sd_simulate(const sd_model* scenario_model, const sd_controller* controller,
                      const sd_specset* specs, int num_runs, int max_steps, uint64_t seed) {
  return guarded_ptr([&]() -> sd_stats* {
    if (!scenario_model || !controller || !specs) throw ValidationError("null argument");
    const ControllerFsa completed = complete_controller(controller->controller);
    ScenarioWorld world = ScenarioWorld::from_model(scenario_model->model.name(), scenario_model->model);
    RunConfig cfg{max_steps, num_runs, seed};
    return new sd_stats{evaluate_runs(completed, world, cfg, specs->specs)};
  });
}

char* sd_stats_render(const sd_stats* stats, int format) {
  if (!stats) {
    set_error("null stats");
    return nullptr;
  }
  return dup_string(format == 1 ? stats_to_records(stats->stats) : stats_to_text(stats->stats));
}

double sd_stats_p(const sd_stats* stats, const char* spec_name) {
  if (!stats || !spec_name) return -1.0;
  const auto* row = stats->stats.find(spec_name);
  return row ? row->p() : -1.0;
}

void sd_stats_free(sd_stats* stats) { delete stats; }

int sd_write_trace_logs(const sd_model* scenario_model, const sd_controller* controller, int num_runs,
                        int max_steps, uint64_t seed, const char* path) {
  return guarded_status([&] {
    if (!scenario_model || !controller || !path) throw ValidationError("null argument");
    const ControllerFsa completed = complete_controller(controller->controller);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError(std::string("cannot open '") + path + "' for writing");
    for (int k = 0; k < num_runs; ++k) {
      ScenarioWorld world =
          ScenarioWorld::from_model(scenario_model->model.name(), scenario_model->model);
      RunConfig cfg{max_steps, num_runs, seed};
      FiniteTrace trace = ground(completed, world, cfg, seed + static_cast<uint64_t>(k));
      out << "# run " << k << "\n" << trace_to_log(trace);
    }
  });
}

int sd_rank(const char* prompts_path, const char* backend, const char* fixture_dir,
            const char* model_path, const char* specs_path, const char* out_path, int samples,
            const char* mode, uint64_t seed, int jobs, char** summary_out) {
  return guarded_status([&] {
    if (!prompts_path || !backend || !model_path || !specs_path || !out_path)
      throw ValidationError("null argument");
    RankOptions opts;
    opts.prompts_path = prompts_path;
    opts.backend = backend;
    opts.fixture_dir = fixture_dir ? fixture_dir : "";
    opts.model_path = model_path;
    opts.specs_path = specs_path;
    opts.out_path = out_path;
    opts.samples = samples;
    opts.mode = mode && std::string(mode) == "empirical" ? ScoreMode::empirical : ScoreMode::formal;
    opts.seed = seed;
    opts.jobs = jobs;
    const char* env_url = std::getenv("SPECDRIVE_ENDPOINT");
    const char* env_key = std::getenv("SPECDRIVE_API_KEY");
    const char* env_model = std::getenv("SPECDRIVE_MODEL");
    if (env_url) opts.endpoint.base_url = env_url;
    if (env_key) opts.endpoint.api_key = env_key;
    if (env_model) opts.endpoint.model = env_model;
    const RankSummary summary = run_rank_pipeline(opts);
    if (summary_out) *summary_out = dup_string(rank_summary_records(summary));
  });
}

char* sd_export_smv(const sd_model* model, const sd_controller* controller, const sd_specset* specs) {
  return guarded_ptr([&]() -> char* {
    if (!model || !controller || !specs) throw ValidationError("null argument");
    return dup_string(export_smv(model->model, controller->controller, specs->specs));
  });
}

}  // extern "C"

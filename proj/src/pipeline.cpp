#include "specdrive/pipeline.hpp"

#include <atomic>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "specdrive/canonical.hpp"
#include "specdrive/formats.hpp"

namespace specdrive {

namespace {

std::vector<std::string> load_prompts(const std::string& path) {
  std::istringstream in(read_text_file(path));
  std::vector<std::string> prompts;
  std::string line;
  while (std::getline(in, line)) {
    std::size_t b = line.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) continue;
    std::size_t e = line.find_last_not_of(" \t\r\n");
    std::string t = line.substr(b, e - b + 1);
    if (!t.empty() && t[0] != '#') prompts.push_back(t);
  }
  return prompts;
}

}  // namespace

RankSummary run_rank_pipeline(const RankOptions& opts) {
  const PropSet& props = canonical_props();
  const std::vector<std::string> prompts = load_prompts(opts.prompts_path);

  const TransitionSystem model = load_model(opts.model_path);
  const auto specs = load_specs(opts.specs_path, props);

  ScenarioWorld world = ScenarioWorld::from_model(model.name(), model);
  ScoringContext ctx;
  ctx.model = &model;
  ctx.world = &world;
  ctx.run_config = RunConfig{opts.empirical_max_steps, opts.empirical_runs, opts.seed};
  ctx.specs = specs;
  ctx.props = props;
  ctx.mode = opts.mode;

  auto backend = make_backend(opts.backend, opts.fixture_dir, opts.endpoint, opts.transport);

  RankSummary summary;
  summary.prompts = prompts.size();

  std::vector<CandidateResponse> responses;
  for (const auto& task : prompts) {
    try {
      GenerationRequest req;
      req.prompt = PromptTemplate::task_prompt(task);
      req.num_samples = opts.samples;
      req.seed = opts.seed;
      req.endpoint = opts.endpoint;
      const std::vector<std::string> raw = backend->generate(req);
      for (const auto& r : raw) {
        CandidateResponse cand;
        cand.prompt_id = slugify(task);
        cand.prompt_text = req.prompt;
        cand.raw_text = backend->align(r, props);
        responses.push_back(std::move(cand));
      }
    } catch (const Error& e) {
      summary.prompt_errors.push_back(task + ": " + e.what());
    }
  }
  summary.responses = responses.size();

  // scoring is independent per response; fan out across worker threads
  const int jobs = std::max(1, opts.jobs);
  if (jobs == 1 || responses.size() < 2) {
    for (auto& r : responses) r = score(std::move(r), ctx);
  } else {
    std::atomic<std::size_t> cursor{0};
    auto worker = [&]() {
      while (true) {
        const std::size_t i = cursor.fetch_add(1);
        if (i >= responses.size()) return;
        responses[i] = score(std::move(responses[i]), ctx);
      }
    };
    std::vector<std::thread> pool;
    for (int i = 0; i < jobs; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (const auto& r : responses)
    if (r.alignment_failed) ++summary.alignment_failures;

  PairingSummary pairing;
  const std::vector<PreferencePair> pairs = make_pairs(responses, &pairing);
  summary.pairs = pairing.pairs;
  summary.ties_skipped = pairing.ties_skipped;
  summary.duplicates_dropped = pairing.duplicates_dropped;

  emit_dataset(pairs, opts.out_path);
  return summary;
}

std::string rank_summary_records(const RankSummary& s) {
  nlohmann::json j{{"prompts", s.prompts},
                   {"responses", s.responses},
                   {"pairs", s.pairs},
                   {"ties_skipped", s.ties_skipped},
                   {"duplicates_dropped", s.duplicates_dropped},
                   {"alignment_failures", s.alignment_failures},
                   {"prompt_errors", s.prompt_errors}};
  return j.dump() + "\n";
}

std::string rank_summary_text(const RankSummary& s) {
  std::ostringstream out;
  out << "prompts: " << s.prompts << "\nresponses: " << s.responses << "\npairs: " << s.pairs
      << "\nties skipped: " << s.ties_skipped << "\nduplicates dropped: " << s.duplicates_dropped
      << "\nalignment failures: " << s.alignment_failures << "\n";
  for (const auto& e : s.prompt_errors) out << "error: " << e << "\n";
  return out.str();
}

}  // namespace specdrive

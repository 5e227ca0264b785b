#include "specdrive/feedback.hpp"

#include <fstream>
#include <map>
#include <set>

#include <json.hpp>

#include "specdrive/product.hpp"

namespace specdrive {

CandidateResponse score(CandidateResponse resp, const ScoringContext& ctx) {
  resp.controller.reset();
  resp.report.reset();
  resp.stats.reset();
  resp.alignment_failed = false;
  resp.failure_reason.clear();

  StepList steps;
  try {
    steps = parse_steps(resp.raw_text, ctx.props);
  } catch (const Error& e) {
    resp.alignment_failed = true;
    resp.failure_reason = e.what();
    return resp;
  }

  try {
    ControllerFsa controller =
        complete_controller(steps_to_controller(steps, ctx.props, resp.prompt_id));
    if (ctx.mode == ScoreMode::formal) {
      if (!ctx.model) throw ValidationError("formal scoring needs a model");
      const ProductAutomaton prod = build_product(*ctx.model, controller);
      resp.report = check_all(prod, ctx.specs, resp.prompt_id);
    } else {
      if (!ctx.world) throw ValidationError("empirical scoring needs a world");
      resp.stats = evaluate_runs(controller, *ctx.world, ctx.run_config, ctx.specs);
      // a spec counts as satisfied when every sampled run satisfied it
      VerificationReport report;
      report.controller_id = resp.prompt_id;
      report.total = static_cast<int>(ctx.specs.size());
      for (const auto& row : resp.stats->rows) {
        Verdict v;
        v.spec_name = row.spec;
        v.holds = row.satisfying_runs == row.total_runs;
        if (v.holds) ++report.satisfied_count;
        report.verdicts.push_back(std::move(v));
      }
      resp.report = std::move(report);
    }
    resp.controller = std::move(controller);
  } catch (const Error& e) {
    // controller construction failed; ranks below every parseable response
    resp.alignment_failed = true;
    resp.failure_reason = e.what();
    resp.controller.reset();
    resp.report.reset();
  }
  return resp;
}

std::vector<PreferencePair> make_pairs(const std::vector<CandidateResponse>& responses,
                                       PairingSummary* summary) {
  // group by prompt, preserving first-seen prompt order
  std::vector<std::string> prompt_order;
  std::map<std::string, std::vector<const CandidateResponse*>> groups;
  for (const auto& r : responses) {
    auto& g = groups[r.prompt_id];
    if (g.empty()) prompt_order.push_back(r.prompt_id);
    g.push_back(&r);
  }

  PairingSummary local;
  local.responses = responses.size();
  local.prompts = prompt_order.size();

  std::vector<PreferencePair> pairs;
  for (const auto& pid : prompt_order) {
    auto& g = groups[pid];
    // exact-duplicate texts carry no preference signal
    std::vector<const CandidateResponse*> unique;
    std::set<std::string> seen;
    for (const auto* r : g) {
      if (seen.insert(r->raw_text).second) unique.push_back(r);
      else local.duplicates_dropped += 1;
    }
    for (std::size_t i = 0; i < unique.size(); ++i) {
      for (std::size_t j = i + 1; j < unique.size(); ++j) {
        const int si = unique[i]->score(), sj = unique[j]->score();
        if (si == sj) {
          local.ties_skipped += 1;
          continue;
        }
        const CandidateResponse* w = si > sj ? unique[i] : unique[j];
        const CandidateResponse* l = si > sj ? unique[j] : unique[i];
        pairs.push_back(PreferencePair{w->prompt_text.empty() ? pid : w->prompt_text, w->raw_text,
                                       l->raw_text, w->score(), l->score()});
      }
    }
  }
  local.pairs = pairs.size();
  if (summary) *summary = local;
  return pairs;
}

std::size_t emit_dataset(const std::vector<PreferencePair>& pairs, std::ostream& out) {
  for (const auto& p : pairs) {
    nlohmann::json j{{"prompt", p.prompt},
                     {"chosen", p.chosen},
                     {"rejected", p.rejected},
                     {"score_chosen", p.score_chosen},
                     {"score_rejected", p.score_rejected}};
    out << j.dump() << "\n";
  }
  return pairs.size();
}

std::size_t emit_dataset(const std::vector<PreferencePair>& pairs, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  const std::size_t n = emit_dataset(pairs, out);
  out.flush();
  if (!out) throw IoError("write to '" + path + "' failed");
  return n;
}

std::vector<PreferencePair> read_dataset(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::vector<PreferencePair> pairs;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded()) throw IoError("bad dataset record in '" + path + "'");
    pairs.push_back(PreferencePair{j.at("prompt").get<std::string>(), j.at("chosen").get<std::string>(),
                                   j.at("rejected").get<std::string>(), j.at("score_chosen").get<int>(),
                                   j.at("score_rejected").get<int>()});
  }
  return pairs;
}

}  // namespace specdrive

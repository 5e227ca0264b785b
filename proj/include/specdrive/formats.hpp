#pragma once

#include <string>
#include <utility>
#include <vector>

#include "specdrive/automata.hpp"
#include "specdrive/empirical.hpp"
#include "specdrive/feedback.hpp"
#include "specdrive/modelcheck.hpp"

namespace specdrive {

// Model files: props, labeled states, guard-annotated edges.
//   model traffic_light_intersection
//   props green_traffic_light car_from_left ...
//   state p0 {green_traffic_light}
//   edge p0 -> p1 [!green_traffic_light & car_from_left]
TransitionSystem parse_model_text(const std::string& text, const std::string& source = "<model>");
TransitionSystem load_model(const std::string& path);
std::string model_to_text(const TransitionSystem& model);
void save_model(const TransitionSystem& model, const std::string& path);

// Controller files: input/output props, init state, guarded edges.
//   controller right_turn_safe
//   inputs green_traffic_light ...
//   outputs stop turn_left turn_right go_straight
//   init q0
//   edge q0 -> q1 [true] / eps
//   edge q2 -> q3 [!car_from_left & !pedestrian_at_right] / turn_right
ControllerFsa parse_controller_text(const std::string& text, const std::string& source = "<controller>");
ControllerFsa load_controller(const std::string& path);
std::string controller_to_text(const ControllerFsa& controller);

// Step files hold the bracketed DSL; parsed against the given vocabulary.
StepList load_steps(const std::string& path, const PropSet& props);

// Spec files: one `name := formula` per line, '#' comments.
std::vector<std::pair<std::string, FormulaPtr>> parse_specs_text(const std::string& text,
                                                                 const PropSet& props,
                                                                 const std::string& source = "<specs>");
std::vector<std::pair<std::string, FormulaPtr>> load_specs(const std::string& path, const PropSet& props);

// Predicate files drive state-space model construction:
//   props green yellow red
//   allow {green} -> {red}
struct PredicateSpec {
  std::vector<std::string> props;
  std::vector<std::pair<NameSet, NameSet>> pairs;
};
PredicateSpec load_predicate(const std::string& path);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

// --- rendering -----------------------------------------------------------------

std::string letter_to_string(const Letter& l);
std::string report_to_text(const VerificationReport& report, const ProductAutomaton& prod);
std::string report_to_records(const VerificationReport& report, const ProductAutomaton& prod);
std::string stats_to_text(const SatisfactionStats& stats);
std::string stats_to_records(const SatisfactionStats& stats);
std::string trace_to_log(const FiniteTrace& trace);

}  // namespace specdrive

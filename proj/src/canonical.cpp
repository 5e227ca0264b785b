#include "specdrive/canonical.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>

namespace specdrive {

const std::vector<std::string>& canonical_env_props() {
  static const std::vector<std::string> props = {
      "green_traffic_light", "green_left_turn_light", "flashing_left_turn_light",
      "opposite_car",        "car_from_left",         "car_from_right",
      "pedestrian_at_left",  "pedestrian_at_right",   "pedestrian_in_front",
      "stop_sign",
  };
  return props;
}

const std::vector<std::string>& canonical_action_props() {
  static const std::vector<std::string> actions = {"stop", "turn_left", "turn_right", "go_straight"};
  return actions;
}

const PropSet& canonical_props() {
  static const PropSet ps = PropSet::make(canonical_env_props(), canonical_action_props());
  return ps;
}

std::string display_name(const std::string& prop) {
  std::string out = prop;
  std::replace(out.begin(), out.end(), '_', ' ');
  return out;
}

std::string to_snake_case(const std::string& phrase) {
  std::string out;
  bool pending_sep = false;
  for (char ch : phrase) {
    const char c = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    if ((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9')) {
      if (pending_sep && !out.empty()) out += '_';
      pending_sep = false;
      out += c;
    } else {
      pending_sep = true;
    }
  }
  return out;
}

namespace {

// Words dropped before alias lookup; keeps "the state of the green traffic
// light" and "green traffic light" on the same key.
bool is_stopword(const std::string& w) {
  return w == "the" || w == "a" || w == "an" || w == "of" || w == "state" || w == "is" ||
         w == "on" || w == "your" || w == "for" || w == "present" || w == "approaching" ||
         w == "side";
}

std::string normalize_phrase(const std::string& phrase) {
  std::string lowered;
  for (char ch : phrase) {
    char c = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    if (c == '-') c = ' ';
    if ((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == ' ') lowered += c;
  }
  std::istringstream in(lowered);
  std::string w, out;
  while (in >> w) {
    if (is_stopword(w)) continue;
    if (!out.empty()) out += ' ';
    out += w;
  }
  return out;
}

const std::map<std::string, std::string>& alias_table() {
  static const std::map<std::string, std::string> table = {
      {"traffic light", "green_traffic_light"},
      {"green traffic light", "green_traffic_light"},
      {"tl", "green_traffic_light"},
      {"green tl", "green_traffic_light"},
      {"left turn light", "green_left_turn_light"},
      {"green left turn light", "green_left_turn_light"},
      {"ll", "green_left_turn_light"},
      {"green ll", "green_left_turn_light"},
      {"flashing left turn light", "flashing_left_turn_light"},
      {"opposite car", "opposite_car"},
      {"oncoming traffic", "opposite_car"},
      {"oncoming car", "opposite_car"},
      {"opp car", "opposite_car"},
      {"car from left", "car_from_left"},
      {"car from your left", "car_from_left"},
      {"left car", "car_from_left"},
      {"left approaching car", "car_from_left"},
      {"traffic coming from your left", "car_from_left"},
      {"car from right", "car_from_right"},
      {"right car", "car_from_right"},
      {"pedestrian at left", "pedestrian_at_left"},
      {"ped at left", "pedestrian_at_left"},
      {"pedestrian at right", "pedestrian_at_right"},
      {"ped at right", "pedestrian_at_right"},
      {"right pedestrian", "pedestrian_at_right"},
      {"pedestrians right", "pedestrian_at_right"},
      {"pedestrian in front", "pedestrian_in_front"},
      {"pedestrian", "pedestrian_in_front"},
      {"ped in front", "pedestrian_in_front"},
      {"stop sign", "stop_sign"},
      {"stop", "stop"},
      {"turn left", "turn_left"},
      {"turn vehicle left", "turn_left"},
      {"turn left", "turn_left"},
      {"turn right", "turn_right"},
      {"turn vehicle right", "turn_right"},
      {"go straight", "go_straight"},
      {"start moving forward", "go_straight"},
      {"moving forward", "go_straight"},
      {"proceed straight", "go_straight"},
  };
  return table;
}

}  // namespace

std::optional<std::string> phrase_to_name(const std::string& phrase) {
  const std::string key = normalize_phrase(phrase);
  if (key.empty()) return std::nullopt;
  auto it = alias_table().find(key);
  if (it != alias_table().end()) return it->second;
  const std::string snake = to_snake_case(key);
  if (canonical_props().contains(snake)) return snake;
  if (PropSet::valid_name(snake)) return snake;  // caller checks declaredness
  return std::nullopt;
}

std::string slugify(const std::string& task) {
  std::string s = to_snake_case(task);
  if (s.empty()) s = "task";
  return s;
}

}  // namespace specdrive

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "specdrive/logic.hpp"

namespace specdrive {

// The driving vocabulary: ten environment propositions and four actions.
const std::vector<std::string>& canonical_env_props();
const std::vector<std::string>& canonical_action_props();
const PropSet& canonical_props();

// "green_traffic_light" -> "green traffic light" (for prompt rendering).
std::string display_name(const std::string& prop);

// Normalizes a free phrase ("the state of the Green traffic light") and maps
// it to a proposition or action name, via an alias table plus a snake_case
// fallback. Returns nullopt when nothing plausible matches.
std::optional<std::string> phrase_to_name(const std::string& phrase);

// snake_case canonicalization of an arbitrary phrase.
std::string to_snake_case(const std::string& phrase);

// filesystem-safe slug for a task string
std::string slugify(const std::string& task);

}  // namespace specdrive

#include "specdrive/lmclient.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "specdrive/canonical.hpp"

namespace fs = std::filesystem;

namespace specdrive {

std::string PromptTemplate::task_prompt(const std::string& task) {
  return "Define the steps for " + task + "\n1.";
}

std::string PromptTemplate::align_prompt(const std::string& steps_text, const PropSet& props) {
  std::ostringstream out;
  out << "Align the following steps to align the set of Boolean propositions {";
  for (std::size_t i = 0; i < props.env().size(); ++i)
    out << (i ? ", " : "") << display_name(props.env()[i]);
  out << "} and actions {";
  for (std::size_t i = 0; i < props.actions().size(); ++i)
    out << (i ? ", " : "") << display_name(props.actions()[i]);
  out << "}:\n" << steps_text;
  return out.str();
}

std::string PromptTemplate::wrap(const std::string& prompt, const std::string& profile) {
  if (profile == "llama2_inst") {
    return "<s>[INST] <<SYS>>\nYou are a helpful assistant. Always answer as helpfully as possible, "
           "while being safe. Your answers should be detailed.\n<</SYS>>\n\n" +
           prompt + " [/INST]";
  }
  return prompt;
}

// --- mock backend ------------------------------------------------------------

namespace {

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw IoError("cannot open '" + p.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string trim_copy(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

// the task is quoted somewhere inside the rendered prompt; recover it
std::string task_of_prompt(const std::string& prompt) {
  std::string t = prompt;
  const std::string lead = "Define the steps for ";
  std::size_t at = t.find(lead);
  if (at != std::string::npos) t = t.substr(at + lead.size());
  std::size_t nl = t.find('\n');
  if (nl != std::string::npos) t = t.substr(0, nl);
  return trim_copy(t);
}

}  // namespace

MockBackend::MockBackend(std::string fixture_dir) : dir_(std::move(fixture_dir)) {}

std::vector<std::string> MockBackend::generate(const GenerationRequest& req) {
  if (req.num_samples < 1) throw ValidationError("num_samples must be >= 1");
  const std::string slug = slugify(task_of_prompt(req.prompt));
  const fs::path task_dir = fs::path(dir_) / slug;
  std::vector<fs::path> raws;
  if (fs::exists(task_dir))
    for (const auto& entry : fs::directory_iterator(task_dir)) {
      const std::string name = entry.path().filename().string();
      if (name.size() > 8 && name.substr(name.size() - 8) == ".raw.txt") raws.push_back(entry.path());
    }
  std::sort(raws.begin(), raws.end());
  if (raws.empty())
    throw MalformedResponseError("mock backend has no fixtures for task '" + slug + "'");
  std::vector<std::string> out;
  for (int i = 0; i < req.num_samples; ++i)
    out.push_back(trim_copy(read_file(raws[static_cast<std::size_t>(i) % raws.size()])));
  return out;
}

std::string MockBackend::align(const std::string& raw_steps, const PropSet& props) {
  // exact fixture match first
  const std::string wanted = trim_copy(raw_steps);
  if (!wanted.empty() && fs::exists(dir_)) {
    for (const auto& task_dir : fs::directory_iterator(dir_)) {
      if (!task_dir.is_directory()) continue;
      for (const auto& entry : fs::directory_iterator(task_dir.path())) {
        const std::string name = entry.path().filename().string();
        if (name.size() <= 8 || name.substr(name.size() - 8) != ".raw.txt") continue;
        if (trim_copy(read_file(entry.path())) != wanted) continue;
        fs::path aligned = entry.path();
        std::string fn = aligned.filename().string();
        fn = fn.substr(0, fn.size() - 8) + ".aligned.txt";
        aligned.replace_filename(fn);
        if (fs::exists(aligned)) return trim_copy(read_file(aligned));
      }
    }
  }
  return dictionary_align(raw_steps, props);
}

// --- free-text aligner ---------------------------------------------------------

namespace {

std::string lowercase(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

struct TermHit {
  std::string phrase;  // the raw words that matched, kept verbatim in output
  std::string name;
};

// crude clause scan: longest alias-table phrase found in the clause
std::optional<TermHit> find_term(const std::string& clause, const PropSet& props, bool want_action) {
  TermHit best;
  // candidate phrases: every word window up to 5 words
  std::vector<std::string> words;
  std::istringstream in(clause);
  std::string w;
  while (in >> w) words.push_back(w);
  for (std::size_t i = 0; i < words.size(); ++i) {
    std::string acc;
    for (std::size_t j = i; j < words.size() && j < i + 6; ++j) {
      if (!acc.empty()) acc += ' ';
      acc += words[j];
      auto name = phrase_to_name(acc);
      if (!name || !props.contains(*name)) continue;
      if (want_action != props.is_action(*name)) continue;
      if (acc.size() > best.phrase.size()) best = TermHit{acc, *name};
    }
  }
  if (best.name.empty()) return std::nullopt;
  return best;
}

// a text already in the numbered bracketed form is left untouched
bool looks_aligned(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  bool any = false;
  while (std::getline(in, line)) {
    std::string t = trim_copy(line);
    if (t.empty() || t[0] == '#') continue;
    any = true;
    std::size_t dot = t.find('.');
    if (dot == std::string::npos || dot == 0) return false;
    if (t.find('<') == std::string::npos) return false;
  }
  return any;
}

bool contains_word(const std::string& s, const std::string& w) {
  std::size_t at = s.find(w);
  while (at != std::string::npos) {
    const bool left_ok = at == 0 || !std::isalnum(static_cast<unsigned char>(s[at - 1]));
    const std::size_t end = at + w.size();
    const bool right_ok = end >= s.size() || !std::isalnum(static_cast<unsigned char>(s[end]));
    if (left_ok && right_ok) return true;
    at = s.find(w, at + 1);
  }
  return false;
}

}  // namespace

std::string dictionary_align(const std::string& raw_steps, const PropSet& props) {
  if (looks_aligned(raw_steps)) return raw_steps;
  std::istringstream in(raw_steps);
  std::ostringstream out;
  std::string line;
  int index = 0;
  while (std::getline(in, line)) {
    std::string t = trim_copy(line);
    if (t.empty()) continue;
    // strip a leading "N." if present
    std::size_t dot = t.find('.');
    if (dot != std::string::npos && dot > 0 &&
        std::all_of(t.begin(), t.begin() + static_cast<long>(dot),
                    [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
      t = trim_copy(t.substr(dot + 1));
    const std::string low = lowercase(t);
    ++index;
    out << index << ". ";

    const bool negated = contains_word(low, "no") || contains_word(low, "not") ||
                         contains_word(low, "without") || contains_word(low, "clear");
    if (low.rfind("if", 0) == 0 || low.find(", if") != std::string::npos) {
      // conditional: first environment term guards, action term fires
      std::size_t comma = low.find(',');
      const std::string cond_part = comma == std::string::npos ? low : low.substr(0, comma);
      const std::string act_part = comma == std::string::npos ? low : low.substr(comma + 1);
      auto cond = find_term(cond_part, props, false);
      auto act = find_term(act_part, props, true);
      const bool sensing = !act;
      if (sensing) act = find_term(act_part, props, false);  // sensing consequent
      if (cond && act) {
        const bool cond_negated = contains_word(cond_part, "no") || contains_word(cond_part, "not") ||
                                  contains_word(cond_part, "without");
        out << "<if> <" << (cond_negated ? "no " : "") << cond->phrase << ">, <"
            << (sensing ? "check " + act->phrase : act->phrase) << ">.\n";
        continue;
      }
    }
    if (low.find("observe") != std::string::npos || low.find("watch") != std::string::npos ||
        low.find("check") != std::string::npos || low.find("look") != std::string::npos ||
        low.find("approach") != std::string::npos) {
      if (auto term = find_term(low, props, false)) {
        out << "<observe " << term->phrase << ">.\n";
        continue;
      }
    }
    if (auto act = find_term(low, props, true); act && !negated) {
      out << "<" << act->phrase << ">.\n";
      continue;
    }
    // passthrough, bracketed so it surfaces as an unknown proposition rather
    // than a syntax error when parsed
    std::string body = t;
    while (!body.empty() && (body.back() == '.' || body.back() == ' ')) body.pop_back();
    out << "<" << body << ">.\n";
  }
  return out.str();
}

// --- http backend ---------------------------------------------------------------

namespace {

Transport real_transport() {
  return [](const HttpCall& call) -> HttpResult {
    // split scheme://host[:port] and path
    std::string url = call.url;
    std::string path = "/v1/chat/completions";
    std::size_t scheme = url.find("://");
    if (scheme != std::string::npos) {
      std::size_t slash = url.find('/', scheme + 3);
      if (slash != std::string::npos) {
        path = url.substr(slash);
        url = url.substr(0, slash);
      }
    }
    httplib::Client client(url);
    client.set_connection_timeout(call.timeout_ms / 1000, (call.timeout_ms % 1000) * 1000);
    client.set_read_timeout(call.timeout_ms / 1000, (call.timeout_ms % 1000) * 1000);
    httplib::Headers headers;
    if (!call.api_key.empty()) headers.emplace("Authorization", "Bearer " + call.api_key);
    auto res = client.Post(path, headers, call.body, "application/json");
    if (!res) return HttpResult{false, 0, ""};
    return HttpResult{true, res->status, res->body};
  };
}

}  // namespace

HttpBackend::HttpBackend(EndpointConfig cfg, Transport transport)
    : cfg_(std::move(cfg)), transport_(transport ? std::move(transport) : real_transport()) {}

std::vector<std::string> HttpBackend::complete(const std::string& prompt, int n, double temperature) {
  nlohmann::json body{
      {"model", cfg_.model},
      {"n", n},
      {"temperature", temperature},
      {"messages", nlohmann::json::array({nlohmann::json{
                       {"role", "user"}, {"content", PromptTemplate::wrap(prompt, cfg_.prompt_profile)}}})},
  };
  HttpCall call{cfg_.base_url, body.dump(), cfg_.api_key, cfg_.timeout_ms};

  HttpResult res;
  int delay_ms = 100;
  for (int attempt = 0; attempt <= cfg_.max_retries; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(std::chrono::milliseconds(delay_ms));
      delay_ms *= 2;
    }
    res = transport_(call);
    if (!res.connected) continue;                       // transient: retry
    if (res.status >= 500 && res.status < 600) continue;  // transient: retry
    break;
  }
  if (!res.connected)
    throw EndpointUnreachableError("endpoint '" + cfg_.base_url + "' unreachable after " +
                                   std::to_string(cfg_.max_retries + 1) + " attempts");
  if (res.status == 401 || res.status == 403) throw AuthError("endpoint rejected the credentials");
  if (res.status < 200 || res.status >= 300)
    throw MalformedResponseError("endpoint returned status " + std::to_string(res.status));

  nlohmann::json j = nlohmann::json::parse(res.body, nullptr, false);
  if (j.is_discarded() || !j.contains("choices") || !j["choices"].is_array())
    throw MalformedResponseError("response body is not a chat completion");
  std::vector<std::string> out;
  for (const auto& choice : j["choices"]) {
    if (!choice.contains("message") || !choice["message"].contains("content"))
      throw MalformedResponseError("choice lacks message content");
    out.push_back(choice["message"]["content"].get<std::string>());
  }
  if (out.empty()) throw MalformedResponseError("no choices in response");
  while (static_cast<int>(out.size()) < n) out.push_back(out.back());
  return out;
}

std::vector<std::string> HttpBackend::generate(const GenerationRequest& req) {
  if (req.num_samples < 1) throw ValidationError("num_samples must be >= 1");
  return complete(req.prompt, req.num_samples, req.temperature);
}

std::string HttpBackend::align(const std::string& raw_steps, const PropSet& props) {
  const std::string prompt = PromptTemplate::align_prompt(raw_steps, props);
  return complete(prompt, 1, 0.0).front();
}

std::unique_ptr<Backend> make_backend(const std::string& name, const std::string& fixture_dir,
                                      const EndpointConfig& cfg, Transport transport) {
  if (name == "mock") return std::make_unique<MockBackend>(fixture_dir);
  if (name == "http") return std::make_unique<HttpBackend>(cfg, std::move(transport));
  throw ValidationError("unknown backend '" + name + "'");
}

}  // namespace specdrive

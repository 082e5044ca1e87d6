#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "lcts/errors.hpp"
#include "lcts/harness.hpp"

namespace lcts {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

InstanceKind parse_instance(const std::string& text, std::filesystem::path* custom_path) {
  const std::string t = lower(text);
  if (t == "good") return InstanceKind::GoodPriors;
  if (t == "agnostic") return InstanceKind::AgnosticPriors;
  if (t == "adversarial") return InstanceKind::AdversarialPriors;
  if (t.rfind("custom:", 0) == 0 && text.size() > 7) {
    if (custom_path) *custom_path = text.substr(7);
    return InstanceKind::Custom;
  }
  throw ConfigError("unknown instance `" + text + "`");
}

std::vector<PolicySpec> parse_policies(const std::string& text) {
  std::vector<PolicySpec> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    const std::string t = lower(trim(tok));
    if (t.empty()) continue;
    PolicySpec p;
    if (t == "exact" || t == "exactts") p.kind = PolicyKind::ExactTS;
    else if (t == "ula" || t == "ulats") p.kind = PolicyKind::UlaTS;
    else if (t == "sgld" || t == "sgldts") p.kind = PolicyKind::SgldTS;
    else if (t == "ucb") p.kind = PolicyKind::UCB;
    else if (t == "mixture" || t == "mixturets") p.kind = PolicyKind::MixtureTS;
    else throw ConfigError("unknown policy `" + trim(tok) + "`");
    out.push_back(p);
  }
  if (out.empty()) throw ConfigError("empty policy list");
  return out;
}

Schedule parse_schedule(const std::string& text) {
  const std::string t = lower(text);
  if (t == "theoretical") return Schedule::Theoretical;
  if (t == "practical") return Schedule::Practical;
  throw ConfigError("unknown schedule `" + text + "`");
}

std::map<std::string, std::string> read_key_values(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": expected key=value");
    }
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": empty key");
    if (!kv.emplace(key, trim(line.substr(eq + 1))).second) {
      throw ConfigError(path.string() + ": duplicate key `" + key + "`");
    }
  }
  return kv;
}

}  // namespace lcts

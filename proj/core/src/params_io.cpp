#include "cpi/params_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

namespace cpi {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::string format_real(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

KeyValueConfig KeyValueConfig::parse(std::istream& in, std::string source) {
  KeyValueConfig cfg;
  cfg.source_ = std::move(source);
  std::string section;
  std::string raw;
  int lineno = 0;
  auto error = [&](const std::string& what) {
    throw ConfigError(cfg.source_ + ":" + std::to_string(lineno) + ": " + what);
  };
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = raw;
    if (const auto pos = line.find_first_of("#;"); pos != std::string::npos) line.erase(pos);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') error("unterminated section header '" + line + "'");
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty()) error("empty section name");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) error("expected 'key = value', got '" + line + "'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) error("missing key before '='");
    auto& entries = cfg.sections_[section];
    if (entries.contains(key)) {
      error("duplicate key '" + key + "' (first set on line " +
            std::to_string(entries[key].line) + ")");
    }
    entries[key] = {value, lineno};
  }
  return cfg;
}

KeyValueConfig KeyValueConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  return parse(in, path.string());
}

const KeyValueConfig::Entry* KeyValueConfig::find(const std::string& section,
                                                  const std::string& key) const {
  for (const std::string& s : {section, std::string()}) {
    const auto sec = sections_.find(s);
    if (sec == sections_.end()) continue;
    const auto it = sec->second.find(key);
    if (it != sec->second.end()) return &it->second;
  }
  return nullptr;
}

void KeyValueConfig::fail(const Entry& e, const std::string& key, const std::string& what) const {
  throw ConfigError(source_ + ":" + std::to_string(e.line) + ": key '" + key + "': " + what);
}

std::optional<double> KeyValueConfig::real(const std::string& section,
                                           const std::string& key) const {
  const Entry* e = find(section, key);
  if (!e) return std::nullopt;
  const std::string& s = e->value;
  const char* begin = s.data();
  if (!s.empty() && s.front() == '+') ++begin;
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(begin, s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
    fail(*e, key, "expected a finite decimal number, got '" + s + "'");
  }
  return v;
}

double KeyValueConfig::real_or(const std::string& section, const std::string& key,
                               double fallback) const {
  return real(section, key).value_or(fallback);
}

std::optional<long> KeyValueConfig::integer(const std::string& section,
                                            const std::string& key) const {
  const Entry* e = find(section, key);
  if (!e) return std::nullopt;
  const std::string& s = e->value;
  long v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    fail(*e, key, "expected an integer, got '" + s + "'");
  }
  return v;
}

std::optional<bool> KeyValueConfig::flag(const std::string& section,
                                         const std::string& key) const {
  const Entry* e = find(section, key);
  if (!e) return std::nullopt;
  if (e->value == "true" || e->value == "1" || e->value == "yes") return true;
  if (e->value == "false" || e->value == "0" || e->value == "no") return false;
  fail(*e, key, "expected true/false, got '" + e->value + "'");
}

std::optional<std::string> KeyValueConfig::text(const std::string& section,
                                                 const std::string& key) const {
  const Entry* e = find(section, key);
  if (!e) return std::nullopt;
  return e->value;
}

void KeyValueConfig::set(const std::string& section, const std::string& key, std::string value) {
  sections_[section][key] = {std::move(value), 0};
}

HamiltonianParams read_hamiltonian(const KeyValueConfig& cfg) {
  auto energy_like = [&](const char* key, const std::string& ev_key) {
    const auto gev = cfg.real("generator", key);
    const auto ev = cfg.real("generator", ev_key);
    if (gev && ev) {
      throw ConfigError(cfg.source() + ": set only one of '" + key + "' and '" + ev_key + "'");
    }
    if (ev) return *ev * kGeVPerEV;
    return gev.value_or(0.0);
  };
  return {energy_like("E", "E_ev"), energy_like("omega", "omega_ev")};
}

DissipationParams read_dissipation(const KeyValueConfig& cfg) {
  auto get = [&](const char* key) { return cfg.real_or("generator", key, 0.0); };
  return {get("a"), get("b"), get("c"), get("alpha"), get("beta"), get("gamma")};
}

void write_parameters(std::ostream& out, const HamiltonianParams& h, const DissipationParams& d) {
  out << "[generator]\n"
      << "E = " << format_real(h.energy) << "\n"
      << "omega = " << format_real(h.omega) << "\n"
      << "a = " << format_real(d.a) << "\n"
      << "b = " << format_real(d.b) << "\n"
      << "c = " << format_real(d.c) << "\n"
      << "alpha = " << format_real(d.alpha) << "\n"
      << "beta = " << format_real(d.beta) << "\n"
      << "gamma = " << format_real(d.gamma) << "\n";
}

}  // namespace cpi

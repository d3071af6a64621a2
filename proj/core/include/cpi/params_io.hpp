#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>

#include "cpi/generator.hpp"

namespace cpi {

/// hbar in GeV s.
inline constexpr double kHbarGeVSeconds = 6.582119569e-25;
inline constexpr double kGeVPerEV = 1e-9;

/// Natural-unit time (GeV^-1) for a duration in seconds.
inline constexpr double seconds_to_inverse_gev(double seconds) {
  return seconds / kHbarGeVSeconds;
}
inline constexpr double inverse_gev_to_seconds(double t) { return t * kHbarGeVSeconds; }

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Flat key = value text with optional [section] headers. '#' and ';' start
/// comments. Keys before the first header belong to the "" section.
///
///   [generator]
///   a     = 0
///   alpha = 0.71e-21   # GeV
class KeyValueConfig {
 public:
  struct Entry {
    std::string value;
    int line = 0;
  };

  static KeyValueConfig parse(std::istream& in, std::string source = "<input>");
  static KeyValueConfig load(const std::filesystem::path& path);

  /// Looks in `section`, then in the top-level "" section.
  [[nodiscard]] const Entry* find(const std::string& section, const std::string& key) const;
  [[nodiscard]] bool has(const std::string& section, const std::string& key) const {
    return find(section, key) != nullptr;
  }

  [[nodiscard]] std::optional<double> real(const std::string& section,
                                           const std::string& key) const;
  [[nodiscard]] double real_or(const std::string& section, const std::string& key,
                               double fallback) const;
  [[nodiscard]] std::optional<long> integer(const std::string& section,
                                            const std::string& key) const;
  [[nodiscard]] std::optional<bool> flag(const std::string& section, const std::string& key) const;
  [[nodiscard]] std::optional<std::string> text(const std::string& section,
                                                const std::string& key) const;

  void set(const std::string& section, const std::string& key, std::string value);

  [[nodiscard]] const std::string& source() const { return source_; }

 private:
  [[noreturn]] void fail(const Entry& e, const std::string& key, const std::string& what) const;

  std::string source_;
  std::map<std::string, std::map<std::string, Entry>> sections_;
};

/// Keys E / E_ev and omega / omega_ev, looked up in [generator].
HamiltonianParams read_hamiltonian(const KeyValueConfig& cfg);
/// Keys a, b, c, alpha, beta, gamma (GeV) in [generator]; missing keys are 0.
DissipationParams read_dissipation(const KeyValueConfig& cfg);

/// Writes a [generator] section that read_hamiltonian / read_dissipation
/// read back bit-exactly.
void write_parameters(std::ostream& out, const HamiltonianParams& h, const DissipationParams& d);

}  // namespace cpi

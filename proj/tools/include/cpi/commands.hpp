#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

namespace cpi::cli {

enum ExitCode : int {
  kOk = 0,
  kCpViolation = 2,
  kFitNotConverged = 3,
  kIoError = 4,
};

struct RunConfig {
  std::string command;  // simulate | validate-cp | fit | extract | synth | report
  std::filesystem::path config;
  std::filesystem::path data;
  std::filesystem::path out;  // empty: write to the output stream
  std::optional<std::uint64_t> seed;
  bool simplified = false;
  bool exact_only = false;
};

int run_validate_cp(const RunConfig& rc, std::ostream& out, std::ostream& err);
int run_simulate(const RunConfig& rc, std::ostream& out, std::ostream& err);
int run_synth(const RunConfig& rc, std::ostream& out, std::ostream& err);
int run_fit(const RunConfig& rc, std::ostream& out, std::ostream& err);
int run_extract(const RunConfig& rc, std::ostream& out, std::ostream& err);
/// Fit, contrast estimation, A / Re(B) and a / alpha extraction, the
/// conservation check and (with --simplified) the a = 0 alpha estimate.
int run_fit_extract(const RunConfig& rc, std::ostream& out, std::ostream& err);

/// Parses the command line and dispatches; returns the process exit code.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace cpi::cli

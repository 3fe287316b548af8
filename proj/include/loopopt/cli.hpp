#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace loopopt::cli {

enum class Command { Exp1, Exp2, Flow, SeqDiag, Spray, Classify };

enum ExitCode : int {
  kSuccess = 0,
  kValidation = 2,
  kAdmissibility = 3,
  kIo = 4,
};

struct RunConfig {
  Command command = Command::Exp1;
  /// Per-command default when unset: 8 for flow (the explicit curvature
  /// flow is stable only for alpha below ~2 r^2 / (N/2)^2), 256 otherwise.
  std::optional<std::size_t> n_samples;
  std::optional<std::size_t> steps;
  std::optional<double> alpha;
  std::optional<double> lambda;
  std::optional<std::string> metric;
  std::optional<std::string> objective;
  std::filesystem::path output_dir = ".";
  std::vector<std::string> formats = {"csv", "json", "svg"};
  std::uint64_t seed = 20240601;
  int kmax = 50;
  std::vector<int> dims = {4, 8, 16, 32};
  std::optional<std::filesystem::path> target_file;
  std::optional<std::filesystem::path> initial_file;
  std::string shape = "circle";

  bool wants(const std::string& format) const;
};

/// Parses argv; on --help or a parse error prints to the given streams and
/// returns the exit code in `exit_code`.
std::optional<RunConfig> parse_args(int argc, const char* const* argv, std::ostream& out,
                                    std::ostream& err, int& exit_code);

/// Runs one command, writing artifacts under cfg.output_dir. Returns the
/// process exit code; messages go to out/err.
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

int main(int argc, const char* const* argv);

}  // namespace loopopt::cli

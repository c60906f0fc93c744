#pragma once

// Command-line front end: configuration parsing and validation, and dispatch
// of each subcommand to the library with file I/O and result emission.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "umt/errors.hpp"

namespace umt::cli {

enum class Mode { kBound, kBrute, kDemoWorstCase, kGenerate, kTrain, kEval, kSweep };

std::string to_string(Mode m);

struct ExperimentConfig {
  Mode mode = Mode::kBound;

  std::filesystem::path instance;
  std::filesystem::path graph;
  std::filesystem::path codecs;
  std::filesystem::path corpora;  // directory of per-edge corpus files
  std::filesystem::path encoders;
  std::filesystem::path out;

  double epsilon = 0.0;
  double delta = 0.05;
  std::string objective = "all";  // sum | max | avg | all
  bool brute = false;
  int z_size = 2;  // |Z| for brute force

  int dim = 4;
  double ball_radius = 1.0;
  double rho = 2.0;
  double offset_bound = 1.0;
  double sigma = 0.0;
  int nuisance_dim = 0;

  // Used when no graph file is given.
  int languages = 5;
  int samples_per_edge = 200;

  std::optional<std::string> anchor;
  int sweeps = 0;
  double ridge = 1e-10;
  bool project = false;

  int eval_samples = 10000;
  std::string metric = "excess";
  double mc_slack = 0.05;
  double allowance = 0.05;  // tolerated fraction of failing records

  std::vector<int> n_list;
  int trials = 20;
  int population_samples = 200000;

  std::uint64_t seed = 0;
};

// Every violated constraint, each naming its field.
std::vector<std::string> validate(const ExperimentConfig& config);

class ConfigError : public Error {
 public:
  explicit ConfigError(std::vector<std::string> violations);
  const std::vector<std::string>& violations() const { return violations_; }

 private:
  std::vector<std::string> violations_;
};

// Parses argv (argv[0] is the program name); throws ConfigError listing all
// violations. Returns nullopt when help was requested (already printed).
std::optional<ExperimentConfig> parse_and_validate(const std::vector<std::string>& args, std::ostream& out);

inline constexpr int kExitOk = 0;
inline constexpr int kExitViolation = 1;
inline constexpr int kExitInvalidInput = 2;

// Runs a validated configuration; returns the exit status. Summary lines go
// to `out`, error messages to `err`.
int run(const ExperimentConfig& config, std::ostream& out, std::ostream& err);

// parse_and_validate followed by run, mapping every failure to its exit code.
int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace umt::cli

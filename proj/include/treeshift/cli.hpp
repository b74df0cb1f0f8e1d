#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace treeshift::cli {

enum ExitCode : int {
  kPass = 0,
  kMismatch = 1,
  kSpecError = 2,
  kInternalError = 3,
};

struct RunConfig {
  std::string command;
  std::string tree;
  std::string space = "2";
  std::optional<std::size_t> horizon;
  std::optional<std::size_t> depth;
  std::optional<std::size_t> ancestry;
  std::string out;
  std::string csv;
  bool exact = false;
  std::uint64_t seed = 0;

  // command-specific
  std::string experiment;
  std::string family = "infinite";
  std::string gamma = "1";
  std::vector<std::string> vertices;
  std::string vector_path;
  std::string center_u;
  std::string center_v;
  double radius_u = 0.5;
  double radius_v = 0.5;
  double slack = 1e-6;
};

/// Catalogue of `reproduce` experiments.
const std::vector<std::string>& experiments();

/// Executes a parsed configuration; report text goes to `out` unless
/// config.out names a file.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Parses argv-style arguments (args[0] is the program name) and runs them.
int main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace treeshift::cli

#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace holgr::verify {

struct Check {
  std::string name;
  std::string citation;
  bool passed = false;
  std::string detail;
};

struct Section {
  std::string id;      // "1".."9", "examples", "cli"
  std::string title;
  std::string tolerance;
  double time_limit = 0;  // seconds, 0 when unbounded
  double seconds = 0;
  bool passed = false;
  std::vector<Check> checks;
  nlohmann::json to_json() const;
};

constexpr std::uint64_t kDefaultSeed = 20240611;

// Groups of the character table criterion; every "catalog group" below means this list.
const std::vector<std::string>& catalog();

Section criterion(int k, std::uint64_t seed = kDefaultSeed);

// Examples checked by verify-paper beyond criteria 1-9.
Section paper_examples(std::uint64_t seed = kDefaultSeed);

// Runs argv through the CLI and returns (exit code, stdout).
using CliRunner = std::function<std::pair<int, std::string>(const std::vector<std::string>&)>;
Section cli_examples(const CliRunner& run);

}  // namespace holgr::verify

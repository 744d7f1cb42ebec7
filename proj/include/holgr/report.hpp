#pragma once

#include <set>
#include <string>
#include <vector>

#include "holgr/dt.hpp"

namespace holgr {

// Arithmetic side conditions are never computed; they enter as user assertions.
struct Scenario {
  std::string group;
  std::string conjecture = "etnc";  // etnc | local-epsilon | global-epsilon
  long r = 0;
  std::string base = "any";         // "Q" or "any"
  bool totally_real = false;
  std::set<std::string> asserted;   // commutator-field-abelian, quadratic-subfield-imaginary, class-number-one
  std::set<long> split_primes;      // p splits in the quadratic subfield K'
  std::set<long> class_number_coprime;
  long p = 0;                       // residue characteristic for local-epsilon

  static Scenario from_json(const nlohmann::json& j);  // throws std::invalid_argument on unsupported grammar
  nlohmann::json to_json() const;
};

struct ReportStatement {
  std::string text;
  std::vector<std::string> hypotheses;  // user-asserted leaves of the derivation
  std::vector<std::string> rules;       // sorted rule names used
  std::vector<int> support;
};

struct ConjectureReport {
  Scenario scenario;
  std::string group_name;
  std::vector<ReportStatement> statements;
  std::vector<Derivation> log;
  std::vector<std::string> texts() const;
  nlohmann::json to_json() const;
};

ConjectureReport conjecture_report(const Scenario& s, const FactBase& facts = FactBase::builtin());

}  // namespace holgr

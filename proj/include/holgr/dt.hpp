#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "holgr/wedderburn.hpp"
#include "json.hpp"

namespace holgr {

// Strongest known statement about DT(Z_p[G]); Unknown is a valid answer.
enum class DTKind { Unknown, Nontrivial, PPartNontrivial, Order, Cyclic, Trivial };
std::string dt_kind_name(DTKind k);

struct DTAssertion {
  DTKind kind = DTKind::Unknown;
  long k = 0;                       // Order and Cyclic
  std::vector<long> divisible_by;   // known quotient orders, > 1
  bool is_p_group(long p) const;    // only for Trivial, Order, Cyclic
  std::string to_string() const;
  nlohmann::json to_json() const;
};

struct Derivation {
  int id = 0;
  std::string rule;
  std::string citation;
  std::string subject;     // e.g. "S4/V4 at p=3"
  std::string conclusion;
  std::vector<int> premises;
};

// A tree over the log; premises are expanded recursively.
nlohmann::json derivation_tree(const std::vector<Derivation>& log, int root);

struct FactEntry {
  std::string id;
  std::string match;  // cyclic-of-order-p | isomorphic | inversion
  std::string group;  // for isomorphic
  long p = 0;         // 0 = any prime
  DTKind kind = DTKind::Unknown;
  std::string k_expr; // integer or "p-1"
  std::string citation;
};

class FactBase {
 public:
  static const FactBase& builtin();
  static FactBase from_json(const nlohmann::json& j);
  int version() const { return version_; }
  const std::vector<FactEntry>& facts() const { return facts_; }
  const std::vector<nlohmann::json>& unknown() const { return unknown_; }
  const std::string& citation(const std::string& rule) const;  // throws InternalError on an unlisted rule
  std::vector<std::string> rule_names() const;

 private:
  int version_ = 0;
  std::vector<FactEntry> facts_;
  std::vector<nlohmann::json> unknown_;
  std::map<std::string, std::string> rules_;
};

struct DTAnswer {
  std::string group;
  long p = 2;
  DTAssertion assertion;
  std::vector<int> support;  // derivation ids behind the assertion
  std::vector<Derivation> log;
  nlohmann::json to_json() const;
};

// Throws InternalError when the facts contradict each other.
DTAnswer dt_query(GroupPtr G, long p, const FactBase& facts = FactBase::builtin());
DTAnswer dt_query(const std::string& descriptor, long p, const FactBase& facts = FactBase::builtin());

enum class Tri { Yes, No, Unknown };
std::string tri_name(Tri t);

struct WeakHybridVerdict {
  Tri verdict = Tri::Unknown;
  std::vector<int> support;
  std::vector<Derivation> log;
  nlohmann::json to_json() const;
};

// Throws GroupError when N is not normal.
WeakHybridVerdict is_weakly_hybrid(GroupPtr G, const SubgroupHandle& N, long p, const FactBase& facts = FactBase::builtin());

struct MaximalityConsequence {
  bool group_ring_maximal = false;  // from wedderburn: every block has an integral idempotent
  std::string consequence;
  bool consistent = true;
  nlohmann::json to_json() const;
};

// Throws InternalError when the assertion contradicts the wedderburn data.
MaximalityConsequence maximality_consequence(const CharTable& t, long p, const DTAssertion& a);

// Canonical name of a small group up to isomorphism, or "" when not recognised.
std::string recognise_group(const FiniteGroup& G);
bool isomorphic(const FiniteGroup& A, const FiniteGroup& B);
// A = elements of odd order is an abelian subgroup of index 2 inverted by every element outside it.
bool is_inversion_group(const FiniteGroup& G);

}  // namespace holgr

#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "holgr/cyclo.hpp"
#include "holgr/group.hpp"
#include "json.hpp"

namespace holgr {

class CharTableError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using ClassFunction = std::vector<CycloNum>;  // one value per class, in class order

struct Character {
  ClassFunction values;  // embedded at the group exponent
  long degree = 0;
  long field_conductor = 1;
  SubgroupHandle kernel;
};

struct CharTable {
  GroupPtr group;
  std::vector<Character> chars;
  std::string method;  // "dixon-schneider", "abelian", or the closed-form family

  std::size_t count() const { return chars.size(); }
  const CycloNum& value(std::size_t chi, std::size_t cls) const { return chars[chi].values[cls]; }
  nlohmann::json to_json() const;
};

// Generic algorithm; exact after lifting from a finite prime field.
CharTable dixon_schneider_table(GroupPtr G);
// Homomorphisms to roots of unity; requires G abelian.
CharTable abelian_table(GroupPtr G);
// Family constructions (cyclic, dihedral, symmetric, quaternion, Frobenius with abelian kernel); nullopt otherwise.
std::optional<CharTable> closed_form_table(GroupPtr G);
// Abelian groups with many classes use the direct construction, everything else Dixon-Schneider.
CharTable character_table(GroupPtr G);

SubgroupHandle character_kernel(const FiniteGroup& G, const ClassFunction& chi);
ClassFunction induce_character(const FiniteGroup& G, const SubgroupGroup& H, const ClassFunction& psi);
// Inflation of a class function of G/N along the projection.
ClassFunction inflate_character(const FiniteGroup& G, const Quotient& Q, const ClassFunction& psi);

// <a, b> = |G|^-1 sum_g a(g) conj(b(g)).
CycloNum inner_product(const FiniteGroup& G, const ClassFunction& a, const ClassFunction& b);

struct OrthogonalityReport {
  bool rows_ok = true;
  bool columns_ok = true;
  bool degrees_ok = true;  // sum of squared degrees equals |G|
  std::vector<std::string> failures;
  bool ok() const { return rows_ok && columns_ok && degrees_ok; }
};
OrthogonalityReport check_orthogonality(const CharTable& t);

// Same multiset of rows.
bool same_up_to_row_permutation(const CharTable& a, const CharTable& b);

// Trivial character first, then by degree, then descending on canonical values.
void sort_characters(CharTable& t);
// Fills degree, field conductor and kernel from the values.
Character make_character(const FiniteGroup& G, ClassFunction values);

}  // namespace holgr

#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace holgr {

using Perm = std::vector<std::uint16_t>;

class GroupError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

constexpr long kDefaultOrderBound = 2000;

// Catalog descriptor or explicit permutation generators.
struct GroupSpec {
  std::string family;  // cyclic dihedral symmetric alternating quaternion affine inversion metacyclic frob72 product generators
  long n = 0;          // cyclic: order; dihedral: half order; symmetric/alternating: degree
  long q = 0;          // affine
  long ell = 0, p = 0; // metacyclic C_ell : C_p
  std::vector<long> abelian;       // inversion: cyclic factors of A
  std::vector<GroupSpec> factors;  // product
  std::vector<Perm> generators;    // generators

  static GroupSpec parse(const std::string& descriptor);
  static GroupSpec from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
  std::string name() const;  // canonical descriptor, e.g. "Aff(8)", "S3xC2"
};

struct ConjClassData {
  std::vector<int> class_of;               // element id -> class id
  std::vector<std::vector<int>> classes;   // sorted members; class 0 = {identity}
  std::vector<int> representatives;        // smallest id of each class
  std::vector<long> sizes;
  std::vector<long> element_orders;        // per class
  std::vector<int> inverse_map;            // class of inverses
  std::vector<std::vector<int>> power_table;  // [c][k mod exponent]
  long group_order = 0;
  long exponent = 1;

  std::size_t count() const { return classes.size(); }
  int power_map(int c, long k) const;
  long centralizer_order(int c) const { return group_order / sizes[static_cast<std::size_t>(c)]; }
};

class FiniteGroup {
 public:
  // Elements are sorted lexicographically as permutations, so the identity is id 0.
  FiniteGroup(std::vector<Perm> gens, long bound, std::string tag, GroupSpec spec);

  long order() const { return static_cast<long>(perms_.size()); }
  int identity() const { return 0; }
  int mul(int a, int b) const;
  int inv(int a) const { return inverse_[static_cast<std::size_t>(a)]; }
  int pow(int a, long k) const;
  int commutator(int a, int b) const { return mul(mul(inv(a), inv(b)), mul(a, b)); }
  int conj(int g, int x) const { return mul(mul(inv(x), g), x); }  // x^-1 g x
  long element_order(int a) const { return orders_[static_cast<std::size_t>(a)]; }
  long exponent() const { return classes_.exponent; }
  int degree() const { return degree_; }
  const Perm& perm(int a) const { return perms_[static_cast<std::size_t>(a)]; }
  int find(const Perm& p) const;  // -1 when absent
  const std::vector<int>& generators() const { return gens_; }
  const ConjClassData& classes() const { return classes_; }
  const std::string& family_tag() const { return tag_; }
  const GroupSpec& spec() const { return spec_; }
  bool has_cayley_table() const { return !table_.empty(); }

 private:
  int degree_ = 0;
  std::vector<Perm> perms_;
  std::vector<int> gens_;
  std::vector<int> table_;
  std::vector<int> inverse_;
  std::vector<long> orders_;
  std::vector<std::pair<std::uint64_t, int>> index_;  // sorted (hash, id)
  ConjClassData classes_;
  std::string tag_;
  GroupSpec spec_;

  int lookup(const Perm& p) const;
  void build_classes();
};

using GroupPtr = std::shared_ptr<const FiniteGroup>;

GroupPtr build_group(const GroupSpec& spec, long bound = kDefaultOrderBound);
GroupPtr build_group(const std::string& descriptor, long bound = kDefaultOrderBound);

struct SubgroupHandle {
  std::vector<int> members;  // sorted ids
  std::vector<char> in;      // membership mask over G
  bool is_normal = false;
  bool is_abelian = false;
  long order() const { return static_cast<long>(members.size()); }
  bool contains(int g) const { return in[static_cast<std::size_t>(g)] != 0; }
  bool operator==(const SubgroupHandle& o) const { return members == o.members; }
};

SubgroupHandle subgroup_generated(const FiniteGroup& G, const std::vector<int>& gens);
SubgroupHandle normal_closure(const FiniteGroup& G, const std::vector<int>& gens);
SubgroupHandle make_subgroup(const FiniteGroup& G, std::vector<int> members);  // caller guarantees closure
SubgroupHandle trivial_subgroup(const FiniteGroup& G);
SubgroupHandle whole_group(const FiniteGroup& G);
bool is_normal(const FiniteGroup& G, const SubgroupHandle& H);
std::vector<int> subgroup_classes(const FiniteGroup& G, const SubgroupHandle& N);  // classes inside a normal N

const ConjClassData& conjugacy_classes(const FiniteGroup& G);
std::vector<SubgroupHandle> normal_subgroups(const FiniteGroup& G);
SubgroupHandle commutator_subgroup(const FiniteGroup& G);
std::vector<int> centralizer(const FiniteGroup& G, int g);
std::vector<int> p_singular_classes(const FiniteGroup& G, long p);

struct FrobeniusData {
  SubgroupHandle kernel;
  SubgroupHandle complement;
};
std::optional<FrobeniusData> frobenius_structure(const FiniteGroup& G);
// The semidirect criterion: H acts on N without nontrivial fixed points and N H = G, N meet H = 1.
bool fixed_point_free_action(const FiniteGroup& G, const SubgroupHandle& N, const SubgroupHandle& H);

// G/N as a permutation group on the cosets; proj[g] is the image of g.
struct Quotient {
  GroupPtr group;
  std::vector<int> proj;
};
Quotient quotient_group(const FiniteGroup& G, const SubgroupHandle& N);

// H as a standalone group; embed[h'] is the id in G of element h' of the new group.
struct SubgroupGroup {
  GroupPtr group;
  std::vector<int> embed;
};
SubgroupGroup subgroup_as_group(const FiniteGroup& G, const SubgroupHandle& H);

// Internal direct decompositions G = A x B with A, B normal, both nontrivial.
std::vector<std::pair<SubgroupHandle, SubgroupHandle>> direct_decompositions(const FiniteGroup& G);

// Selects a normal subgroup by "commutator", "trivial", "whole", "kernel" (Frobenius) or an order.
SubgroupHandle select_normal(const FiniteGroup& G, const std::string& selector);

// Finite field F_q with elements coded 0..q-1 in base p digits over a fixed irreducible modulus.
class FiniteField {
 public:
  explicit FiniteField(long q);
  long size() const { return q_; }
  long characteristic() const { return p_; }
  long add(long a, long b) const;
  long neg(long a) const;
  long mul(long a, long b) const;
  long primitive_element() const { return prim_; }

 private:
  long q_, p_, k_;
  std::vector<long> modulus_;  // monic, degree k, constant first
  std::vector<long> mul_table_;
  long prim_ = 1;
};

}  // namespace holgr

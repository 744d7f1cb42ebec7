#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "holgr/chartable.hpp"
#include "holgr/wedderburn.hpp"
#include "json.hpp"

namespace holgr {

// Coefficient per element id.
using GroupRingElem = std::vector<Rational>;

struct GroupRingMatrix {
  long n = 0;
  std::vector<GroupRingElem> entries;  // row-major

  GroupRingElem& at(long i, long j) { return entries[static_cast<std::size_t>(i * n + j)]; }
  const GroupRingElem& at(long i, long j) const { return entries[static_cast<std::size_t>(i * n + j)]; }
};

GroupRingElem gr_zero(const FiniteGroup& G);
GroupRingElem gr_scalar(const FiniteGroup& G, const Rational& r);
GroupRingElem gr_basis(const FiniteGroup& G, int g);
GroupRingElem gr_add(const GroupRingElem& a, const GroupRingElem& b);
GroupRingElem gr_sub(const GroupRingElem& a, const GroupRingElem& b);
GroupRingElem gr_mul(const FiniteGroup& G, const GroupRingElem& a, const GroupRingElem& b);
bool gr_is_p_integral(const GroupRingElem& a, long p);
bool gr_is_integral(const GroupRingElem& a);
// chi(a) = sum_g a_g chi(g).
CycloNum gr_character_value(const FiniteGroup& G, const ClassFunction& chi, const GroupRingElem& a);

GroupRingMatrix mat_identity(const FiniteGroup& G, long n);
GroupRingMatrix mat_scalar(const FiniteGroup& G, long n, const GroupRingElem& a);
GroupRingMatrix mat_mul(const FiniteGroup& G, const GroupRingMatrix& A, const GroupRingMatrix& B);
GroupRingMatrix mat_add(const GroupRingMatrix& A, const GroupRingMatrix& B);
// Left multiplication of every entry by a (central in the callers that matter).
GroupRingMatrix mat_left_scale(const FiniteGroup& G, const GroupRingElem& a, const GroupRingMatrix& A);
bool mat_equal(const GroupRingMatrix& A, const GroupRingMatrix& B);

nlohmann::json gr_to_json(const GroupRingElem& a);
GroupRingElem gr_from_json(const FiniteGroup& G, const nlohmann::json& j);
nlohmann::json mat_to_json(const GroupRingMatrix& A);
// Accepts a single element, a flat list of n^2 elements, or a list of rows.
GroupRingMatrix mat_from_json(const FiniteGroup& G, const nlohmann::json& j);

// Uniform coefficients in [-height, height].
GroupRingMatrix random_matrix(const FiniteGroup& G, long n, std::uint64_t seed, long height = 2);

// Per-character values, indexed like the table rows.
struct CentralElement {
  std::vector<CycloNum> values;
};

CentralElement central_one(const CharTable& t);
CentralElement central_add(const CentralElement& a, const CentralElement& b);
CentralElement central_mul(const CentralElement& a, const CentralElement& b);
CentralElement central_scale(const CentralElement& a, const Rational& r);
// Sum of e_chi over the listed characters.
CentralElement idempotent_of(const CharTable& t, const std::vector<int>& chars);
// e_N = sum of e_chi over characters with N in their kernel.
CentralElement idempotent_of_normal(const CharTable& t, const SubgroupHandle& N);
bool is_galois_equivariant(const CharTable& t, const CentralElement& x);
// Throws CharTableError when a is not central.
CentralElement central_from_group_ring(const CharTable& t, const GroupRingElem& a);
// Throws InternalError when x is not Galois-equivariant (coefficients would be irrational).
GroupRingElem central_to_group_ring(const CharTable& t, const CentralElement& x);
bool central_values_p_integral(const CentralElement& x, long p);
// "e1 - e2 + 3*e4" style text in table labels e1..ek.
std::string central_to_string(const CentralElement& x);
nlohmann::json central_to_json(const CentralElement& x);
CentralElement central_from_json(const CharTable& t, const nlohmann::json& j);

struct ReducedCharPoly {
  int character = 0;
  std::vector<CycloNum> coeffs;  // alpha_0 .. alpha_N, alpha_N = 1, N = chi(1) n
  long degree() const { return static_cast<long>(coeffs.size()) - 1; }
};

ReducedCharPoly reduced_char_poly(const CharTable& t, const GroupRingMatrix& H, int chi);
// All characters at once, sharing the matrix powers.
std::vector<ReducedCharPoly> reduced_char_polys(const CharTable& t, const GroupRingMatrix& H);
CentralElement reduced_norm(const CharTable& t, const GroupRingMatrix& H);
// nr from precomputed polynomials.
CentralElement reduced_norm_from(const std::vector<ReducedCharPoly>& polys, long n, const CharTable& t);
// H* with H* H = H H* = nr(H) 1; assembled over Q(zeta_e)[G] and checked to be rational.
GroupRingMatrix generalized_adjoint(const CharTable& t, const GroupRingMatrix& H);
GroupRingMatrix generalized_adjoint(const CharTable& t, const GroupRingMatrix& H, const std::vector<ReducedCharPoly>& polys);

// Every entry of A is integral over Z: reduced characteristic polynomials with algebraic-integer coefficients.
bool entries_integral_over_z(const CharTable& t, const GroupRingMatrix& A);

enum class Membership { CertifiedIn, SampledNoCounterexample, Counterexample };
std::string membership_name(Membership m);

struct MembershipResult {
  Membership verdict = Membership::SampledNoCounterexample;
  std::string certificate;  // which certificate applied, empty when sampled
  long samples = 0;
  std::optional<GroupRingMatrix> counterexample;
  nlohmann::json to_json() const;
};

// x in F_p(G): every block value has valuation at least the conductor exponent.
bool in_central_conductor(const CharTable& t, const std::vector<PadicBlock>& blocks, const ConductorData& c,
                          const CentralElement& x);

// Throws std::invalid_argument when x is not p-integral.
MembershipResult denominator_membership(const CharTable& t, const CentralElement& x, long p, long budget, std::uint64_t seed);

// Structured witnesses: group elements, 1 + g, -1, class sums and products of such.
std::vector<GroupRingMatrix> structured_witnesses(const FiniteGroup& G);

struct NormIdealProbe {
  long p = 2;
  long samples = 0;
  long rank = 0;
  long class_count = 0;
  std::vector<std::vector<Rational>> basis;  // class-sum coordinates, echelon over Z_(p)
  bool inside_maximal_center = true;
  std::optional<long> index_in_maximal_center;  // p-exponent of [zeta(M_p) : L]
  long maximal_over_group_ring = 0;              // p-exponent of [zeta(M_p) : zeta(Z_p G)]
  bool equals_maximal_center = false;
  bool equals_group_ring_center = false;
  bool contains_twice_maximal_center = false;
  std::vector<std::pair<std::string, bool>> named_members;
  std::string expected;       // certified relation when the group is covered, else empty
  std::optional<bool> expected_holds;
  nlohmann::json to_json() const;
};

NormIdealProbe norm_ideal_probe(const CharTable& t, long p, long budget, std::uint64_t seed);

// Number of worker threads: HOL_THREADS when set, else the hardware concurrency.
unsigned worker_threads();

}  // namespace holgr

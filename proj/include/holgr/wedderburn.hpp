#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "holgr/chartable.hpp"
#include "json.hpp"

namespace holgr {

// Invariant violations inside the library, never caused by user input.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// F_i as the fixed field of `stabilizer` inside Q_p(zeta_m); residues are units mod m.
struct LocalFieldData {
  long p = 2;
  long m = 1;
  std::vector<long> decomposition;  // D, sorted
  std::vector<long> stabilizer;     // subgroup of D fixing the character, sorted
  long f = 1;
  long e_ram = 1;
  long d = 0;
  long local_degree() const { return f * e_ram; }
};

LocalFieldData local_field_data(long m, long p, const std::vector<long>& stabilizer_in_units);
// Different exponent of F_i over Q_p measured in the prime of O_i.
long different_valuation(const LocalFieldData& F);

struct PadicBlock {
  int id = 0;
  long p = 2;
  std::vector<int> orbit;  // character indices, sorted
  long n = 1;              // common degree
  LocalFieldData field;
  bool idempotent_integral = false;
  std::optional<long> schur_index;  // 1 when known
  std::optional<long> matrix_size;  // n when the Schur index is 1
};

std::vector<PadicBlock> padic_blocks(const CharTable& t, long p);

struct IdempotentCertificate {
  bool integral = false;           // criterion (iv)
  long vp_degree = 0, vp_order = 0;
  bool unramified = false;
  bool vanishes_on_p_singular = false;
  std::vector<int> checked_classes;
};
// Throws InternalError when the degree criterion and the computed field data disagree.
IdempotentCertificate idempotent_integral(const PadicBlock& b, const CharTable& t);

struct HybridWitness {
  int character = 0;
  long degree = 0;
  long vp_degree = 0, vp_order = 0;
};

struct HybridReport {
  std::string group;
  long normal_order = 0;
  long p = 2;
  bool is_hybrid = false;
  std::optional<HybridWitness> witness;
  std::vector<int> block_split;  // blocks with e_i e_N = 0
  std::string quotient_order_desc;
  nlohmann::json to_json() const;
};

HybridReport is_hybrid(const CharTable& t, const SubgroupHandle& N, long p);

struct ConductorEntry {
  int block = 0;
  long exponent = 0;  // in the prime of O_i
};

struct ConductorData {
  long p = 2;
  std::vector<ConductorEntry> entries;
  bool maximal() const;
  nlohmann::json to_json(const std::vector<PadicBlock>& blocks) const;
};

ConductorData central_conductor(const CharTable& t, long p);
ConductorData central_conductor(const CharTable& t, const std::vector<PadicBlock>& blocks);

// Per-block JSON records shared by the blocks and conductor reports.
nlohmann::json block_json(const PadicBlock& b, const CharTable& t, std::optional<long> conductor_exponent);

// Galois conjugate chi^sigma_k of a row, values kept at the row's conductor.
ClassFunction galois_conjugate(const ClassFunction& row, long k);
// Index of an identical row in the table, -1 if absent.
int find_row(const CharTable& t, const ClassFunction& row);

}  // namespace holgr

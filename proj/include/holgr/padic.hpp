#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "holgr/cyclo.hpp"

namespace holgr {

struct LocalFieldData;

class PrecisionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Q_p(zeta_m) modelled as W[pi]/E(pi) mod p^K, W unramified of degree f, pi = 1 - zeta_{p^a}.
// The embedding sends zeta_{m'} to a Teichmueller root, so one fixed prime above p is used throughout.
class PadicCyclotomic {
 public:
  PadicCyclotomic(long m, long p, long precision);

  long conductor() const { return m_; }
  long prime() const { return p_; }
  long ramification() const { return eram_; }
  long residue_degree() const { return f_; }
  long precision() const { return K_; }

  // Valuation in the prime of Q_p(zeta_m); nullopt for zero. Raises the precision internally as needed.
  std::optional<long> valuation(const CycloNum& x) const;

 private:
  using WElem = std::vector<Integer>;  // f coefficients
  using RElem = std::vector<WElem>;    // eram coefficients in pi

  long m_, p_, K_;
  long a_ = 0, pa_ = 1, mp_ = 1, f_ = 1, eram_ = 1;
  Integer pK_;
  std::vector<Integer> g_;  // monic lift of an irreducible factor of Phi_{m'} mod p, constant first
  std::vector<Integer> E_;  // monic Eisenstein polynomial in pi, constant first
  std::vector<RElem> zeta_pow_;

  WElem wmul(const WElem& a, const WElem& b) const;
  RElem rmul(const RElem& a, const RElem& b) const;
  std::optional<long> valuation_at_precision(const CycloNum& x, bool& exhausted) const;
};

// Shared instance per (m, p) at the default working precision.
const PadicCyclotomic& padic_model(long m, long p);

// Valuation of x in the prime of F (x must lie in F), normalised so a uniformiser of F has valuation 1.
std::optional<long> field_valuation(const LocalFieldData& F, const CycloNum& x);

}  // namespace holgr

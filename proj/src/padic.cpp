#include "holgr/padic.hpp"

#include <map>
#include <memory>

#include "holgr/wedderburn.hpp"

namespace holgr {

namespace {

constexpr long kDefaultPrecision = 24;
constexpr long kMaxPrecision = 1536;
constexpr long kFactorSearchCap = 2000000;

long multiplicative_order(long p, long n) {
  if (n == 1) return 1;
  long x = p % n, k = 1;
  while (x != 1) {
    x = (x * p) % n;
    ++k;
  }
  return k;
}

// Remainder of a mod b over F_p, b monic.
std::vector<long> poly_rem_fp(std::vector<long> a, const std::vector<long>& b, long p) {
  const std::size_t db = b.size() - 1;
  while (a.size() > db) {
    long c = mod_l(a.back(), p);
    std::size_t shift = a.size() - 1 - db;
    for (std::size_t i = 0; i <= db; ++i) a[shift + i] = mod_l(a[shift + i] - c * b[i], p);
    a.pop_back();
  }
  for (auto& x : a) x = mod_l(x, p);
  return a;
}

std::vector<long> irreducible_factor(long mp, long p, long f) {
  const auto& phi = cyclotomic_polynomial(mp);
  long total = 1;
  for (long i = 0; i < f; ++i) {
    total *= p;
    if (total > kFactorSearchCap) throw PrecisionError("residue field too large for the factor search");
  }
  for (long code = 0; code < total; ++code) {
    std::vector<long> g(static_cast<std::size_t>(f) + 1, 0);
    long c = code;
    for (long i = 0; i < f; ++i) {
      g[static_cast<std::size_t>(i)] = c % p;
      c /= p;
    }
    g[static_cast<std::size_t>(f)] = 1;
    auto r = poly_rem_fp(phi, g, p);
    bool zero = true;
    for (long x : r) zero = zero && x == 0;
    if (zero) return g;
  }
  throw InternalError("no irreducible factor of the cyclotomic polynomial found");
}

Integer binom(long n, long k) {
  Integer r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return r;
}

long vp_integer(const Integer& x, long p, long cap) {
  if (x == 0) return cap;
  Integer y = x;
  long v = 0;
  Integer P(p);
  while (v < cap && mpz_divisible_p(y.get_mpz_t(), P.get_mpz_t())) {
    y /= P;
    ++v;
  }
  return v;
}

}  // namespace

PadicCyclotomic::PadicCyclotomic(long m, long p, long precision) : m_(m), p_(p), K_(precision) {
  if (!is_prime(p)) throw std::invalid_argument("p must be prime");
  a_ = vp(m, p);
  for (long i = 0; i < a_; ++i) pa_ *= p;
  mp_ = m / pa_;
  f_ = multiplicative_order(p, mp_);
  eram_ = euler_phi(pa_);
  mpz_ui_pow_ui(pK_.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(K_));

  for (long c : irreducible_factor(mp_, p, f_)) g_.emplace_back(c);

  // E(pi) = Phi_{p^a}(1 - pi), made monic.
  std::vector<long> phi_pa = cyclotomic_polynomial(pa_);
  E_.assign(static_cast<std::size_t>(eram_) + 1, Integer(0));
  for (std::size_t j = 0; j < phi_pa.size(); ++j) {
    if (phi_pa[j] == 0) continue;
    for (long i = 0; i <= static_cast<long>(j); ++i) {
      Integer t = binom(static_cast<long>(j), i) * phi_pa[j];
      if (i % 2) t = -t;
      E_[static_cast<std::size_t>(i)] += t;
    }
  }
  if (E_.back() < 0)
    for (auto& c : E_) c = -c;
  if (E_.back() != 1) throw InternalError("Eisenstein polynomial is not monic");

  // Teichmueller root of unity lifting y mod g.
  WElem y(static_cast<std::size_t>(f_), Integer(0));
  if (f_ == 1) {
    y[0] = -g_[0];
    mpz_fdiv_r(y[0].get_mpz_t(), y[0].get_mpz_t(), pK_.get_mpz_t());
  } else {
    y[1] = 1;
  }
  long q = 1;
  for (long i = 0; i < f_; ++i) q *= p;
  WElem one(static_cast<std::size_t>(f_), Integer(0));
  one[0] = 1;
  WElem rho = y;
  for (long it = 0; it < K_; ++it) {
    WElem acc = one, base = rho;
    for (long e = q; e > 0; e >>= 1) {
      if (e & 1) acc = wmul(acc, base);
      base = wmul(base, base);
    }
    rho = acc;
  }

  std::vector<WElem> rho_pow(static_cast<std::size_t>(mp_));
  rho_pow[0] = one;
  for (long j = 1; j < mp_; ++j) rho_pow[static_cast<std::size_t>(j)] = wmul(rho_pow[static_cast<std::size_t>(j - 1)], rho);
  WElem zero(static_cast<std::size_t>(f_), Integer(0));
  RElem r_one(static_cast<std::size_t>(eram_), zero);
  r_one[0] = one;
  RElem zp = r_one;  // 1 - pi
  if (eram_ > 1) {
    zp[1][0] = pK_ - 1;
  } else {
    // Degree one: pi = -E_0, which is 0 for p^a = 1 and 2 for p^a = 2.
    zp[0][0] = 1 + E_[0];
    mpz_fdiv_r(zp[0][0].get_mpz_t(), zp[0][0].get_mpz_t(), pK_.get_mpz_t());
  }
  std::vector<RElem> zp_pow(static_cast<std::size_t>(pa_));
  zp_pow[0] = r_one;
  for (long j = 1; j < pa_; ++j) zp_pow[static_cast<std::size_t>(j)] = rmul(zp_pow[static_cast<std::size_t>(j - 1)], zp);

  // 1/m = alpha/m' + beta/p^a.
  long alpha = 0, beta = 0;
  for (long t = 0; t < mp_; ++t)
    if (mod_l(t * pa_, mp_) == 1 % mp_) {
      alpha = t;
      break;
    }
  beta = (1 - alpha * pa_) / mp_;
  zeta_pow_.resize(static_cast<std::size_t>(m_));
  for (long k = 0; k < m_; ++k) {
    const auto& w = rho_pow[static_cast<std::size_t>(mod_l(alpha * k, mp_))];
    RElem r = zp_pow[static_cast<std::size_t>(mod_l(beta * k, pa_))];
    for (auto& c : r) c = wmul(c, w);
    zeta_pow_[static_cast<std::size_t>(k)] = r;
  }
}

PadicCyclotomic::WElem PadicCyclotomic::wmul(const WElem& a, const WElem& b) const {
  const std::size_t f = static_cast<std::size_t>(f_);
  std::vector<Integer> prod(2 * f - 1, Integer(0));
  for (std::size_t i = 0; i < f; ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < f; ++j) prod[i + j] += a[i] * b[j];
  }
  for (std::size_t d = prod.size() - 1; d >= f; --d) {
    Integer c = prod[d];
    if (c != 0)
      for (std::size_t i = 0; i <= f; ++i) prod[d - f + i] -= c * g_[i];
  }
  WElem out(f);
  for (std::size_t i = 0; i < f; ++i) mpz_fdiv_r(out[i].get_mpz_t(), prod[i].get_mpz_t(), pK_.get_mpz_t());
  return out;
}

PadicCyclotomic::RElem PadicCyclotomic::rmul(const RElem& a, const RElem& b) const {
  const std::size_t e = static_cast<std::size_t>(eram_), f = static_cast<std::size_t>(f_);
  std::vector<WElem> prod(2 * e - 1, WElem(f, Integer(0)));
  for (std::size_t i = 0; i < e; ++i)
    for (std::size_t j = 0; j < e; ++j) {
      auto t = wmul(a[i], b[j]);
      for (std::size_t k = 0; k < f; ++k) prod[i + j][k] += t[k];
    }
  for (std::size_t d = prod.size() - 1; d >= e; --d) {
    const WElem c = prod[d];
    for (std::size_t i = 0; i <= e; ++i)
      for (std::size_t k = 0; k < f; ++k) prod[d - e + i][k] -= c[k] * E_[i];
  }
  RElem out(prod.begin(), prod.begin() + static_cast<long>(e));
  for (auto& w : out)
    for (auto& c : w) mpz_fdiv_r(c.get_mpz_t(), c.get_mpz_t(), pK_.get_mpz_t());
  return out;
}

std::optional<long> PadicCyclotomic::valuation_at_precision(const CycloNum& x, bool& exhausted) const {
  exhausted = false;
  if (x.is_zero()) return std::nullopt;
  CycloNum y = x.descend(x.minimal_conductor());
  if (m_ % y.conductor() != 0) throw std::invalid_argument("element does not lie in Q(zeta_m)");
  y = y.embed(m_);
  Integer den = 1;
  for (const auto& c : y.coeffs()) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.get_den_mpz_t());
  const std::size_t e = static_cast<std::size_t>(eram_), f = static_cast<std::size_t>(f_);
  RElem sum(e, WElem(f, Integer(0)));
  for (std::size_t k = 0; k < y.coeffs().size(); ++k) {
    Integer n = y.coeffs()[k].get_num() * (den / y.coeffs()[k].get_den());
    if (n == 0) continue;
    const auto& z = zeta_pow_[k];
    for (std::size_t i = 0; i < e; ++i)
      for (std::size_t j = 0; j < f; ++j) sum[i][j] += n * z[i][j];
  }
  long best = -1;
  for (std::size_t i = 0; i < e; ++i) {
    long vi = K_;
    for (std::size_t j = 0; j < f; ++j) {
      Integer c;
      mpz_fdiv_r(c.get_mpz_t(), sum[i][j].get_mpz_t(), pK_.get_mpz_t());
      vi = std::min(vi, vp_integer(c, p_, K_));
    }
    if (vi >= K_) continue;
    long cand = eram_ * vi + static_cast<long>(i);
    if (best < 0 || cand < best) best = cand;
  }
  if (best < 0 || best >= eram_ * K_) {
    exhausted = true;
    return std::nullopt;
  }
  return best - eram_ * vp_integer(den, p_, 1L << 30);
}

std::optional<long> PadicCyclotomic::valuation(const CycloNum& x) const {
  bool exhausted = false;
  auto v = valuation_at_precision(x, exhausted);
  if (!exhausted) return v;
  for (long K = 2 * K_; K <= kMaxPrecision; K *= 2) {
    PadicCyclotomic finer(m_, p_, K);
    v = finer.valuation_at_precision(x, exhausted);
    if (!exhausted) return v;
  }
  throw PrecisionError("p-adic precision exhausted while computing a valuation");
}

const PadicCyclotomic& padic_model(long m, long p) {
  thread_local std::map<std::pair<long, long>, std::unique_ptr<PadicCyclotomic>> cache;
  auto& slot = cache[{m, p}];
  if (!slot) slot = std::make_unique<PadicCyclotomic>(m, p, kDefaultPrecision);
  return *slot;
}

std::optional<long> field_valuation(const LocalFieldData& F, const CycloNum& x) {
  const auto& model = padic_model(F.m, F.p);
  auto v = model.valuation(x);
  if (!v) return v;
  const long ratio = model.ramification() / F.e_ram;
  if (*v % ratio != 0) throw InternalError("element does not lie in the block field");
  return *v / ratio;
}

}  // namespace holgr

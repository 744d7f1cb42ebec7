#include "holgr/cyclo.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <sstream>

namespace holgr {

bool is_prime(long n) {
  if (n < 2) return false;
  for (long d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

long gcd_l(long a, long b) { return std::gcd(a, b); }
long lcm_l(long a, long b) { return a / std::gcd(a, b) * b; }

long mod_l(long a, long m) {
  long r = a % m;
  return r < 0 ? r + m : r;
}

long pow_mod(long base, long exp, long m) {
  __int128 r = 1 % m, b = mod_l(base, m);
  while (exp > 0) {
    if (exp & 1) r = r * b % m;
    b = b * b % m;
    exp >>= 1;
  }
  return static_cast<long>(r);
}

std::vector<long> prime_divisors(long n) {
  std::vector<long> out;
  for (long d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

std::vector<long> divisors(long n) {
  std::vector<long> out;
  for (long d = 1; d <= n; ++d)
    if (n % d == 0) out.push_back(d);
  return out;
}

std::optional<std::pair<long, long>> prime_power(long n) {
  if (n < 2) return std::nullopt;
  auto ps = prime_divisors(n);
  if (ps.size() != 1) return std::nullopt;
  long a = 0;
  while (n % ps[0] == 0) {
    n /= ps[0];
    ++a;
  }
  return std::make_pair(ps[0], a);
}

long euler_phi(long m) {
  long r = m;
  for (long p : prime_divisors(m)) r = r / p * (p - 1);
  return r;
}

std::optional<long> padic_valuation(const Integer& x, long p) {
  if (x == 0) return std::nullopt;
  Integer y = abs(x);
  long v = 0;
  while (mpz_divisible_ui_p(y.get_mpz_t(), static_cast<unsigned long>(p))) {
    mpz_divexact_ui(y.get_mpz_t(), y.get_mpz_t(), static_cast<unsigned long>(p));
    ++v;
  }
  return v;
}

std::optional<long> padic_valuation(const Rational& x, long p) {
  if (x == 0) return std::nullopt;
  return *padic_valuation(x.get_num(), p) - *padic_valuation(x.get_den(), p);
}

long vp(long n, long p) {
  if (n == 0) throw ArithmeticError("vp of zero");
  long v = 0;
  n = n < 0 ? -n : n;
  while (n % p == 0) {
    n /= p;
    ++v;
  }
  return v;
}

bool is_p_integral(const Rational& x, long p) {
  return !mpz_divisible_ui_p(x.get_den_mpz_t(), static_cast<unsigned long>(p));
}

RationalVal RationalVal::of(const Rational& x, long p) { return {x, p, padic_valuation(x, p)}; }

std::string RationalVal::to_string() const {
  return valuation ? std::to_string(*valuation) : std::string("inf");
}

namespace {

struct CycloData {
  long m = 1;
  long phi = 1;
  std::vector<long> poly;              // Phi_m, constant term first
  std::vector<std::vector<long>> red;  // red[k] = z^k mod Phi_m, k in [0, m)
};

std::vector<long> poly_divexact(std::vector<long> num, const std::vector<long>& den) {
  // den monic
  long dn = static_cast<long>(den.size()) - 1;
  long nn = static_cast<long>(num.size()) - 1;
  std::vector<long> q(static_cast<size_t>(nn - dn + 1), 0);
  for (long k = nn; k >= dn; --k) {
    long c = num[static_cast<size_t>(k)];
    q[static_cast<size_t>(k - dn)] = c;
    if (c == 0) continue;
    for (long i = 0; i <= dn; ++i) num[static_cast<size_t>(k - dn + i)] -= c * den[static_cast<size_t>(i)];
  }
  for (long i = 0; i < dn; ++i)
    if (num[static_cast<size_t>(i)] != 0) throw ArithmeticError("inexact cyclotomic division");
  return q;
}

std::shared_ptr<const CycloData> build_data(long m);

std::mutex g_cache_mu;
std::map<long, std::shared_ptr<const CycloData>> g_cache;

std::shared_ptr<const CycloData> data_for(long m) {
  thread_local std::shared_ptr<const CycloData> last;
  if (last && last->m == m) return last;
  {
    std::lock_guard<std::mutex> lk(g_cache_mu);
    auto it = g_cache.find(m);
    if (it != g_cache.end()) {
      last = it->second;
      return last;
    }
  }
  auto built = build_data(m);
  std::lock_guard<std::mutex> lk(g_cache_mu);
  auto [it, inserted] = g_cache.emplace(m, built);
  last = it->second;
  return last;
}

std::shared_ptr<const CycloData> build_data(long m) {
  if (m < 1) throw ArithmeticError("conductor must be positive");
  auto d = std::make_shared<CycloData>();
  d->m = m;
  d->phi = euler_phi(m);
  std::vector<long> xm(static_cast<size_t>(m + 1), 0);
  xm[0] = -1;
  xm[static_cast<size_t>(m)] = 1;
  for (long e : divisors(m)) {
    if (e == m) break;
    xm = poly_divexact(xm, data_for(e)->poly);
  }
  d->poly = xm;
  const auto phi = static_cast<size_t>(d->phi);
  d->red.assign(static_cast<size_t>(m), std::vector<long>(phi, 0));
  std::vector<long> cur(phi + 1, 0);
  cur[0] = 1;
  for (long k = 0; k < m; ++k) {
    if (cur[phi] != 0) {
      long c = cur[phi];
      for (size_t i = 0; i <= phi; ++i) cur[i] -= c * d->poly[i];
    }
    std::copy(cur.begin(), cur.begin() + static_cast<long>(phi), d->red[static_cast<size_t>(k)].begin());
    std::rotate(cur.rbegin(), cur.rbegin() + 1, cur.rend());
  }
  return d;
}

std::vector<Rational> fold(const CycloData& d, const std::vector<Rational>& raw) {
  std::vector<Rational> out(static_cast<size_t>(d.phi));
  for (size_t k = 0; k < raw.size(); ++k) {
    if (sgn(raw[k]) == 0) continue;
    const auto& r = d.red[k];
    for (size_t i = 0; i < r.size(); ++i)
      if (r[i] != 0) out[i] += raw[k] * r[i];
  }
  return out;
}

std::vector<Rational> solve_rational(std::vector<std::vector<Rational>> a, std::vector<Rational> b, bool* ok) {
  // a is rows x cols; least-effort Gauss-Jordan, returns one solution.
  size_t rows = a.size(), cols = rows ? a[0].size() : 0;
  std::vector<long> pivcol;
  size_t r = 0;
  for (size_t c = 0; c < cols && r < rows; ++c) {
    size_t piv = r;
    while (piv < rows && sgn(a[piv][c]) == 0) ++piv;
    if (piv == rows) continue;
    std::swap(a[piv], a[r]);
    std::swap(b[piv], b[r]);
    Rational inv = 1 / a[r][c];
    for (size_t j = c; j < cols; ++j) a[r][j] *= inv;
    b[r] *= inv;
    for (size_t i = 0; i < rows; ++i) {
      if (i == r || sgn(a[i][c]) == 0) continue;
      Rational f = a[i][c];
      for (size_t j = c; j < cols; ++j) a[i][j] -= f * a[r][j];
      b[i] -= f * b[r];
    }
    pivcol.push_back(static_cast<long>(c));
    ++r;
  }
  *ok = true;
  for (size_t i = r; i < rows; ++i)
    if (sgn(b[i]) != 0) *ok = false;
  std::vector<Rational> x(cols);
  for (size_t i = 0; i < r; ++i) x[static_cast<size_t>(pivcol[i])] = b[i];
  return x;
}

}  // namespace

const std::vector<long>& cyclotomic_polynomial(long m) { return data_for(m)->poly; }

CycloNum::CycloNum() : m_(1), c_(1) {}

CycloNum::CycloNum(long m) : m_(m), c_(static_cast<size_t>(euler_phi(m))) {}

CycloNum::CycloNum(const Rational& r, long m) : CycloNum(m) {
  c_[0] = r;
  c_[0].canonicalize();
}

CycloNum::CycloNum(long r, long m) : CycloNum(m) { c_[0] = r; }

CycloNum CycloNum::zeta(long m, long k) {
  auto d = data_for(m);
  CycloNum z(m);
  const auto& r = d->red[static_cast<size_t>(mod_l(k, m))];
  for (size_t i = 0; i < r.size(); ++i) z.c_[i] = r[i];
  return z;
}

CycloNum CycloNum::from_exponents(long m, const std::vector<Rational>& by_exponent) {
  auto d = data_for(m);
  std::vector<Rational> raw(static_cast<size_t>(m));
  for (size_t k = 0; k < by_exponent.size(); ++k) {
    Rational v = by_exponent[k];
    v.canonicalize();
    raw[static_cast<size_t>(mod_l(static_cast<long>(k), m))] += v;
  }
  CycloNum z(m);
  z.c_ = fold(*d, raw);
  return z;
}

bool CycloNum::is_zero() const {
  return std::all_of(c_.begin(), c_.end(), [](const Rational& x) { return sgn(x) == 0; });
}

bool CycloNum::is_rational() const {
  return std::all_of(c_.begin() + 1, c_.end(), [](const Rational& x) { return sgn(x) == 0; });
}

Rational CycloNum::to_rational() const {
  if (!is_rational()) throw ArithmeticError("cyclotomic value is not rational");
  return c_[0];
}

bool CycloNum::is_algebraic_integer() const {
  return std::all_of(c_.begin(), c_.end(), [](const Rational& x) { return x.get_den() == 1; });
}

bool CycloNum::is_p_integral(long p) const {
  return std::all_of(c_.begin(), c_.end(), [p](const Rational& x) { return holgr::is_p_integral(x, p); });
}

std::optional<long> CycloNum::min_coeff_valuation(long p) const {
  std::optional<long> best;
  for (const auto& x : c_) {
    auto v = padic_valuation(x, p);
    if (v && (!best || *v < *best)) best = v;
  }
  return best;
}

CycloNum CycloNum::embed(long m2) const {
  if (m2 == m_) return *this;
  if (m2 % m_ != 0) throw ArithmeticError("embedding needs m | m2");
  auto d = data_for(m2);
  long step = m2 / m_;
  std::vector<Rational> raw(static_cast<size_t>(m2));
  for (size_t i = 0; i < c_.size(); ++i) raw[static_cast<size_t>(static_cast<long>(i) * step)] = c_[i];
  CycloNum z(m2);
  z.c_ = fold(*d, raw);
  return z;
}

CycloNum CycloNum::descend(long dd) const {
  if (dd == m_) return *this;
  if (m_ % dd != 0) throw ArithmeticError("descend needs d | m");
  long phid = euler_phi(dd);
  std::vector<std::vector<Rational>> a(c_.size(), std::vector<Rational>(static_cast<size_t>(phid)));
  for (long j = 0; j < phid; ++j) {
    CycloNum col = zeta(dd, j).embed(m_);
    for (size_t i = 0; i < c_.size(); ++i) a[i][static_cast<size_t>(j)] = col.c_[i];
  }
  bool ok = false;
  auto x = solve_rational(a, c_, &ok);
  if (!ok) throw ArithmeticError("value does not lie in the requested subfield");
  CycloNum z(dd);
  z.c_ = x;
  return z;
}

namespace {

// Generators of the units k mod m with k = 1 mod d.
const std::vector<long>& fixer_generators(long m, long d) {
  thread_local std::map<std::pair<long, long>, std::vector<long>> cache;
  auto key = std::make_pair(m, d);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  std::vector<long> gens;
  std::vector<char> in(static_cast<size_t>(m), 0);
  std::vector<long> span{1 % m};
  in[static_cast<size_t>(1 % m)] = 1;
  for (long k = 1; k < m; ++k) {
    if (gcd_l(k, m) != 1 || k % d != 1 % d || in[static_cast<size_t>(k)]) continue;
    gens.push_back(k);
    for (size_t h = 0; h < span.size(); ++h)
      for (long g : gens) {
        long y = (span[h] * g) % m;
        if (!in[static_cast<size_t>(y)]) {
          in[static_cast<size_t>(y)] = 1;
          span.push_back(y);
        }
      }
  }
  return cache.emplace(key, std::move(gens)).first->second;
}

}  // namespace

long CycloNum::minimal_conductor() const {
  if (is_rational()) return 1;
  for (long d : divisors(m_)) {
    if (d % 4 == 2) continue;
    bool fixed = true;
    for (long k : fixer_generators(m_, d))
      if (galois(k) != *this) {
        fixed = false;
        break;
      }
    if (fixed) return d;
  }
  return m_;
}

CycloNum CycloNum::galois(long k) const {
  k = mod_l(k, m_);
  if (gcd_l(k, m_) != 1) throw ArithmeticError("galois_act needs k coprime to m");
  if (m_ <= 2) return *this;
  auto d = data_for(m_);
  std::vector<Rational> raw(static_cast<size_t>(m_));
  for (size_t i = 0; i < c_.size(); ++i)
    if (sgn(c_[i]) != 0) raw[static_cast<size_t>(mod_l(static_cast<long>(i) * k, m_))] = c_[i];
  CycloNum z(m_);
  z.c_ = fold(*d, raw);
  return z;
}

CycloNum CycloNum::inv() const {
  if (is_zero()) throw ArithmeticError("inversion of zero");
  if (is_rational()) return CycloNum(Rational(1 / c_[0]), m_);
  size_t phi = c_.size();
  std::vector<std::vector<Rational>> a(phi, std::vector<Rational>(phi));
  for (size_t j = 0; j < phi; ++j) {
    CycloNum col = *this * zeta(m_, static_cast<long>(j));
    for (size_t i = 0; i < phi; ++i) a[i][j] = col.c_[i];
  }
  std::vector<Rational> b(phi);
  b[0] = 1;
  bool ok = false;
  auto x = solve_rational(a, b, &ok);
  if (!ok) throw ArithmeticError("singular multiplication matrix");
  CycloNum z(m_);
  z.c_ = x;
  return z;
}

CycloNum& CycloNum::operator+=(const CycloNum& o) {
  if (o.m_ != m_) {
    long l = lcm_l(m_, o.m_);
    if (l != m_) *this = embed(l);
    CycloNum oe = o.embed(l);
    for (size_t i = 0; i < c_.size(); ++i) c_[i] += oe.c_[i];
    return *this;
  }
  for (size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
  return *this;
}

CycloNum& CycloNum::operator-=(const CycloNum& o) { return *this += -o; }

CycloNum CycloNum::operator-() const {
  CycloNum z = *this;
  for (auto& x : z.c_) x = -x;
  return z;
}

CycloNum& CycloNum::operator*=(const Rational& r) {
  Rational rr = r;
  rr.canonicalize();
  for (auto& x : c_) x *= rr;
  return *this;
}

CycloNum& CycloNum::operator*=(const CycloNum& o) {
  if (o.m_ != m_) {
    long l = lcm_l(m_, o.m_);
    CycloNum a = embed(l);
    return *this = (a *= o.embed(l));
  }
  if (o.is_rational()) return *this *= o.c_[0];
  if (is_rational()) {
    Rational r = c_[0];
    *this = o;
    return *this *= r;
  }
  auto d = data_for(m_);
  std::vector<Rational> raw(static_cast<size_t>(m_));
  for (size_t i = 0; i < c_.size(); ++i) {
    if (sgn(c_[i]) == 0) continue;
    for (size_t j = 0; j < o.c_.size(); ++j) {
      if (sgn(o.c_[j]) == 0) continue;
      raw[(i + j) % static_cast<size_t>(m_)] += c_[i] * o.c_[j];
    }
  }
  c_ = fold(*d, raw);
  return *this;
}

bool operator==(const CycloNum& a, const CycloNum& b) {
  if (a.m_ == b.m_) return a.c_ == b.c_;
  long l = lcm_l(a.m_, b.m_);
  return a.embed(l).c_ == b.embed(l).c_;
}

std::string CycloNum::to_string() const {
  long md = minimal_conductor();
  CycloNum z = descend(md);
  if (md == 1) return z.c_[0].get_str();
  std::ostringstream os;
  bool first = true;
  for (size_t i = 0; i < z.c_.size(); ++i) {
    if (sgn(z.c_[i]) == 0) continue;
    if (!first) os << " + ";
    first = false;
    os << z.c_[i].get_str();
    if (i >= 1) os << "*z";
    if (i >= 2) os << "^" << i;
  }
  os << " @" << md;
  return os.str();
}

int CycloNum::compare(const CycloNum& a, const CycloNum& b) {
  long ma = a.minimal_conductor(), mb = b.minimal_conductor();
  if (ma != mb) return ma < mb ? -1 : 1;
  CycloNum x = a.descend(ma), y = b.descend(mb);
  for (size_t i = 0; i < x.c_.size(); ++i) {
    int c = cmp(x.c_[i], y.c_[i]);
    if (c != 0) return c < 0 ? -1 : 1;
  }
  return 0;
}

std::ostream& operator<<(std::ostream& os, const CycloNum& x) { return os << x.to_string(); }

}  // namespace holgr

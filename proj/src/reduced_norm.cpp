#include "holgr/reduced_norm.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <cstdlib>
#include <random>
#include <set>
#include <thread>

#include "holgr/padic.hpp"

namespace holgr {

namespace {

template <class F>
void parallel_for(std::size_t count, F&& body) {
  const std::size_t workers = std::min<std::size_t>(worker_threads(), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr failure;
  std::mutex failure_mutex;
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), static_cast<std::uint32_t>(index),
                    static_cast<std::uint32_t>(index >> 32)};
  std::uint32_t out[2];
  seq.generate(out, out + 2);
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

// Sum of coefficients per class.
std::vector<Rational> class_sums(const FiniteGroup& G, const GroupRingElem& a) {
  const auto& cd = G.classes();
  std::vector<Rational> s(cd.count(), Rational(0));
  for (std::size_t g = 0; g < a.size(); ++g)
    if (a[g] != 0) s[static_cast<std::size_t>(cd.class_of[g])] += a[g];
  return s;
}

CycloNum apply_character(const ClassFunction& chi, const std::vector<Rational>& sums) {
  CycloNum v(Rational(0));
  for (std::size_t c = 0; c < sums.size(); ++c)
    if (sums[c] != 0) v += chi[c] * sums[c];
  return v;
}

GroupRingElem trace(const GroupRingMatrix& A) {
  GroupRingElem t = A.at(0, 0);
  for (long i = 1; i < A.n; ++i) t = gr_add(t, A.at(i, i));
  return t;
}

// H^0 .. H^k.
std::vector<GroupRingMatrix> powers(const FiniteGroup& G, const GroupRingMatrix& H, long k) {
  std::vector<GroupRingMatrix> out;
  out.push_back(mat_identity(G, H.n));
  for (long i = 1; i <= k; ++i) out.push_back(mat_mul(G, out.back(), H));
  return out;
}

long max_degree(const CharTable& t) {
  long d = 1;
  for (const auto& c : t.chars) d = std::max(d, c.degree);
  return d;
}

ReducedCharPoly newton(const CharTable& t, const std::vector<std::vector<Rational>>& trace_sums, long n, int chi) {
  const auto& c = t.chars[static_cast<std::size_t>(chi)];
  const long N = c.degree * n;
  std::vector<CycloNum> tr(static_cast<std::size_t>(N) + 1);
  for (long k = 1; k <= N; ++k) tr[static_cast<std::size_t>(k)] = apply_character(c.values, trace_sums[static_cast<std::size_t>(k)]);
  std::vector<CycloNum> e(static_cast<std::size_t>(N) + 1);
  e[0] = CycloNum(Rational(1));
  for (long k = 1; k <= N; ++k) {
    CycloNum s(Rational(0));
    for (long i = 1; i <= k; ++i) {
      CycloNum term = e[static_cast<std::size_t>(k - i)] * tr[static_cast<std::size_t>(i)];
      if (i % 2) s += term;
      else s -= term;
    }
    e[static_cast<std::size_t>(k)] = s * Rational(1, k);
  }
  ReducedCharPoly r;
  r.character = chi;
  r.coeffs.resize(static_cast<std::size_t>(N) + 1);
  for (long k = 0; k <= N; ++k) {
    CycloNum v = e[static_cast<std::size_t>(k)];
    if (k % 2) v = -v;
    r.coeffs[static_cast<std::size_t>(N - k)] = v;
  }
  return r;
}

struct PolyData {
  std::vector<ReducedCharPoly> polys;
  std::vector<GroupRingMatrix> pows;  // H^0 .. H^(maxN - 1)
};

PolyData poly_data(const CharTable& t, const GroupRingMatrix& H, bool keep_powers) {
  const auto& G = *t.group;
  const long maxN = max_degree(t) * H.n;
  std::vector<std::vector<Rational>> sums(static_cast<std::size_t>(maxN) + 1);
  PolyData d;
  GroupRingMatrix P = mat_identity(G, H.n);
  if (keep_powers) d.pows.push_back(P);
  for (long k = 1; k <= maxN; ++k) {
    P = mat_mul(G, P, H);
    sums[static_cast<std::size_t>(k)] = class_sums(G, trace(P));
    if (keep_powers && k < maxN) d.pows.push_back(P);
  }
  d.polys.resize(t.count());
  parallel_for(t.count(), [&](std::size_t chi) { d.polys[chi] = newton(t, sums, H.n, static_cast<int>(chi)); });
  return d;
}

GroupRingMatrix adjoint_from(const CharTable& t, const GroupRingMatrix& H, const std::vector<ReducedCharPoly>& polys,
                             const std::vector<GroupRingMatrix>& pows) {
  const auto& G = *t.group;
  long maxN = 0;
  for (const auto& p : polys) maxN = std::max(maxN, p.degree());
  GroupRingMatrix out{H.n, std::vector<GroupRingElem>(static_cast<std::size_t>(H.n * H.n), gr_zero(G))};
  for (long j = 1; j <= maxN; ++j) {
    CentralElement z;
    bool nonzero = false;
    for (const auto& p : polys) {
      const long N = p.degree();
      CycloNum v(Rational(0));
      if (j <= N) {
        v = p.coeffs[static_cast<std::size_t>(j)];
        if (N % 2 == 0) v = -v;
      }
      nonzero = nonzero || !v.is_zero();
      z.values.push_back(v);
    }
    if (!nonzero) continue;
    GroupRingElem zg = central_to_group_ring(t, z);
    out = mat_add(out, mat_left_scale(G, zg, pows[static_cast<std::size_t>(j - 1)]));
  }
  return out;
}

Rational parse_rational(const nlohmann::json& j) {
  if (j.is_number_integer()) return Rational(j.get<long>());
  if (j.is_string()) {
    Rational r(j.get<std::string>());
    r.canonicalize();
    return r;
  }
  throw std::invalid_argument("expected an integer or a rational string");
}

CycloNum parse_value(const nlohmann::json& j) {
  if (j.is_object()) {
    long m = j.at("m").get<long>();
    std::vector<Rational> c;
    for (const auto& x : j.at("coeffs")) c.push_back(parse_rational(x));
    return CycloNum::from_exponents(m, c);
  }
  return CycloNum(parse_rational(j));
}

std::string rational_text(const Rational& r) { return r.get_str(); }

// Exact rational determinant by Gaussian elimination.
Rational rational_det(std::vector<std::vector<Rational>> A) {
  const std::size_t n = A.size();
  Rational det(1);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (piv < n && A[piv][c] == 0) ++piv;
    if (piv == n) return Rational(0);
    if (piv != c) {
      std::swap(A[piv], A[c]);
      det = -det;
    }
    det *= A[c][c];
    for (std::size_t r = c + 1; r < n; ++r) {
      if (A[r][c] == 0) continue;
      Rational f = A[r][c] / A[c][c];
      for (std::size_t k = c; k < n; ++k) A[r][k] -= f * A[c][k];
    }
  }
  return det;
}

// Solves A X = B for square invertible A; rows of B are right-hand sides stacked as columns.
std::vector<std::vector<Rational>> rational_solve(std::vector<std::vector<Rational>> A, std::vector<std::vector<Rational>> B) {
  const std::size_t n = A.size(), m = B.empty() ? 0 : B[0].size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (piv < n && A[piv][c] == 0) ++piv;
    if (piv == n) throw InternalError("singular Gram matrix");
    std::swap(A[piv], A[c]);
    std::swap(B[piv], B[c]);
    Rational inv = 1 / A[c][c];
    for (auto& x : A[c]) x *= inv;
    for (auto& x : B[c]) x *= inv;
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || A[r][c] == 0) continue;
      Rational f = A[r][c];
      for (std::size_t k = 0; k < n; ++k) A[r][k] -= f * A[c][k];
      for (std::size_t k = 0; k < m; ++k) B[r][k] -= f * B[c][k];
    }
  }
  return B;
}

long vp_rational(const Rational& x, long p) {
  auto v = padic_valuation(x, p);
  if (!v) throw InternalError("valuation of zero");
  return *v;
}

Rational p_power(long p, long e) {
  Integer r;
  mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(e < 0 ? -e : e));
  return e >= 0 ? Rational(r) : Rational(Integer(1), r);
}

// Echelon basis over Z_(p); pivot entries are powers of p.
struct PadicLattice {
  long p;
  std::vector<std::vector<Rational>> rows;
  std::vector<std::size_t> pivots;

  void build(std::vector<std::vector<Rational>> vecs, std::size_t dim) {
    rows.clear();
    pivots.clear();
    std::size_t r = 0;
    for (std::size_t c = 0; c < dim && r < vecs.size(); ++c) {
      std::size_t best = vecs.size();
      long bestv = 0;
      for (std::size_t i = r; i < vecs.size(); ++i) {
        if (vecs[i][c] == 0) continue;
        long v = vp_rational(vecs[i][c], p);
        if (best == vecs.size() || v < bestv) {
          best = i;
          bestv = v;
        }
      }
      if (best == vecs.size()) continue;
      std::swap(vecs[r], vecs[best]);
      Rational unit = vecs[r][c] / p_power(p, bestv);
      for (auto& x : vecs[r]) x /= unit;
      for (std::size_t i = r + 1; i < vecs.size(); ++i) {
        if (vecs[i][c] == 0) continue;
        Rational f = vecs[i][c] / vecs[r][c];
        for (std::size_t k = 0; k < dim; ++k) vecs[i][k] -= f * vecs[r][k];
      }
      pivots.push_back(c);
      ++r;
    }
    rows.assign(vecs.begin(), vecs.begin() + static_cast<long>(r));
  }

  bool contains(std::vector<Rational> w) const {
    for (std::size_t j = 0; j < rows.size(); ++j) {
      const std::size_t c = pivots[j];
      if (w[c] == 0) continue;
      Rational q = w[c] / rows[j][c];
      if (!is_p_integral(q, p)) return false;
      for (std::size_t k = 0; k < w.size(); ++k) w[k] -= q * rows[j][k];
    }
    return std::all_of(w.begin(), w.end(), [](const Rational& x) { return x == 0; });
  }

  long det_valuation() const {
    long v = 0;
    for (std::size_t j = 0; j < rows.size(); ++j) v += vp_rational(rows[j][pivots[j]], p);
    return v;
  }
};

// omega_chi of a central element in class-sum coordinates.
CycloNum omega(const CharTable& t, int chi, const std::vector<Rational>& y) {
  const auto& G = *t.group;
  const auto& cd = G.classes();
  const auto& c = t.chars[static_cast<std::size_t>(chi)];
  CycloNum v(Rational(0));
  for (std::size_t k = 0; k < y.size(); ++k)
    if (y[k] != 0) v += c.values[k] * (y[k] * cd.sizes[k]);
  return v * Rational(1, c.degree);
}

std::vector<Rational> class_coordinates(const CharTable& t, const GroupRingElem& a) {
  const auto& cd = t.group->classes();
  std::vector<Rational> y;
  for (std::size_t k = 0; k < cd.count(); ++k) y.push_back(a[static_cast<std::size_t>(cd.representatives[k])]);
  return y;
}

}  // namespace

unsigned worker_threads() {
  if (const char* env = std::getenv("HOL_THREADS")) {
    long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<unsigned>(v);
  }
  return std::max(1U, std::thread::hardware_concurrency());
}

GroupRingElem gr_zero(const FiniteGroup& G) { return GroupRingElem(static_cast<std::size_t>(G.order()), Rational(0)); }

GroupRingElem gr_scalar(const FiniteGroup& G, const Rational& r) {
  auto a = gr_zero(G);
  a[0] = r;
  return a;
}

GroupRingElem gr_basis(const FiniteGroup& G, int g) {
  auto a = gr_zero(G);
  a[static_cast<std::size_t>(g)] = 1;
  return a;
}

GroupRingElem gr_add(const GroupRingElem& a, const GroupRingElem& b) {
  GroupRingElem c = a;
  for (std::size_t i = 0; i < b.size(); ++i)
    if (b[i] != 0) c[i] += b[i];
  return c;
}

GroupRingElem gr_sub(const GroupRingElem& a, const GroupRingElem& b) {
  GroupRingElem c = a;
  for (std::size_t i = 0; i < b.size(); ++i)
    if (b[i] != 0) c[i] -= b[i];
  return c;
}

GroupRingElem gr_mul(const FiniteGroup& G, const GroupRingElem& a, const GroupRingElem& b) {
  GroupRingElem c = gr_zero(G);
  std::vector<int> nb;
  for (std::size_t h = 0; h < b.size(); ++h)
    if (b[h] != 0) nb.push_back(static_cast<int>(h));
  for (std::size_t g = 0; g < a.size(); ++g) {
    if (a[g] == 0) continue;
    for (int h : nb) c[static_cast<std::size_t>(G.mul(static_cast<int>(g), h))] += a[g] * b[static_cast<std::size_t>(h)];
  }
  return c;
}

bool gr_is_p_integral(const GroupRingElem& a, long p) {
  return std::all_of(a.begin(), a.end(), [p](const Rational& x) { return is_p_integral(x, p); });
}

bool gr_is_integral(const GroupRingElem& a) {
  return std::all_of(a.begin(), a.end(), [](const Rational& x) { return x.get_den() == 1; });
}

CycloNum gr_character_value(const FiniteGroup& G, const ClassFunction& chi, const GroupRingElem& a) {
  return apply_character(chi, class_sums(G, a));
}

GroupRingMatrix mat_identity(const FiniteGroup& G, long n) { return mat_scalar(G, n, gr_scalar(G, 1)); }

GroupRingMatrix mat_scalar(const FiniteGroup& G, long n, const GroupRingElem& a) {
  GroupRingMatrix m{n, std::vector<GroupRingElem>(static_cast<std::size_t>(n * n), gr_zero(G))};
  for (long i = 0; i < n; ++i) m.at(i, i) = a;
  return m;
}

GroupRingMatrix mat_mul(const FiniteGroup& G, const GroupRingMatrix& A, const GroupRingMatrix& B) {
  if (A.n != B.n) throw std::invalid_argument("matrix sizes differ");
  GroupRingMatrix C{A.n, std::vector<GroupRingElem>(static_cast<std::size_t>(A.n * A.n), gr_zero(G))};
  for (long i = 0; i < A.n; ++i)
    for (long j = 0; j < A.n; ++j) {
      GroupRingElem s = gr_zero(G);
      for (long k = 0; k < A.n; ++k) s = gr_add(s, gr_mul(G, A.at(i, k), B.at(k, j)));
      C.at(i, j) = std::move(s);
    }
  return C;
}

GroupRingMatrix mat_add(const GroupRingMatrix& A, const GroupRingMatrix& B) {
  GroupRingMatrix C = A;
  for (std::size_t i = 0; i < C.entries.size(); ++i) C.entries[i] = gr_add(C.entries[i], B.entries[i]);
  return C;
}

GroupRingMatrix mat_left_scale(const FiniteGroup& G, const GroupRingElem& a, const GroupRingMatrix& A) {
  GroupRingMatrix C = A;
  for (auto& e : C.entries) e = gr_mul(G, a, e);
  return C;
}

bool mat_equal(const GroupRingMatrix& A, const GroupRingMatrix& B) { return A.n == B.n && A.entries == B.entries; }

nlohmann::json gr_to_json(const GroupRingElem& a) {
  nlohmann::json j = nlohmann::json::object();
  for (std::size_t g = 0; g < a.size(); ++g)
    if (a[g] != 0) j[std::to_string(g)] = rational_text(a[g]);
  return j;
}

GroupRingElem gr_from_json(const FiniteGroup& G, const nlohmann::json& j) {
  if (!j.is_object()) throw std::invalid_argument("group-ring element must be an object of element-id: rational");
  auto a = gr_zero(G);
  for (const auto& [k, v] : j.items()) {
    long id = std::stol(k);
    if (id < 0 || id >= G.order()) throw std::invalid_argument("element id out of range: " + k);
    a[static_cast<std::size_t>(id)] += parse_rational(v);
  }
  return a;
}

nlohmann::json mat_to_json(const GroupRingMatrix& A) {
  nlohmann::json rows = nlohmann::json::array();
  for (long i = 0; i < A.n; ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (long j = 0; j < A.n; ++j) row.push_back(gr_to_json(A.at(i, j)));
    rows.push_back(row);
  }
  return rows;
}

GroupRingMatrix mat_from_json(const FiniteGroup& G, const nlohmann::json& j) {
  if (j.is_object()) return mat_scalar(G, 1, gr_from_json(G, j));
  if (!j.is_array() || j.empty()) throw std::invalid_argument("matrix must be a non-empty JSON array");
  std::vector<GroupRingElem> flat;
  if (j[0].is_array()) {
    for (const auto& row : j) {
      if (row.size() != j.size()) throw std::invalid_argument("matrix must be square");
      for (const auto& e : row) flat.push_back(gr_from_json(G, e));
    }
  } else {
    for (const auto& e : j) flat.push_back(gr_from_json(G, e));
  }
  long n = 0;
  while (n * n < static_cast<long>(flat.size())) ++n;
  if (n * n != static_cast<long>(flat.size())) throw std::invalid_argument("flat matrix length is not a square");
  return GroupRingMatrix{n, std::move(flat)};
}

GroupRingMatrix random_matrix(const FiniteGroup& G, long n, std::uint64_t seed, long height) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<long> dist(-height, height);
  GroupRingMatrix m{n, std::vector<GroupRingElem>(static_cast<std::size_t>(n * n), gr_zero(G))};
  for (auto& e : m.entries)
    for (auto& c : e) c = dist(rng);
  return m;
}

CentralElement central_one(const CharTable& t) { return CentralElement{std::vector<CycloNum>(t.count(), CycloNum(Rational(1)))}; }

CentralElement central_add(const CentralElement& a, const CentralElement& b) {
  CentralElement c = a;
  for (std::size_t i = 0; i < c.values.size(); ++i) c.values[i] += b.values[i];
  return c;
}

CentralElement central_mul(const CentralElement& a, const CentralElement& b) {
  CentralElement c = a;
  for (std::size_t i = 0; i < c.values.size(); ++i) c.values[i] *= b.values[i];
  return c;
}

CentralElement central_scale(const CentralElement& a, const Rational& r) {
  CentralElement c = a;
  for (auto& v : c.values) v *= r;
  return c;
}

CentralElement idempotent_of(const CharTable& t, const std::vector<int>& chars) {
  CentralElement e{std::vector<CycloNum>(t.count(), CycloNum(Rational(0)))};
  for (int c : chars) e.values[static_cast<std::size_t>(c)] = CycloNum(Rational(1));
  return e;
}

CentralElement idempotent_of_normal(const CharTable& t, const SubgroupHandle& N) {
  std::vector<int> chars;
  for (std::size_t i = 0; i < t.count(); ++i)
    if (std::all_of(N.members.begin(), N.members.end(), [&](int x) { return t.chars[i].kernel.contains(x); }))
      chars.push_back(static_cast<int>(i));
  return idempotent_of(t, chars);
}

bool is_galois_equivariant(const CharTable& t, const CentralElement& x) {
  const long e = t.group->exponent();
  for (long k = 1; k < std::max(2L, e); ++k) {
    if (gcd_l(k, e) != 1) continue;
    for (std::size_t i = 0; i < t.count(); ++i) {
      int j = find_row(t, galois_conjugate(t.chars[i].values, k));
      if (j < 0) throw InternalError("Galois conjugate of a character is missing from the table");
      if (x.values[static_cast<std::size_t>(j)] != x.values[i].galois(k)) return false;
    }
  }
  return true;
}

CentralElement central_from_group_ring(const CharTable& t, const GroupRingElem& a) {
  const auto& G = *t.group;
  const auto& cd = G.classes();
  for (std::size_t c = 0; c < cd.count(); ++c)
    for (int g : cd.classes[c])
      if (a[static_cast<std::size_t>(g)] != a[static_cast<std::size_t>(cd.representatives[c])])
        throw CharTableError("group-ring element is not central");
  CentralElement x;
  auto sums = class_sums(G, a);
  for (const auto& c : t.chars) x.values.push_back(apply_character(c.values, sums) * Rational(1, c.degree));
  return x;
}

GroupRingElem central_to_group_ring(const CharTable& t, const CentralElement& x) {
  const auto& G = *t.group;
  const auto& cd = G.classes();
  std::vector<Rational> per_class(cd.count());
  for (std::size_t k = 0; k < cd.count(); ++k) {
    const auto inv = static_cast<std::size_t>(cd.inverse_map[k]);
    CycloNum s(Rational(0));
    for (std::size_t i = 0; i < t.count(); ++i)
      if (!x.values[i].is_zero()) s += x.values[i] * t.chars[i].values[inv] * Rational(t.chars[i].degree);
    if (!s.is_rational()) throw InternalError("central element is not fixed by the Galois action");
    per_class[k] = s.to_rational() / G.order();
  }
  GroupRingElem a = gr_zero(G);
  for (std::size_t g = 0; g < a.size(); ++g) a[g] = per_class[static_cast<std::size_t>(cd.class_of[g])];
  return a;
}

bool central_values_p_integral(const CentralElement& x, long p) {
  return std::all_of(x.values.begin(), x.values.end(), [p](const CycloNum& v) { return v.is_p_integral(p); });
}

std::string central_to_string(const CentralElement& x) {
  std::string s;
  for (std::size_t i = 0; i < x.values.size(); ++i) {
    const auto& v = x.values[i];
    if (v.is_zero()) continue;
    const std::string label = "e" + std::to_string(i + 1);
    std::string term;
    bool negative = false;
    if (v.is_rational()) {
      Rational r = v.to_rational();
      negative = r < 0;
      if (negative) r = -r;
      term = r == 1 ? label : r.get_str() + "*" + label;
    } else {
      term = "(" + v.to_string() + ")*" + label;
    }
    if (s.empty()) s = negative ? "-" + term : term;
    else s += (negative ? " - " : " + ") + term;
  }
  return s.empty() ? "0" : s;
}

nlohmann::json central_to_json(const CentralElement& x) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& v : x.values) j.push_back(v.to_string());
  return j;
}

CentralElement central_from_json(const CharTable& t, const nlohmann::json& j) {
  if (j.is_array()) {
    if (j.size() != t.count()) throw std::invalid_argument("central element needs one value per character");
    CentralElement x;
    for (const auto& v : j) x.values.push_back(parse_value(v).embed(t.group->exponent()));
    for (auto& v : x.values) v = v.descend(v.minimal_conductor()).embed(t.group->exponent());
    return x;
  }
  if (j.is_object() && j.contains("group_ring")) return central_from_group_ring(t, gr_from_json(*t.group, j.at("group_ring")));
  if (j.is_object() && j.contains("idempotents")) {
    CentralElement x{std::vector<CycloNum>(t.count(), CycloNum(Rational(0)))};
    for (const auto& [k, v] : j.at("idempotents").items()) {
      long i = std::stol(k);
      if (i < 1 || i > static_cast<long>(t.count())) throw std::invalid_argument("character label out of range: " + k);
      x.values[static_cast<std::size_t>(i - 1)] = parse_value(v).embed(t.group->exponent());
    }
    return x;
  }
  throw std::invalid_argument("central element must be a value list, {\"group_ring\": ...} or {\"idempotents\": ...}");
}

ReducedCharPoly reduced_char_poly(const CharTable& t, const GroupRingMatrix& H, int chi) {
  const auto& G = *t.group;
  const long N = t.chars[static_cast<std::size_t>(chi)].degree * H.n;
  std::vector<std::vector<Rational>> sums(static_cast<std::size_t>(N) + 1);
  GroupRingMatrix P = mat_identity(G, H.n);
  for (long k = 1; k <= N; ++k) {
    P = mat_mul(G, P, H);
    sums[static_cast<std::size_t>(k)] = class_sums(G, trace(P));
  }
  return newton(t, sums, H.n, chi);
}

std::vector<ReducedCharPoly> reduced_char_polys(const CharTable& t, const GroupRingMatrix& H) { return poly_data(t, H, false).polys; }

CentralElement reduced_norm_from(const std::vector<ReducedCharPoly>& polys, long n, const CharTable& t) {
  CentralElement x;
  for (const auto& p : polys) {
    CycloNum v = p.coeffs[0];
    if ((t.chars[static_cast<std::size_t>(p.character)].degree * n) % 2) v = -v;
    x.values.push_back(v);
  }
  return x;
}

CentralElement reduced_norm(const CharTable& t, const GroupRingMatrix& H) { return reduced_norm_from(reduced_char_polys(t, H), H.n, t); }

GroupRingMatrix generalized_adjoint(const CharTable& t, const GroupRingMatrix& H) {
  auto d = poly_data(t, H, true);
  return adjoint_from(t, H, d.polys, d.pows);
}

GroupRingMatrix generalized_adjoint(const CharTable& t, const GroupRingMatrix& H, const std::vector<ReducedCharPoly>& polys) {
  long maxN = 0;
  for (const auto& p : polys) maxN = std::max(maxN, p.degree());
  auto pows = powers(*t.group, H, std::max(0L, maxN - 1));
  return adjoint_from(t, H, polys, pows);
}

bool entries_integral_over_z(const CharTable& t, const GroupRingMatrix& A) {
  for (const auto& e : A.entries) {
    auto polys = reduced_char_polys(t, mat_scalar(*t.group, 1, e));
    for (const auto& p : polys)
      for (const auto& c : p.coeffs)
        if (!c.is_algebraic_integer()) return false;
  }
  return true;
}

std::string membership_name(Membership m) {
  switch (m) {
    case Membership::CertifiedIn:
      return "certified_in";
    case Membership::SampledNoCounterexample:
      return "sampled_no_counterexample";
    case Membership::Counterexample:
      return "counterexample";
  }
  return "unknown";
}

nlohmann::json MembershipResult::to_json() const {
  nlohmann::json j;
  j["verdict"] = membership_name(verdict);
  j["certifying"] = verdict != Membership::SampledNoCounterexample;
  j["certificate"] = certificate.empty() ? nlohmann::json(nullptr) : nlohmann::json(certificate);
  j["samples"] = samples;
  j["counterexample"] = counterexample ? mat_to_json(*counterexample) : nlohmann::json(nullptr);
  return j;
}

bool in_central_conductor(const CharTable& t, const std::vector<PadicBlock>& blocks, const ConductorData& c, const CentralElement& x) {
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const auto& b = blocks[i];
    for (int chi : b.orbit) {
      auto v = field_valuation(b.field, x.values[static_cast<std::size_t>(chi)]);
      if (v && *v < c.entries[i].exponent) return false;
    }
  }
  (void)t;
  return true;
}

std::vector<GroupRingMatrix> structured_witnesses(const FiniteGroup& G) {
  const auto& cd = G.classes();
  std::vector<GroupRingMatrix> out;
  auto one = gr_scalar(G, 1);
  out.push_back(mat_scalar(G, 1, gr_scalar(G, -1)));
  std::vector<GroupRingElem> cyc;
  for (std::size_t c = 1; c < cd.count(); ++c) {
    int g = cd.representatives[c];
    out.push_back(mat_scalar(G, 1, gr_basis(G, g)));
    out.push_back(mat_scalar(G, 1, gr_add(one, gr_basis(G, g))));
    GroupRingElem s = gr_zero(G);
    for (long k = 0; k < G.element_order(g); ++k) s[static_cast<std::size_t>(G.pow(g, k))] += 1;
    cyc.push_back(s);
    out.push_back(mat_scalar(G, 1, s));
    GroupRingElem cls = gr_zero(G);
    for (int x : cd.classes[c]) cls[static_cast<std::size_t>(x)] = 1;
    out.push_back(mat_scalar(G, 1, cls));
  }
  const bool all_pairs = cd.count() <= 12;
  for (std::size_t a = 1; a < cd.count(); ++a) {
    int g = cd.representatives[a];
    if (!all_pairs && G.element_order(g) != 2) continue;
    for (std::size_t b = 0; b < cyc.size(); ++b)
      if (b + 1 != a) out.push_back(mat_scalar(G, 1, gr_mul(G, gr_basis(G, g), cyc[b])));
  }
  return out;
}

MembershipResult denominator_membership(const CharTable& t, const CentralElement& x, long p, long budget, std::uint64_t seed) {
  if (!is_prime(p)) throw std::invalid_argument("p must be prime");
  if (x.values.size() != t.count()) throw std::invalid_argument("central element has the wrong number of values");
  if (!central_values_p_integral(x, p)) throw std::invalid_argument("x is not p-integral in the centre");
  const auto& G = *t.group;
  MembershipResult r;
  GroupRingElem xg = central_to_group_ring(t, x);
  if (commutator_subgroup(G).order() % p != 0 && gr_is_p_integral(xg, p)) {
    r.verdict = Membership::CertifiedIn;
    r.certificate = "p does not divide |G'| and x lies in zeta(Z_p[G])";
    return r;
  }
  auto blocks = padic_blocks(t, p);
  auto cond = central_conductor(t, blocks);
  if (in_central_conductor(t, blocks, cond, x)) {
    r.verdict = Membership::CertifiedIn;
    r.certificate = "x lies in the central conductor F_p(G)";
    return r;
  }
  auto witnesses = structured_witnesses(G);
  const std::size_t total = witnesses.size() + static_cast<std::size_t>(std::max(0L, budget));
  std::vector<char> failed(total, 0);
  std::atomic<std::size_t> first_fail{total};
  parallel_for(total, [&](std::size_t i) {
    if (i > first_fail.load()) return;
    GroupRingMatrix H = i < witnesses.size()
                            ? witnesses[i]
                            : random_matrix(G, 1 + static_cast<long>((i - witnesses.size()) % 3), derive_seed(seed, i - witnesses.size()));
    auto adj = generalized_adjoint(t, H);
    for (const auto& e : adj.entries)
      if (!gr_is_p_integral(gr_mul(G, xg, e), p)) {
        failed[i] = 1;
        std::size_t cur = first_fail.load();
        while (i < cur && !first_fail.compare_exchange_weak(cur, i)) {
        }
        return;
      }
  });
  r.samples = static_cast<long>(total);
  for (std::size_t i = 0; i < total; ++i)
    if (failed[i]) {
      r.verdict = Membership::Counterexample;
      r.counterexample = i < witnesses.size() ? witnesses[i]
                                              : random_matrix(G, 1 + static_cast<long>((i - witnesses.size()) % 3),
                                                              derive_seed(seed, i - witnesses.size()));
      r.samples = static_cast<long>(i) + 1;
      return r;
    }
  r.verdict = Membership::SampledNoCounterexample;
  return r;
}

nlohmann::json NormIdealProbe::to_json() const {
  nlohmann::json j;
  j["p"] = p;
  j["samples"] = samples;
  j["rank"] = rank;
  j["class_count"] = class_count;
  nlohmann::json b = nlohmann::json::array();
  for (const auto& row : basis) {
    nlohmann::json r = nlohmann::json::array();
    for (const auto& x : row) r.push_back(x.get_str());
    b.push_back(r);
  }
  j["basis"] = b;
  j["coordinates"] = "class sums";
  j["inside_maximal_center"] = inside_maximal_center;
  j["index_in_maximal_center"] = index_in_maximal_center ? nlohmann::json(*index_in_maximal_center) : nlohmann::json(nullptr);
  j["maximal_over_group_ring"] = maximal_over_group_ring;
  j["equals_maximal_center"] = equals_maximal_center;
  j["equals_group_ring_center"] = equals_group_ring_center;
  j["contains_twice_maximal_center"] = contains_twice_maximal_center;
  nlohmann::json named = nlohmann::json::object();
  for (const auto& [k, v] : named_members) named[k] = v;
  j["members"] = named;
  j["expected"] = expected.empty() ? nlohmann::json(nullptr) : nlohmann::json(expected);
  j["expected_holds"] = expected_holds ? nlohmann::json(*expected_holds) : nlohmann::json(nullptr);
  j["complete"] = false;
  return j;
}

NormIdealProbe norm_ideal_probe(const CharTable& t, long p, long budget, std::uint64_t seed) {
  if (!is_prime(p)) throw std::invalid_argument("p must be prime");
  const auto& G = *t.group;
  const auto& cd = G.classes();
  const std::size_t k = cd.count();
  auto blocks = padic_blocks(t, p);
  if (budget < static_cast<long>(blocks.size())) throw std::invalid_argument("budget must be at least the number of blocks");
  NormIdealProbe r;
  r.p = p;
  r.class_count = static_cast<long>(k);

  auto witnesses = structured_witnesses(G);
  const std::size_t total = witnesses.size() + static_cast<std::size_t>(budget);
  std::vector<CentralElement> norms(total);
  parallel_for(total, [&](std::size_t i) {
    GroupRingMatrix H = i < witnesses.size()
                            ? witnesses[i]
                            : random_matrix(G, 1 + static_cast<long>((i - witnesses.size()) % 3), derive_seed(seed, i - witnesses.size()));
    norms[i] = reduced_norm(t, H);
  });
  r.samples = static_cast<long>(total);
  const long s = vp(G.order(), p);
  const Rational scale = p_power(p, s);
  std::vector<std::vector<Rational>> vecs;
  for (const auto& x : norms) {
    if (!central_values_p_integral(x, p)) r.inside_maximal_center = false;
    auto y = class_coordinates(t, central_to_group_ring(t, x));
    for (auto& c : y) {
      c *= scale;
      if (!is_p_integral(c, p)) throw InternalError("reduced norm outside |G|^-1 Z_p[G]");
    }
    vecs.push_back(y);
  }
  PadicLattice L{p, {}, {}};
  L.build(vecs, k);
  r.rank = static_cast<long>(L.rows.size());
  for (const auto& row : L.rows) {
    std::vector<Rational> u = row;
    for (auto& c : u) c /= scale;
    r.basis.push_back(u);
  }

  // Trace form T(y, z) = sum_chi omega_chi(y) omega_chi(z) in class coordinates.
  std::vector<std::vector<CycloNum>> Om(t.count(), std::vector<CycloNum>(k));
  for (std::size_t chi = 0; chi < t.count(); ++chi)
    for (std::size_t c = 0; c < k; ++c) {
      std::vector<Rational> unit(k, Rational(0));
      unit[c] = 1;
      Om[chi][c] = omega(t, static_cast<int>(chi), unit);
    }
  std::vector<std::vector<Rational>> T(k, std::vector<Rational>(k));
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = a; b < k; ++b) {
      CycloNum v(Rational(0));
      for (std::size_t chi = 0; chi < t.count(); ++chi) v += Om[chi][a] * Om[chi][b];
      if (!v.is_rational()) throw InternalError("trace form is not rational");
      T[a][b] = T[b][a] = v.to_rational();
    }
  long sum_fd = 0;
  for (const auto& b : blocks) sum_fd += b.field.f * b.field.d;
  const long vT = vp_rational(rational_det(T), p);
  if ((vT - sum_fd) % 2 != 0 || vT < sum_fd) throw InternalError("inconsistent discriminants for the centre");
  r.maximal_over_group_ring = (vT - sum_fd) / 2;

  if (r.rank == static_cast<long>(k)) {
    const long vB = L.det_valuation() - static_cast<long>(k) * s;
    r.index_in_maximal_center = r.maximal_over_group_ring + vB;
    r.equals_maximal_center = r.inside_maximal_center && *r.index_in_maximal_center == 0;
    bool integral_rows = std::all_of(r.basis.begin(), r.basis.end(), [&](const std::vector<Rational>& row) {
      return std::all_of(row.begin(), row.end(), [&](const Rational& c) { return is_p_integral(c, p); });
    });
    r.equals_group_ring_center = integral_rows && vB == 0;

    // 2 zeta(M) in L iff 2 L^# lies in the inverse different, block by block.
    std::vector<std::vector<Rational>> gram(k, std::vector<Rational>(k, Rational(0)));
    std::vector<std::vector<Rational>> BT(k, std::vector<Rational>(k, Rational(0)));
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t c = 0; c < k; ++c)
        for (std::size_t d = 0; d < k; ++d) BT[i][c] += r.basis[i][d] * T[d][c];
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j)
        for (std::size_t c = 0; c < k; ++c) gram[i][j] += BT[i][c] * r.basis[j][c];
    auto dual = rational_solve(gram, r.basis);
    bool ok = true;
    for (const auto& y : dual) {
      for (const auto& b : blocks) {
        std::vector<Rational> twice = y;
        for (auto& c : twice) c *= 2;
        auto v = field_valuation(b.field, omega(t, b.orbit[0], twice));
        if (v && *v < -b.field.d) ok = false;
      }
    }
    r.contains_twice_maximal_center = ok && r.inside_maximal_center;
  }

  auto member = [&](const std::string& name, const CentralElement& x) {
    auto y = class_coordinates(t, central_to_group_ring(t, x));
    for (auto& c : y) c *= scale;
    r.named_members.emplace_back(name, L.contains(y));
  };
  auto commutator = commutator_subgroup(G);
  member("2e_{G'}", central_scale(idempotent_of_normal(t, commutator), 2));
  // Rational idempotents: unions of full Galois orbits.
  std::set<int> done;
  const long e = G.exponent();
  for (std::size_t i = 0; i < t.count(); ++i) {
    if (done.count(static_cast<int>(i))) continue;
    std::set<int> orbit;
    for (long kk = 1; kk < std::max(2L, e); ++kk)
      if (gcd_l(kk, e) == 1) orbit.insert(find_row(t, galois_conjugate(t.chars[i].values, kk)));
    done.insert(orbit.begin(), orbit.end());
    std::string name = "2e[";
    bool first = true;
    for (int c : orbit) {
      name += (first ? "" : ",") + std::to_string(c + 1);
      first = false;
    }
    member(name + "]", central_scale(idempotent_of(t, std::vector<int>(orbit.begin(), orbit.end())), 2));
  }

  // Certified closed forms.
  const auto& spec = G.spec();
  const bool full = r.rank == static_cast<long>(k);
  if (G.order() % p != 0) {
    r.expected = "I_p(G) = zeta(Z_p[G]) = zeta(M_p(G))";
    r.expected_holds = full && r.equals_group_ring_center && r.equals_maximal_center;
  } else if (commutator.order() % p != 0) {
    r.expected = "I_p(G) = zeta(Z_p[G])";
    r.expected_holds = full && r.equals_group_ring_center;
  } else if (spec.family == "affine" || (spec.family == "dihedral" && spec.n % 2 == 1 && is_prime(spec.n)) ||
             (spec.family == "symmetric" && (spec.n == 3 || (spec.n == 4 && p != 2)))) {
    const bool two_ell = spec.family == "affine" && p == 2;
    if (two_ell) {
      r.expected = "2 zeta(M_2(G)) in I_2(G) in zeta(M_2(G))";
      r.expected_holds = full && r.inside_maximal_center && r.contains_twice_maximal_center;
    } else {
      r.expected = "I_p(G) = zeta(M_p(G))";
      r.expected_holds = full && r.equals_maximal_center;
    }
  } else if (spec.family == "symmetric" && spec.n == 4 && p == 2) {
    r.expected = "2 zeta(M_2(S4)) in I_2(S4), properly inside zeta(M_2(S4))";
    r.expected_holds = full && r.inside_maximal_center && r.contains_twice_maximal_center && !r.equals_maximal_center;
  }
  return r;
}

}  // namespace holgr

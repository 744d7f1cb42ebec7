#include "holgr/chartable.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

namespace holgr {

namespace {

using Row = std::vector<long>;
using Mat = std::vector<Row>;

long mulm(long a, long b, long q) { return (a * b) % q; }

long invm(long a, long q) { return pow_mod(mod_l(a, q), q - 2, q); }

long primitive_root(long q) {
  auto fs = prime_divisors(q - 1);
  for (long g = 2; g < q; ++g) {
    bool ok = true;
    for (long f : fs)
      if (pow_mod(g, (q - 1) / f, q) == 1) {
        ok = false;
        break;
      }
    if (ok) return g;
  }
  return 1;
}

// Reduced row echelon form in place; returns pivot columns.
std::vector<int> rref(Mat& a, long q) {
  std::vector<int> piv;
  if (a.empty()) return piv;
  const int rows = static_cast<int>(a.size()), cols = static_cast<int>(a[0].size());
  int r = 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    int sel = -1;
    for (int i = r; i < rows; ++i)
      if (a[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)] != 0) {
        sel = i;
        break;
      }
    if (sel < 0) continue;
    std::swap(a[static_cast<std::size_t>(r)], a[static_cast<std::size_t>(sel)]);
    auto& pr = a[static_cast<std::size_t>(r)];
    long iv = invm(pr[static_cast<std::size_t>(c)], q);
    for (auto& x : pr) x = mulm(x, iv, q);
    for (int i = 0; i < rows; ++i) {
      if (i == r) continue;
      auto& row = a[static_cast<std::size_t>(i)];
      long f = row[static_cast<std::size_t>(c)];
      if (f == 0) continue;
      for (int j = 0; j < cols; ++j) row[static_cast<std::size_t>(j)] = mod_l(row[static_cast<std::size_t>(j)] - f * pr[static_cast<std::size_t>(j)], q);
    }
    piv.push_back(c);
    ++r;
  }
  a.resize(static_cast<std::size_t>(r));
  return piv;
}

// Basis of {x : a x = 0} for a square matrix a.
Mat nullspace(Mat a, long q) {
  const int n = static_cast<int>(a.size());
  auto piv = rref(a, q);
  std::vector<char> is_piv(static_cast<std::size_t>(n), 0);
  for (int c : piv) is_piv[static_cast<std::size_t>(c)] = 1;
  Mat out;
  for (int f = 0; f < n; ++f) {
    if (is_piv[static_cast<std::size_t>(f)]) continue;
    Row v(static_cast<std::size_t>(n), 0);
    v[static_cast<std::size_t>(f)] = 1;
    for (std::size_t i = 0; i < piv.size(); ++i) v[static_cast<std::size_t>(piv[i])] = mod_l(-a[i][static_cast<std::size_t>(f)], q);
    out.push_back(v);
  }
  return out;
}

// Characteristic polynomial (constant term first) via Hessenberg reduction.
Row char_poly(Mat h, long q) {
  const int n = static_cast<int>(h.size());
  auto at = [&](int i, int j) -> long& { return h[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]; };
  for (int m = 1; m < n - 1; ++m) {
    int i = m;
    while (i < n && at(i, m - 1) == 0) ++i;
    if (i == n) continue;
    if (i != m) {
      std::swap(h[static_cast<std::size_t>(i)], h[static_cast<std::size_t>(m)]);
      for (int r = 0; r < n; ++r) std::swap(at(r, i), at(r, m));
    }
    long t = invm(at(m, m - 1), q);
    for (int r = m + 1; r < n; ++r) {
      long u = mulm(at(r, m - 1), t, q);
      if (u == 0) continue;
      for (int c = 0; c < n; ++c) at(r, c) = mod_l(at(r, c) - u * at(m, c), q);
      for (int c = 0; c < n; ++c) at(c, m) = (at(c, m) + u * at(c, r)) % q;
    }
  }
  std::vector<Row> p(static_cast<std::size_t>(n + 1));
  p[0] = {1};
  for (int m = 1; m <= n; ++m) {
    Row next(static_cast<std::size_t>(m + 1), 0);
    const Row& prev = p[static_cast<std::size_t>(m - 1)];
    for (std::size_t k = 0; k < prev.size(); ++k) {
      next[k + 1] = (next[k + 1] + prev[k]) % q;
      next[k] = mod_l(next[k] - at(m - 1, m - 1) * prev[k], q);
    }
    long t = 1;
    for (int i = 1; i < m; ++i) {
      t = mulm(t, at(m - i, m - i - 1), q);
      long coef = mulm(t, at(m - i - 1, m - 1), q);
      const Row& pp = p[static_cast<std::size_t>(m - i - 1)];
      for (std::size_t k = 0; k < pp.size(); ++k) next[k] = mod_l(next[k] - coef * pp[k], q);
    }
    p[static_cast<std::size_t>(m)] = next;
  }
  return p[static_cast<std::size_t>(n)];
}

std::vector<long> roots_mod(const Row& poly, long q) {
  std::vector<long> out;
  for (long x = 0; x < q; ++x) {
    long v = 0;
    for (auto it = poly.rbegin(); it != poly.rend(); ++it) v = (v * x + *it) % q;
    if (v == 0) out.push_back(x);
  }
  return out;
}

struct Splitter {
  const FiniteGroup& G;
  const ConjClassData& cd;
  long q;
  std::size_t k;

  // Matrix of the class-sum weighted by `weight[class]`: M[k][l] = sum_x weight(x) [x^-1 z_l in C_k].
  Mat weighted(const std::vector<long>& weight) const {
    Mat m(k, Row(k, 0));
    for (std::size_t l = 0; l < k; ++l) {
      int z = cd.representatives[l];
      for (int x = 0; x < G.order(); ++x) {
        long w = weight[static_cast<std::size_t>(cd.class_of[static_cast<std::size_t>(x)])];
        if (w == 0) continue;
        int kk = cd.class_of[static_cast<std::size_t>(G.mul(G.inv(x), z))];
        auto& cell = m[static_cast<std::size_t>(kk)][l];
        cell = (cell + w) % q;
      }
    }
    return m;
  }

  // Splits a subspace (RREF basis rows) into eigenspaces of m.
  std::vector<Mat> split(const Mat& basis, const Mat& m) const {
    Mat b = basis;
    auto piv = rref(b, q);
    const std::size_t d = b.size();
    Mat a(d, Row(d, 0));
    for (std::size_t t = 0; t < d; ++t) {
      Row img(k, 0);
      for (std::size_t r = 0; r < k; ++r) {
        long s = 0;
        for (std::size_t c = 0; c < k; ++c) s = (s + m[r][c] * b[t][c]) % q;
        img[r] = s;
      }
      for (std::size_t i = 0; i < d; ++i) a[i][t] = img[static_cast<std::size_t>(piv[i])];
    }
    auto roots = roots_mod(char_poly(a, q), q);
    if (roots.size() <= 1) return {b};
    std::vector<Mat> parts;
    std::size_t total = 0;
    for (long lam : roots) {
      Mat sh = a;
      for (std::size_t i = 0; i < d; ++i) sh[i][i] = mod_l(sh[i][i] - lam, q);
      Mat ns = nullspace(sh, q);
      Mat sub;
      for (const auto& c : ns) {
        Row v(k, 0);
        for (std::size_t t = 0; t < d; ++t)
          if (c[t] != 0)
            for (std::size_t j = 0; j < k; ++j) v[j] = (v[j] + c[t] * b[t][j]) % q;
        sub.push_back(v);
      }
      rref(sub, q);
      total += sub.size();
      parts.push_back(sub);
    }
    if (total != d) throw CharTableError("class matrix is not diagonalizable on an invariant subspace");
    return parts;
  }
};

}  // namespace

Character make_character(const FiniteGroup& G, ClassFunction values) {
  Character c;
  c.values = std::move(values);
  if (!c.values[0].is_rational()) throw CharTableError("character degree is not rational");
  Rational d = c.values[0].to_rational();
  if (d.get_den() != 1 || d <= 0) throw CharTableError("character degree is not a positive integer");
  c.degree = d.get_num().get_si();
  c.field_conductor = 1;
  for (const auto& v : c.values) c.field_conductor = lcm_l(c.field_conductor, v.minimal_conductor());
  c.kernel = character_kernel(G, c.values);
  return c;
}

SubgroupHandle character_kernel(const FiniteGroup& G, const ClassFunction& chi) {
  const auto& cd = G.classes();
  std::vector<int> members;
  for (std::size_t c = 0; c < cd.count(); ++c)
    if (chi[c] == chi[0]) members.insert(members.end(), cd.classes[c].begin(), cd.classes[c].end());
  return make_subgroup(G, members);
}

CharTable dixon_schneider_table(GroupPtr Gp) {
  const FiniteGroup& G = *Gp;
  const auto& cd = G.classes();
  const std::size_t k = cd.count();
  const long e = cd.exponent, n = G.order();
  long q = e + 1;
  while (!(is_prime(q) && static_cast<double>(q) > 2.0 * std::sqrt(static_cast<double>(n)))) q += e;
  if (q > 3037000499L) throw CharTableError("no suitable prime for the character table computation");
  Splitter sp{G, cd, q, k};

  Mat full(k, Row(k, 0));
  for (std::size_t i = 0; i < k; ++i) full[i][i] = 1;
  std::vector<Mat> spaces{full};
  auto refine = [&](const Mat& m) {
    std::vector<Mat> next;
    for (const auto& s : spaces) {
      if (s.size() == 1) {
        next.push_back(s);
        continue;
      }
      for (auto& part : sp.split(s, m)) next.push_back(std::move(part));
    }
    spaces = std::move(next);
  };
  auto done = [&] { return std::all_of(spaces.begin(), spaces.end(), [](const Mat& s) { return s.size() == 1; }); };

  std::mt19937 rng(20240601u);
  std::vector<long> w(k);
  for (auto& x : w) x = static_cast<long>(rng() % static_cast<unsigned long>(q));
  refine(sp.weighted(w));
  for (std::size_t j = 1; j < k && !done(); ++j) {
    std::vector<long> unit(k, 0);
    unit[j] = 1;
    refine(sp.weighted(unit));
  }
  if (!done() || spaces.size() != k) throw CharTableError("class matrices failed to separate the characters");

  const long z_e = pow_mod(primitive_root(q), (q - 1) / e, q);
  CharTable t;
  t.group = Gp;
  t.method = "dixon-schneider";
  for (const auto& s : spaces) {
    Row v = s[0];
    if (v[0] == 0) throw CharTableError("central character vanishes on the identity class");
    long iv0 = invm(v[0], q);
    for (auto& x : v) x = mulm(x, iv0, q);
    long sum = 0;
    for (std::size_t l = 0; l < k; ++l)
      sum = (sum + mulm(mulm(v[l], v[static_cast<std::size_t>(cd.inverse_map[l])], q), invm(cd.sizes[l] % q, q), q)) % q;
    long deg2 = mulm(n % q, invm(sum, q), q);
    long deg = 0;
    for (long d = 1; d * d <= n; ++d)
      if ((d * d) % q == deg2) deg = d;
    if (deg == 0) throw CharTableError("degree does not lift");
    Row chi(k);
    for (std::size_t l = 0; l < k; ++l) chi[l] = mulm(mulm(v[l], deg, q), invm(cd.sizes[l] % q, q), q);

    ClassFunction vals(k, CycloNum(e));
    for (std::size_t l = 0; l < k; ++l) {
      const long o = cd.element_orders[l];
      const long z_o = pow_mod(z_e, e / o, q);
      const long inv_o = invm(o % q, q);
      std::vector<Rational> by_exp(static_cast<std::size_t>(e));
      for (long i = 0; i < o; ++i) {
        long s = 0;
        for (long kk = 0; kk < o; ++kk) {
          long val = chi[static_cast<std::size_t>(cd.power_map(static_cast<int>(l), kk))];
          s = (s + mulm(val, pow_mod(z_o, mod_l(-i * kk, o), q), q)) % q;
        }
        long mult = mulm(s, inv_o, q);
        if (mult > deg) throw CharTableError("eigenvalue multiplicity does not lift");
        by_exp[static_cast<std::size_t>(i * (e / o))] += mult;
      }
      vals[l] = CycloNum::from_exponents(e, by_exp);
    }
    t.chars.push_back(make_character(G, std::move(vals)));
  }
  sort_characters(t);
  return t;
}

CharTable abelian_table(GroupPtr Gp) {
  const FiniteGroup& G = *Gp;
  const auto& cd = G.classes();
  if (static_cast<long>(cd.count()) != G.order()) throw CharTableError("group is not abelian");
  const long e = G.exponent();
  const auto& gens = G.generators();
  // Spanning tree: each element reached from its parent by one generator.
  std::vector<int> parent(static_cast<std::size_t>(G.order()), -1), via(static_cast<std::size_t>(G.order()), -1), order{0};
  parent[0] = 0;
  for (std::size_t h = 0; h < order.size(); ++h)
    for (std::size_t s = 0; s < gens.size(); ++s) {
      int y = G.mul(order[h], gens[s]);
      if (parent[static_cast<std::size_t>(y)] < 0) {
        parent[static_cast<std::size_t>(y)] = order[h];
        via[static_cast<std::size_t>(y)] = static_cast<int>(s);
        order.push_back(y);
      }
    }
  CharTable t;
  t.group = Gp;
  t.method = "abelian";
  std::vector<long> assign(gens.size(), 0), expo(static_cast<std::size_t>(G.order()));
  while (true) {
    // Exponents of zeta_e on every element, then a consistency check on all edges.
    expo[0] = 0;
    for (std::size_t h = 1; h < order.size(); ++h) {
      int y = order[h];
      expo[static_cast<std::size_t>(y)] = (expo[static_cast<std::size_t>(parent[static_cast<std::size_t>(y)])] + assign[static_cast<std::size_t>(via[static_cast<std::size_t>(y)])]) % e;
    }
    bool ok = true;
    for (int x = 0; x < G.order() && ok; ++x)
      for (std::size_t s = 0; s < gens.size() && ok; ++s)
        if (expo[static_cast<std::size_t>(G.mul(x, gens[s]))] != (expo[static_cast<std::size_t>(x)] + assign[s]) % e) ok = false;
    if (ok) {
      ClassFunction vals(cd.count(), CycloNum(e));
      for (int x = 0; x < G.order(); ++x)
        vals[static_cast<std::size_t>(cd.class_of[static_cast<std::size_t>(x)])] = CycloNum::zeta(e, expo[static_cast<std::size_t>(x)]);
      t.chars.push_back(make_character(G, std::move(vals)));
    }
    // Next assignment: generator s takes values that are multiples of e / ord(s).
    std::size_t s = 0;
    for (; s < gens.size(); ++s) {
      long step = e / G.element_order(gens[s]);
      assign[s] += step;
      if (assign[s] < e) break;
      assign[s] = 0;
    }
    if (s == gens.size()) break;
  }
  if (static_cast<long>(t.chars.size()) != G.order()) throw CharTableError("abelian character enumeration is incomplete");
  sort_characters(t);
  return t;
}

CharTable character_table(GroupPtr G) {
  const long k = static_cast<long>(G->classes().count());
  if (k == G->order() && k > 64) {
    long combos = 1;
    for (int g : G->generators()) combos *= G->element_order(g);
    if (combos <= 4 * G->order()) return abelian_table(G);
  }
  return dixon_schneider_table(G);
}

void sort_characters(CharTable& t) {
  auto key_less = [](const Character& a, const Character& b) {
    bool ta = std::all_of(a.values.begin(), a.values.end(), [](const CycloNum& v) { return v == CycloNum(Rational(1)); });
    bool tb = std::all_of(b.values.begin(), b.values.end(), [](const CycloNum& v) { return v == CycloNum(Rational(1)); });
    if (ta != tb) return ta;
    if (a.degree != b.degree) return a.degree < b.degree;
    for (std::size_t i = 0; i < a.values.size(); ++i) {
      int c = CycloNum::compare(a.values[i], b.values[i]);
      if (c != 0) return c > 0;
    }
    return false;
  };
  std::stable_sort(t.chars.begin(), t.chars.end(), key_less);
}

CycloNum inner_product(const FiniteGroup& G, const ClassFunction& a, const ClassFunction& b) {
  const auto& cd = G.classes();
  CycloNum s(cd.exponent);
  for (std::size_t c = 0; c < cd.count(); ++c) s += (a[c] * b[c].conj()) * Rational(cd.sizes[c]);
  return s * Rational(1, G.order());
}

OrthogonalityReport check_orthogonality(const CharTable& t) {
  OrthogonalityReport r;
  const auto& G = *t.group;
  const auto& cd = G.classes();
  const std::size_t k = cd.count();
  if (t.count() != k) {
    r.rows_ok = r.columns_ok = false;
    r.failures.push_back("number of characters differs from number of classes");
    return r;
  }
  long sq = 0;
  for (const auto& c : t.chars) sq += c.degree * c.degree;
  if (sq != G.order()) {
    r.degrees_ok = false;
    r.failures.push_back("sum of squared degrees is " + std::to_string(sq));
  }
  std::vector<ClassFunction> conj(k);
  for (std::size_t i = 0; i < k; ++i)
    for (const auto& v : t.chars[i].values) conj[i].push_back(v.conj());
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i; j < k; ++j) {
      CycloNum s(cd.exponent);
      for (std::size_t c = 0; c < k; ++c) s += (t.chars[i].values[c] * conj[j][c]) * Rational(cd.sizes[c]);
      if (s != CycloNum(Rational(i == j ? G.order() : 0))) {
        r.rows_ok = false;
        r.failures.push_back("row relation fails for characters " + std::to_string(i) + ", " + std::to_string(j));
      }
    }
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = a; b < k; ++b) {
      CycloNum s(cd.exponent);
      for (std::size_t i = 0; i < k; ++i) s += t.chars[i].values[a] * conj[i][b];
      if (s != CycloNum(Rational(a == b ? cd.centralizer_order(static_cast<int>(a)) : 0))) {
        r.columns_ok = false;
        r.failures.push_back("column relation fails for classes " + std::to_string(a) + ", " + std::to_string(b));
      }
    }
  return r;
}

bool same_up_to_row_permutation(const CharTable& a, const CharTable& b) {
  if (a.count() != b.count()) return false;
  auto rows = [](const CharTable& t) {
    std::vector<std::vector<std::string>> out;
    for (const auto& c : t.chars) {
      std::vector<std::string> r;
      for (const auto& v : c.values) r.push_back(v.to_string());
      out.push_back(r);
    }
    std::sort(out.begin(), out.end());
    return out;
  };
  return rows(a) == rows(b);
}

ClassFunction induce_character(const FiniteGroup& G, const SubgroupGroup& H, const ClassFunction& psi) {
  const auto& cd = G.classes();
  const auto& hd = H.group->classes();
  if (psi.size() != hd.count()) throw CharTableError("class function does not match the subgroup");
  long e = cd.exponent;
  for (const auto& v : psi) e = lcm_l(e, v.conductor());
  ClassFunction sums(cd.count(), CycloNum(e));
  for (int h = 0; h < H.group->order(); ++h) {
    int g = H.embed[static_cast<std::size_t>(h)];
    if (g < 0 || g >= G.order()) throw GroupError("subgroup is not contained in the group");
    sums[static_cast<std::size_t>(cd.class_of[static_cast<std::size_t>(g)])] += psi[static_cast<std::size_t>(hd.class_of[static_cast<std::size_t>(h)])];
  }
  for (std::size_t c = 0; c < cd.count(); ++c) sums[c] *= Rational(cd.centralizer_order(static_cast<int>(c)), H.group->order());
  return sums;
}

ClassFunction inflate_character(const FiniteGroup& G, const Quotient& Q, const ClassFunction& psi) {
  const auto& cd = G.classes();
  const auto& qd = Q.group->classes();
  ClassFunction out;
  for (std::size_t c = 0; c < cd.count(); ++c) {
    int img = Q.proj[static_cast<std::size_t>(cd.representatives[c])];
    out.push_back(psi[static_cast<std::size_t>(qd.class_of[static_cast<std::size_t>(img)])].embed(lcm_l(cd.exponent, psi[0].conductor())));
  }
  return out;
}

nlohmann::json CharTable::to_json() const {
  const auto& cd = group->classes();
  nlohmann::json j;
  j["group"] = group->spec().name();
  j["order"] = group->order();
  j["method"] = method;
  j["classes"] = nlohmann::json::array();
  for (std::size_t c = 0; c < cd.count(); ++c)
    j["classes"].push_back({{"representative", cd.representatives[c]}, {"size", cd.sizes[c]}, {"element_order", cd.element_orders[c]}});
  j["characters"] = nlohmann::json::array();
  for (const auto& ch : chars) {
    nlohmann::json row;
    row["degree"] = ch.degree;
    row["field_conductor"] = ch.field_conductor;
    row["kernel_order"] = ch.kernel.order();
    row["values"] = nlohmann::json::array();
    for (const auto& v : ch.values) row["values"].push_back(v.to_string());
    j["characters"].push_back(row);
  }
  return j;
}

}  // namespace holgr

#include <algorithm>
#include <functional>
#include <map>

#include "holgr/chartable.hpp"

namespace holgr {

namespace {

CharTable finish(GroupPtr G, std::vector<ClassFunction> rows, const std::string& method) {
  CharTable t;
  t.group = G;
  t.method = method;
  const long e = G->exponent();
  for (auto& r : rows) {
    for (auto& v : r) v = v.descend(v.minimal_conductor()).embed(e);
    t.chars.push_back(make_character(*G, std::move(r)));
  }
  sort_characters(t);
  return t;
}

CharTable cyclic_table(GroupPtr G) {
  const long n = G->order();
  const auto& cd = G->classes();
  std::vector<long> expo(static_cast<std::size_t>(n), 0);
  int g = G->generators()[0], x = 0;
  for (long k = 0; k < n; ++k) {
    expo[static_cast<std::size_t>(x)] = k;
    x = G->mul(x, g);
  }
  std::vector<ClassFunction> rows;
  for (long j = 0; j < n; ++j) {
    ClassFunction r(cd.count());
    for (int y = 0; y < n; ++y) r[static_cast<std::size_t>(cd.class_of[static_cast<std::size_t>(y)])] = CycloNum::zeta(n, j * expo[static_cast<std::size_t>(y)]);
    rows.push_back(r);
  }
  return finish(G, rows, "closed-form:cyclic");
}

CharTable dihedral_table(GroupPtr G) {
  const long n = G->spec().n;
  const auto& cd = G->classes();
  int r = G->generators()[0], s = G->generators()[1];
  // Every element is r^k or r^k s.
  std::vector<long> rot(static_cast<std::size_t>(G->order()), -1);
  std::vector<int> refl(static_cast<std::size_t>(G->order()), 0);
  int x = 0;
  for (long k = 0; k < n; ++k) {
    rot[static_cast<std::size_t>(x)] = k;
    int y = G->mul(x, s);
    rot[static_cast<std::size_t>(y)] = k;
    refl[static_cast<std::size_t>(y)] = 1;
    x = G->mul(x, r);
  }
  std::vector<ClassFunction> rows;
  auto row_from = [&](const std::function<CycloNum(long, int)>& f) {
    ClassFunction row(cd.count());
    for (std::size_t c = 0; c < cd.count(); ++c) {
      int rep = cd.representatives[c];
      row[c] = f(rot[static_cast<std::size_t>(rep)], refl[static_cast<std::size_t>(rep)]);
    }
    rows.push_back(row);
  };
  for (int a = 0; a < (n % 2 == 0 ? 2 : 1); ++a)
    for (int b = 0; b < 2; ++b)
      row_from([&](long k, int f) { return CycloNum(Rational(((a * k + b * f) % 2 == 0) ? 1 : -1)); });
  for (long j = 1; 2 * j < n; ++j)
    row_from([&](long k, int f) { return f ? CycloNum(n) : CycloNum::zeta(n, j * k) + CycloNum::zeta(n, -j * k); });
  return finish(G, rows, "closed-form:dihedral");
}

// Murnaghan-Nakayama on beta-sets.
long mn_value(std::vector<int> beta, const std::vector<int>& cycles, std::size_t idx, std::map<std::pair<std::vector<int>, std::size_t>, long>& memo) {
  if (idx == cycles.size()) return 1;
  auto key = std::make_pair(beta, idx);
  auto it = memo.find(key);
  if (it != memo.end()) return it->second;
  const int r = cycles[idx];
  long total = 0;
  for (std::size_t i = 0; i < beta.size(); ++i) {
    int b = beta[i], nb = b - r;
    if (nb < 0 || std::find(beta.begin(), beta.end(), nb) != beta.end()) continue;
    int between = 0;
    for (int y : beta)
      if (y > nb && y < b) ++between;
    auto next = beta;
    next[i] = nb;
    std::sort(next.begin(), next.end());
    long v = mn_value(next, cycles, idx + 1, memo);
    total += (between % 2 == 0) ? v : -v;
  }
  memo[key] = total;
  return total;
}

void partitions(int n, int maxpart, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (n == 0) {
    out.push_back(cur);
    return;
  }
  for (int p = std::min(n, maxpart); p >= 1; --p) {
    cur.push_back(p);
    partitions(n - p, p, cur, out);
    cur.pop_back();
  }
}

CharTable symmetric_table(GroupPtr G) {
  const int n = static_cast<int>(G->spec().n);
  const auto& cd = G->classes();
  std::vector<std::vector<int>> types;
  for (std::size_t c = 0; c < cd.count(); ++c) {
    const Perm& p = G->perm(cd.representatives[c]);
    std::vector<char> seen(p.size(), 0);
    std::vector<int> cyc;
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (seen[i]) continue;
      int len = 0;
      for (std::size_t j = i; !seen[j]; j = p[j]) {
        seen[j] = 1;
        ++len;
      }
      cyc.push_back(len);
    }
    std::sort(cyc.rbegin(), cyc.rend());
    types.push_back(cyc);
  }
  std::vector<std::vector<int>> parts;
  std::vector<int> cur;
  partitions(n, n, cur, parts);
  std::vector<ClassFunction> rows;
  for (const auto& lam : parts) {
    std::vector<int> beta;
    const int len = static_cast<int>(lam.size());
    for (int i = 0; i < len; ++i) beta.push_back(lam[static_cast<std::size_t>(i)] + (len - 1 - i));
    std::sort(beta.begin(), beta.end());
    ClassFunction row;
    for (const auto& t : types) {
      std::map<std::pair<std::vector<int>, std::size_t>, long> memo;
      row.push_back(CycloNum(Rational(mn_value(beta, t, 0, memo))));
    }
    rows.push_back(row);
  }
  return finish(G, rows, "closed-form:symmetric");
}

bool quaternion_like(const FiniteGroup& G) {
  if (G.order() != 8 || static_cast<long>(G.classes().count()) == 8) return false;
  int involutions = 0;
  for (int x = 1; x < G.order(); ++x)
    if (G.element_order(x) == 2) ++involutions;
  return involutions == 1;
}

CharTable quaternion_table(GroupPtr G) {
  const auto& cd = G->classes();
  auto Q = quotient_group(*G, commutator_subgroup(*G));
  auto lin = abelian_table(Q.group);
  std::vector<ClassFunction> rows;
  for (const auto& c : lin.chars) rows.push_back(inflate_character(*G, Q, c.values));
  ClassFunction two(cd.count(), CycloNum(Rational(0)));
  for (std::size_t c = 0; c < cd.count(); ++c) {
    if (cd.element_orders[c] == 1) two[c] = CycloNum(Rational(2));
    if (cd.element_orders[c] == 2) two[c] = CycloNum(Rational(-2));
  }
  rows.push_back(two);
  return finish(G, rows, "closed-form:quaternion");
}

std::optional<CharTable> frobenius_table(GroupPtr G) {
  auto fs = frobenius_structure(*G);
  if (!fs || !fs->kernel.is_abelian) return std::nullopt;
  const auto& cd = G->classes();
  auto Hg = subgroup_as_group(*G, fs->complement);
  std::optional<CharTable> Ht;
  if (fs->complement.is_abelian) Ht = abelian_table(Hg.group);
  else if (quaternion_like(*Hg.group)) Ht = quaternion_table(Hg.group);
  if (!Ht) return std::nullopt;
  // Complement component of every element: g = n h.
  std::vector<int> hpart(static_cast<std::size_t>(G->order()), -1);
  for (std::size_t hi = 0; hi < Hg.embed.size(); ++hi)
    for (int nn : fs->kernel.members) hpart[static_cast<std::size_t>(G->mul(nn, Hg.embed[hi]))] = static_cast<int>(hi);
  std::vector<ClassFunction> rows;
  const auto& hd = Hg.group->classes();
  for (const auto& c : Ht->chars) {
    ClassFunction row;
    for (std::size_t k = 0; k < cd.count(); ++k) {
      int h = hpart[static_cast<std::size_t>(cd.representatives[k])];
      row.push_back(c.values[static_cast<std::size_t>(hd.class_of[static_cast<std::size_t>(h)])]);
    }
    rows.push_back(row);
  }
  auto Ng = subgroup_as_group(*G, fs->kernel);
  auto Nt = abelian_table(Ng.group);
  std::vector<std::vector<std::string>> seen;
  for (const auto& psi : Nt.chars) {
    if (psi.degree == 1 && psi.kernel.order() == Ng.group->order()) continue;
    auto ind = induce_character(*G, Ng, psi.values);
    std::vector<std::string> key;
    for (const auto& v : ind) key.push_back(v.to_string());
    if (std::find(seen.begin(), seen.end(), key) != seen.end()) continue;
    seen.push_back(key);
    rows.push_back(ind);
  }
  return finish(G, rows, "closed-form:frobenius");
}

std::optional<CharTable> product_table(GroupPtr G) {
  const auto& spec = G->spec();
  std::vector<CharTable> tabs;
  for (const auto& f : spec.factors) {
    auto t = closed_form_table(build_group(f, G->order()));
    if (!t) return std::nullopt;
    tabs.push_back(*t);
  }
  const auto& cd = G->classes();
  // Factor component of each class representative by restricting to that factor's points.
  std::vector<std::vector<int>> comp(cd.count());
  for (std::size_t c = 0; c < cd.count(); ++c) {
    const Perm& p = G->perm(cd.representatives[c]);
    int offset = 0;
    for (const auto& t : tabs) {
      const int deg = t.group->degree();
      Perm sub(static_cast<std::size_t>(deg));
      for (int i = 0; i < deg; ++i) sub[static_cast<std::size_t>(i)] = static_cast<std::uint16_t>(p[static_cast<std::size_t>(offset + i)] - offset);
      int id = t.group->find(sub);
      if (id < 0) return std::nullopt;
      comp[c].push_back(t.group->classes().class_of[static_cast<std::size_t>(id)]);
      offset += deg;
    }
  }
  std::vector<ClassFunction> rows;
  std::vector<std::size_t> pick(tabs.size(), 0);
  while (true) {
    ClassFunction row;
    for (std::size_t c = 0; c < cd.count(); ++c) {
      CycloNum v(Rational(1));
      for (std::size_t f = 0; f < tabs.size(); ++f) v *= tabs[f].chars[pick[f]].values[static_cast<std::size_t>(comp[c][f])];
      row.push_back(v);
    }
    rows.push_back(row);
    std::size_t f = 0;
    for (; f < tabs.size(); ++f) {
      if (++pick[f] < tabs[f].count()) break;
      pick[f] = 0;
    }
    if (f == tabs.size()) break;
  }
  return finish(G, rows, "closed-form:product");
}

}  // namespace

std::optional<CharTable> closed_form_table(GroupPtr G) {
  const auto& fam = G->spec().family;
  if (fam == "cyclic") return cyclic_table(G);
  if (fam == "dihedral" && G->spec().n >= 3) return dihedral_table(G);
  if (fam == "symmetric") return symmetric_table(G);
  if (fam == "quaternion") return quaternion_table(G);
  if (fam == "product") return product_table(G);
  if (static_cast<long>(G->classes().count()) == G->order()) return abelian_table(G);
  return frobenius_table(G);
}

}  // namespace holgr

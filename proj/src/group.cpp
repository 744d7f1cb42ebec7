#include "holgr/group.hpp"

#include <algorithm>
#include <deque>
#include <numeric>

#include "holgr/cyclo.hpp"

namespace holgr {

namespace {

constexpr long kCayleyLimit = 512;

std::uint64_t hash_perm(const Perm& p) {
  std::uint64_t h = 1469598103934665603ULL;
  for (auto v : p) {
    h ^= v;
    h *= 1099511628211ULL;
  }
  return h;
}

Perm compose(const Perm& a, const Perm& b) {  // apply a, then b
  Perm r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = b[a[i]];
  return r;
}

Perm identity_perm(int n) {
  Perm p(static_cast<std::size_t>(n));
  std::iota(p.begin(), p.end(), 0);
  return p;
}

long perm_order(const Perm& p) {
  std::vector<char> seen(p.size(), 0);
  long ord = 1;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (seen[i]) continue;
    long len = 0;
    for (std::size_t j = i; !seen[j]; j = p[j]) {
      seen[j] = 1;
      ++len;
    }
    ord = lcm_l(ord, len);
  }
  return ord;
}

void validate_perm(const Perm& p, std::size_t n) {
  if (p.size() != n) throw GroupError("generators must all have the same degree");
  std::vector<char> seen(n, 0);
  for (auto v : p) {
    if (v >= n || seen[v]) throw GroupError("generator is not a permutation");
    seen[v] = 1;
  }
}

}  // namespace

FiniteGroup::FiniteGroup(std::vector<Perm> gens, long bound, std::string tag, GroupSpec spec)
    : tag_(std::move(tag)), spec_(std::move(spec)) {
  if (gens.empty()) throw GroupError("at least one generator is required");
  degree_ = static_cast<int>(gens[0].size());
  if (degree_ == 0 || degree_ > 65535) throw GroupError("generator degree out of range");
  for (const auto& g : gens) validate_perm(g, static_cast<std::size_t>(degree_));

  // Breadth-first closure under right multiplication by generators.
  std::vector<Perm> elems{identity_perm(degree_)};
  std::vector<std::pair<std::uint64_t, std::size_t>> seen{{hash_perm(elems[0]), 0}};
  auto present = [&](const Perm& p, std::uint64_t h) {
    auto it = std::lower_bound(seen.begin(), seen.end(), std::make_pair(h, std::size_t{0}));
    for (; it != seen.end() && it->first == h; ++it)
      if (elems[it->second] == p) return true;
    return false;
  };
  for (std::size_t head = 0; head < elems.size(); ++head) {
    for (const auto& g : gens) {
      Perm y = compose(elems[head], g);
      auto h = hash_perm(y);
      if (present(y, h)) continue;
      if (static_cast<long>(elems.size()) >= bound)
        throw GroupError("group order exceeds the configured bound of " + std::to_string(bound));
      elems.push_back(std::move(y));
      auto pos = std::lower_bound(seen.begin(), seen.end(), std::make_pair(h, std::size_t{0}));
      seen.insert(pos, {h, elems.size() - 1});
    }
  }
  std::sort(elems.begin(), elems.end());
  perms_ = std::move(elems);
  const auto n = perms_.size();
  index_.reserve(n);
  for (std::size_t i = 0; i < n; ++i) index_.emplace_back(hash_perm(perms_[i]), static_cast<int>(i));
  std::sort(index_.begin(), index_.end());

  for (const auto& g : gens) {
    int id = lookup(g);
    if (id != 0 && std::find(gens_.begin(), gens_.end(), id) == gens_.end()) gens_.push_back(id);
  }
  if (gens_.empty()) gens_.push_back(0);

  if (static_cast<long>(n) <= kCayleyLimit) {
    table_.resize(n * n);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) table_[a * n + b] = lookup(compose(perms_[a], perms_[b]));
  }
  inverse_.resize(n);
  orders_.resize(n);
  for (std::size_t a = 0; a < n; ++a) {
    Perm q(perms_[a].size());
    for (std::size_t i = 0; i < q.size(); ++i) q[perms_[a][i]] = static_cast<std::uint16_t>(i);
    inverse_[a] = lookup(q);
    orders_[a] = perm_order(perms_[a]);
  }
  build_classes();
}

int FiniteGroup::lookup(const Perm& p) const {
  auto h = hash_perm(p);
  auto it = std::lower_bound(index_.begin(), index_.end(), std::make_pair(h, 0));
  for (; it != index_.end() && it->first == h; ++it)
    if (perms_[static_cast<std::size_t>(it->second)] == p) return it->second;
  return -1;
}

int FiniteGroup::find(const Perm& p) const {
  if (static_cast<int>(p.size()) != degree_) return -1;
  return lookup(p);
}

int FiniteGroup::mul(int a, int b) const {
  if (!table_.empty()) return table_[static_cast<std::size_t>(a) * perms_.size() + static_cast<std::size_t>(b)];
  return lookup(compose(perms_[static_cast<std::size_t>(a)], perms_[static_cast<std::size_t>(b)]));
}

int FiniteGroup::pow(int a, long k) const {
  long ord = element_order(a);
  k = mod_l(k, ord);
  int r = 0, b = a;
  while (k > 0) {
    if (k & 1) r = mul(r, b);
    b = mul(b, b);
    k >>= 1;
  }
  return r;
}

void FiniteGroup::build_classes() {
  auto& cd = classes_;
  const auto n = perms_.size();
  cd.group_order = static_cast<long>(n);
  cd.class_of.assign(n, -1);
  for (std::size_t g = 0; g < n; ++g) {
    if (cd.class_of[g] >= 0) continue;
    int cid = static_cast<int>(cd.classes.size());
    std::vector<int> cls{static_cast<int>(g)};
    cd.class_of[g] = cid;
    for (std::size_t head = 0; head < cls.size(); ++head) {
      for (int s : gens_) {
        int y = conj(cls[head], s);
        if (cd.class_of[static_cast<std::size_t>(y)] < 0) {
          cd.class_of[static_cast<std::size_t>(y)] = cid;
          cls.push_back(y);
        }
      }
    }
    std::sort(cls.begin(), cls.end());
    cd.representatives.push_back(cls.front());
    cd.sizes.push_back(static_cast<long>(cls.size()));
    cd.element_orders.push_back(orders_[static_cast<std::size_t>(cls.front())]);
    cd.classes.push_back(std::move(cls));
  }
  cd.exponent = 1;
  for (long o : cd.element_orders) cd.exponent = lcm_l(cd.exponent, o);
  cd.inverse_map.resize(cd.count());
  cd.power_table.resize(cd.count());
  for (std::size_t c = 0; c < cd.count(); ++c) {
    int rep = cd.representatives[c];
    cd.inverse_map[c] = cd.class_of[static_cast<std::size_t>(inverse_[static_cast<std::size_t>(rep)])];
    auto& row = cd.power_table[c];
    int x = 0;
    for (long k = 0; k < cd.element_orders[c]; ++k) {
      row.push_back(cd.class_of[static_cast<std::size_t>(x)]);
      x = mul(x, rep);
    }
  }
}

int ConjClassData::power_map(int c, long k) const {
  const auto& row = power_table[static_cast<std::size_t>(c)];
  return row[static_cast<std::size_t>(mod_l(k, static_cast<long>(row.size())))];
}

const ConjClassData& conjugacy_classes(const FiniteGroup& G) { return G.classes(); }

SubgroupHandle make_subgroup(const FiniteGroup& G, std::vector<int> members) {
  SubgroupHandle h;
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  h.in.assign(static_cast<std::size_t>(G.order()), 0);
  for (int m : members) h.in[static_cast<std::size_t>(m)] = 1;
  h.members = std::move(members);
  h.is_normal = is_normal(G, h);
  // Abelian iff every member commutes with a generating set built greedily.
  std::vector<int> gens;
  std::vector<char> span(static_cast<std::size_t>(G.order()), 0);
  std::vector<int> cur{0};
  span[0] = 1;
  for (int m : h.members) {
    if (span[static_cast<std::size_t>(m)]) continue;
    gens.push_back(m);
    for (std::size_t head = 0; head < cur.size(); ++head)
      for (int s : gens) {
        int y = G.mul(cur[head], s);
        if (!span[static_cast<std::size_t>(y)]) {
          span[static_cast<std::size_t>(y)] = 1;
          cur.push_back(y);
        }
      }
  }
  h.is_abelian = true;
  for (int m : h.members) {
    for (int s : gens)
      if (G.mul(m, s) != G.mul(s, m)) {
        h.is_abelian = false;
        break;
      }
    if (!h.is_abelian) break;
  }
  return h;
}

namespace {

std::vector<int> closure(const FiniteGroup& G, const std::vector<int>& gens, std::vector<char>& in) {
  in.assign(static_cast<std::size_t>(G.order()), 0);
  std::vector<int> out{0};
  in[0] = 1;
  for (std::size_t head = 0; head < out.size(); ++head)
    for (int s : gens) {
      int y = G.mul(out[head], s);
      if (!in[static_cast<std::size_t>(y)]) {
        in[static_cast<std::size_t>(y)] = 1;
        out.push_back(y);
      }
    }
  return out;
}

}  // namespace

SubgroupHandle subgroup_generated(const FiniteGroup& G, const std::vector<int>& gens) {
  std::vector<char> in;
  return make_subgroup(G, closure(G, gens, in));
}

SubgroupHandle normal_closure(const FiniteGroup& G, const std::vector<int>& gens) {
  std::vector<int> s;
  for (int g : gens)
    if (g != 0) s.push_back(g);
  std::vector<char> in;
  auto members = closure(G, s, in);
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
      for (int x : G.generators()) {
        int c = G.conj(s[i], x);
        if (!in[static_cast<std::size_t>(c)]) {
          s.push_back(c);
          members = closure(G, s, in);
          changed = true;
        }
      }
    }
  }
  return make_subgroup(G, members);
}

SubgroupHandle trivial_subgroup(const FiniteGroup& G) { return make_subgroup(G, {0}); }

SubgroupHandle whole_group(const FiniteGroup& G) {
  std::vector<int> all(static_cast<std::size_t>(G.order()));
  std::iota(all.begin(), all.end(), 0);
  return make_subgroup(G, all);
}

bool is_normal(const FiniteGroup& G, const SubgroupHandle& H) {
  for (int h : H.members)
    for (int x : G.generators())
      if (!H.in[static_cast<std::size_t>(G.conj(h, x))]) return false;
  return true;
}

std::vector<int> subgroup_classes(const FiniteGroup& G, const SubgroupHandle& N) {
  const auto& cd = G.classes();
  std::vector<int> out;
  for (std::size_t c = 0; c < cd.count(); ++c)
    if (N.contains(cd.representatives[c])) out.push_back(static_cast<int>(c));
  return out;
}

std::vector<SubgroupHandle> normal_subgroups(const FiniteGroup& G) {
  // Every normal subgroup is a join of normal closures of single classes.
  const auto& cd = G.classes();
  std::vector<SubgroupHandle> found;
  auto add = [&](SubgroupHandle h) {
    for (const auto& f : found)
      if (f.members == h.members) return false;
    found.push_back(std::move(h));
    return true;
  };
  add(trivial_subgroup(G));
  std::vector<SubgroupHandle> atoms;
  for (std::size_t c = 1; c < cd.count(); ++c) {
    auto h = normal_closure(G, {cd.representatives[c]});
    bool dup = false;
    for (const auto& a : atoms)
      if (a.members == h.members) dup = true;
    if (!dup) atoms.push_back(h);
  }
  for (const auto& a : atoms) add(a);
  for (std::size_t i = 0; i < found.size(); ++i) {
    for (const auto& a : atoms) {
      const auto& cur = found[i];
      bool inside = std::all_of(a.members.begin(), a.members.end(), [&](int x) { return cur.contains(x); });
      if (inside) continue;
      std::vector<char> in(static_cast<std::size_t>(G.order()), 0);
      std::vector<int> prod;
      for (int x : cur.members)
        for (int y : a.members) {
          int z = G.mul(x, y);
          if (!in[static_cast<std::size_t>(z)]) {
            in[static_cast<std::size_t>(z)] = 1;
            prod.push_back(z);
          }
        }
      add(make_subgroup(G, prod));
    }
  }
  std::sort(found.begin(), found.end(), [](const SubgroupHandle& a, const SubgroupHandle& b) {
    if (a.order() != b.order()) return a.order() < b.order();
    return a.members < b.members;
  });
  return found;
}

SubgroupHandle commutator_subgroup(const FiniteGroup& G) {
  std::vector<int> comms;
  const auto& gens = G.generators();
  for (int a : gens)
    for (int b : gens) {
      int c = G.commutator(a, b);
      if (c != 0) comms.push_back(c);
    }
  return normal_closure(G, comms);
}

std::vector<int> centralizer(const FiniteGroup& G, int g) {
  std::vector<int> out;
  for (int x = 0; x < G.order(); ++x)
    if (G.mul(x, g) == G.mul(g, x)) out.push_back(x);
  return out;
}

std::vector<int> p_singular_classes(const FiniteGroup& G, long p) {
  const auto& cd = G.classes();
  std::vector<int> out;
  for (std::size_t c = 0; c < cd.count(); ++c)
    if (cd.element_orders[c] % p == 0) out.push_back(static_cast<int>(c));
  return out;
}

bool fixed_point_free_action(const FiniteGroup& G, const SubgroupHandle& N, const SubgroupHandle& H) {
  if (N.order() * H.order() != G.order()) return false;
  for (int h : H.members)
    if (h != 0 && N.contains(h)) return false;
  for (int h : H.members) {
    if (h == 0) continue;
    for (int n : N.members)
      if (n != 0 && G.conj(n, h) == n) return false;
  }
  return true;
}

std::optional<FrobeniusData> frobenius_structure(const FiniteGroup& G) {
  const auto& cd = G.classes();
  for (const auto& N : normal_subgroups(G)) {
    if (N.order() == 1 || N.order() == G.order()) continue;
    bool ok = true;
    for (int c : subgroup_classes(G, N)) {
      if (c == 0) continue;
      int rep = cd.representatives[static_cast<std::size_t>(c)];
      for (int x = 0; x < G.order() && ok; ++x)
        if (!N.contains(x) && G.mul(x, rep) == G.mul(rep, x)) ok = false;
      if (!ok) break;
    }
    if (!ok) continue;
    // Grow a subgroup meeting N trivially; it stays inside the unique complement through its first element.
    long target = G.order() / N.order();
    std::vector<int> gens;
    SubgroupHandle H = trivial_subgroup(G);
    for (int y = 1; y < G.order() && H.order() < target; ++y) {
      if (H.contains(y) || N.contains(y)) continue;
      auto trial = gens;
      trial.push_back(y);
      std::vector<char> in;
      auto members = closure(G, trial, in);
      bool meets = std::any_of(members.begin(), members.end(), [&](int m) { return m != 0 && N.contains(m); });
      if (meets) continue;
      gens = trial;
      H = make_subgroup(G, members);
    }
    if (H.order() != target) continue;
    return FrobeniusData{N, H};
  }
  return std::nullopt;
}

Quotient quotient_group(const FiniteGroup& G, const SubgroupHandle& N) {
  const auto n = static_cast<std::size_t>(G.order());
  std::vector<int> coset(n, -1), rep;
  for (std::size_t g = 0; g < n; ++g) {
    if (coset[g] >= 0) continue;
    int id = static_cast<int>(rep.size());
    rep.push_back(static_cast<int>(g));
    for (int x : N.members) coset[static_cast<std::size_t>(G.mul(static_cast<int>(g), x))] = id;
  }
  auto action = [&](int g) {
    Perm p(rep.size());
    for (std::size_t c = 0; c < rep.size(); ++c) p[c] = static_cast<std::uint16_t>(coset[static_cast<std::size_t>(G.mul(rep[c], g))]);
    return p;
  };
  std::vector<Perm> gens;
  for (int s : G.generators()) gens.push_back(action(s));
  GroupSpec spec;
  spec.family = "generators";
  spec.generators = gens;
  Quotient q;
  q.group = std::make_shared<FiniteGroup>(gens, G.order(), "quotient", spec);
  q.proj.resize(n);
  for (std::size_t g = 0; g < n; ++g) q.proj[g] = q.group->find(action(static_cast<int>(g)));
  return q;
}

SubgroupGroup subgroup_as_group(const FiniteGroup& G, const SubgroupHandle& H) {
  std::vector<int> gens;
  std::vector<char> in;
  auto cur = closure(G, gens, in);
  for (int h : H.members) {
    if (in[static_cast<std::size_t>(h)]) continue;
    gens.push_back(h);
    cur = closure(G, gens, in);
  }
  std::vector<Perm> perms;
  for (int g : gens) perms.push_back(G.perm(g));
  if (perms.empty()) perms.push_back(G.perm(0));
  GroupSpec spec;
  spec.family = "generators";
  spec.generators = perms;
  SubgroupGroup out;
  out.group = std::make_shared<FiniteGroup>(perms, G.order(), "subgroup", spec);
  out.embed.resize(static_cast<std::size_t>(out.group->order()));
  for (int i = 0; i < out.group->order(); ++i) out.embed[static_cast<std::size_t>(i)] = G.find(out.group->perm(i));
  return out;
}

std::vector<std::pair<SubgroupHandle, SubgroupHandle>> direct_decompositions(const FiniteGroup& G) {
  std::vector<std::pair<SubgroupHandle, SubgroupHandle>> out;
  auto ns = normal_subgroups(G);
  for (const auto& A : ns) {
    if (A.order() == 1 || A.order() == G.order()) continue;
    for (const auto& B : ns) {
      if (A.order() * B.order() != G.order()) continue;
      bool meet = std::any_of(B.members.begin(), B.members.end(), [&](int b) { return b != 0 && A.contains(b); });
      if (!meet) out.emplace_back(A, B);
    }
  }
  return out;
}

SubgroupHandle select_normal(const FiniteGroup& G, const std::string& selector) {
  if (selector == "commutator" || selector == "derived") return commutator_subgroup(G);
  if (selector == "trivial") return trivial_subgroup(G);
  if (selector == "whole") return whole_group(G);
  if (selector == "kernel") {
    auto fs = frobenius_structure(G);
    if (!fs) throw GroupError("group is not a Frobenius group");
    return fs->kernel;
  }
  long ord = 0;
  try {
    std::size_t pos = 0;
    ord = std::stol(selector, &pos);
    if (pos != selector.size()) throw GroupError("bad selector");
  } catch (const std::exception&) {
    throw GroupError("unknown normal subgroup selector: " + selector);
  }
  SubgroupHandle hit;
  int count = 0;
  for (auto& N : normal_subgroups(G))
    if (N.order() == ord) {
      if (count == 0) hit = N;
      ++count;
    }
  if (count == 0) throw GroupError("no normal subgroup of order " + selector);
  if (count > 1) throw GroupError("normal subgroup of order " + selector + " is not unique");
  return hit;
}

}  // namespace holgr

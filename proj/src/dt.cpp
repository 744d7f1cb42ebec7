#include "holgr/dt.hpp"

#include <algorithm>
#include <climits>
#include <deque>
#include <functional>
#include <mutex>
#include <set>
#include <tuple>

#include "holgr/dt_facts_data.hpp"

namespace holgr {

namespace {

constexpr int kDepthCap = 16;

enum FactType { FTrivial, FCyclic, FOrder, FNontrivial, FPPart, FDivisible, FHybrid, FWeak, FNotWeak };

bool dt_type(int t) { return t <= FDivisible; }

std::string fact_text(int type, long k, long p) {
  switch (type) {
    case FTrivial: return "DT trivial";
    case FCyclic: return "DT cyclic of order " + std::to_string(k);
    case FOrder: return "DT of order " + std::to_string(k);
    case FNontrivial: return "DT nontrivial";
    case FPPart: return "DT has nontrivial " + std::to_string(p) + "-part";
    case FDivisible: return "|DT| divisible by " + std::to_string(k);
    default: return "";
  }
}

bool is_power_of(long k, long p) {
  if (k < 1) return false;
  while (k % p == 0) k /= p;
  return k == 1;
}

long evaluate_k(const std::string& expr, long p) {
  if (expr == "p-1") return p - 1;
  if (expr == "p") return p;
  return std::stol(expr);
}

DTKind kind_from(const std::string& s) {
  if (s == "trivial") return DTKind::Trivial;
  if (s == "cyclic") return DTKind::Cyclic;
  if (s == "order") return DTKind::Order;
  if (s == "nontrivial") return DTKind::Nontrivial;
  if (s == "p-part-nontrivial") return DTKind::PPartNontrivial;
  throw std::invalid_argument("unknown DT assertion kind: " + s);
}

std::vector<std::pair<long, long>> signature(const FiniteGroup& G) {
  const auto& cd = G.classes();
  std::vector<std::pair<long, long>> s;
  for (std::size_t c = 0; c < cd.count(); ++c) s.emplace_back(cd.sizes[c], cd.element_orders[c]);
  std::sort(s.begin(), s.end());
  return s;
}

std::vector<int> small_generating_set(const FiniteGroup& G) {
  std::vector<int> gens;
  SubgroupHandle cur = trivial_subgroup(G);
  while (cur.order() < G.order()) {
    int best = -1;
    for (int x = 0; x < G.order(); ++x)
      if (!cur.contains(x) && (best < 0 || G.element_order(x) > G.element_order(best))) best = x;
    gens.push_back(best);
    cur = subgroup_generated(G, gens);
  }
  return gens;
}

// Extends generator images to a map; true when it is a well-defined bijective homomorphism.
bool extends_to_isomorphism(const FiniteGroup& A, const FiniteGroup& B, const std::vector<int>& gens, const std::vector<int>& imgs) {
  std::vector<int> map(static_cast<std::size_t>(A.order()), -1);
  std::vector<char> hit(static_cast<std::size_t>(B.order()), 0);
  map[0] = 0;
  hit[0] = 1;
  std::deque<int> queue{0};
  long seen = 1;
  while (!queue.empty()) {
    int x = queue.front();
    queue.pop_front();
    for (std::size_t i = 0; i < gens.size(); ++i) {
      int y = A.mul(x, gens[i]);
      int fy = B.mul(map[static_cast<std::size_t>(x)], imgs[i]);
      int& slot = map[static_cast<std::size_t>(y)];
      if (slot < 0) {
        if (hit[static_cast<std::size_t>(fy)]) return false;
        slot = fy;
        hit[static_cast<std::size_t>(fy)] = 1;
        ++seen;
        queue.push_back(y);
      } else if (slot != fy) {
        return false;
      }
    }
  }
  return seen == A.order();
}

const std::vector<std::string>& recognisable() {
  static const std::vector<std::string> names = {"C2xC2", "S3", "Q8",      "A4",    "S4",      "A5",       "S5",     "C2xC4",
                                                 "C2xC2xC2", "C3xC3", "C2xC6", "S3xC3",   "A4xC2",    "C3xA4",  "Aff(5)",
                                                 "Aff(7)",   "Aff(8)", "Aff(9)", "Frob72", "C7:C3",    "C13:C3", "Inv(3,3)",
                                                 "C4xC4",    "C2xQ8",  "S4xC2", "D8xC2",   "C2xC2xC3", "Inv(5,5)"};
  return names;
}

std::mutex& cache_mutex() {
  static std::mutex m;
  return m;
}

std::vector<std::pair<std::string, GroupPtr>>& recognition_cache(long order) {
  static std::map<long, std::vector<std::pair<std::string, GroupPtr>>> cache;
  auto it = cache.find(order);
  if (it != cache.end()) return it->second;
  std::vector<std::pair<std::string, GroupPtr>> list;
  list.emplace_back("C" + std::to_string(order), build_group("C" + std::to_string(order)));
  for (const auto& n : recognisable()) {
    auto G = build_group(n);
    if (G->order() == order) list.emplace_back(n, G);
  }
  if (order % 2 == 0 && order >= 6) list.emplace_back("D" + std::to_string(order), build_group("D" + std::to_string(order)));
  return cache[order] = list;
}

struct Child {
  int node = -1;
  SubgroupHandle N;
};

struct Direct {
  int b_node = -1;
  std::vector<int> weak_children;  // children of the parent made weakly hybrid by the products lemma
};

struct Node {
  GroupPtr G;
  std::string label;
  int depth = 0;
  std::vector<Child> quotients;
  std::vector<int> hybrid_children;
  int cp = -1;
  std::vector<Direct> directs;
};

using Key = std::tuple<int, int, long>;

class Engine {
 public:
  Engine(const FactBase& facts, long p) : facts_(facts), p_(p) {}

  int add(GroupPtr G, const std::string& label, int depth) {
    for (std::size_t i = 0; i < nodes_.size(); ++i)
      if (nodes_[i].G->order() == G->order() && signature(*nodes_[i].G) == signature(*G) && isomorphic(*nodes_[i].G, *G))
        return static_cast<int>(i);
    Node n;
    n.G = G;
    std::string r = recognise_group(*G);
    n.label = r.empty() ? label : r;
    n.depth = depth;
    nodes_.push_back(n);
    pending_expand_.push_back(static_cast<int>(nodes_.size()) - 1);
    return static_cast<int>(nodes_.size()) - 1;
  }

  void expand_all() {
    while (!pending_expand_.empty()) {
      int i = pending_expand_.front();
      pending_expand_.pop_front();
      expand(i);
    }
  }

  void run() {
    for (round_ = 0; round_ < kDepthCap; ++round_) {
      proposals_.clear();
      for (std::size_t i = 0; i < nodes_.size(); ++i) apply_rules(static_cast<int>(i));
      if (!commit()) return;
    }
  }

  const Node& node(int i) const { return nodes_[static_cast<std::size_t>(i)]; }
  std::optional<int> fact(int node, int type, long k) const {
    auto it = known_.find({node, type, k});
    if (it == known_.end()) return std::nullopt;
    return it->second;
  }
  const std::vector<Derivation>& log() const { return log_; }

  DTAssertion assertion(int i, std::vector<int>& support) const {
    DTAssertion a;
    std::optional<int> best;
    auto consider = [&](DTKind k, long val, int id) {
      if (static_cast<int>(k) > static_cast<int>(a.kind)) {
        a.kind = k;
        a.k = val;
        best = id;
      }
    };
    for (const auto& [key, id] : known_) {
      auto [n, t, k] = key;
      if (n != i) continue;
      if (t == FTrivial) consider(DTKind::Trivial, 1, id);
      if (t == FCyclic) consider(DTKind::Cyclic, k, id);
      if (t == FOrder) consider(DTKind::Order, k, id);
      if (t == FPPart) consider(DTKind::PPartNontrivial, 0, id);
      if (t == FNontrivial) consider(DTKind::Nontrivial, 0, id);
      if (t == FDivisible) a.divisible_by.push_back(k);
    }
    if (a.kind == DTKind::Trivial) a.divisible_by.clear();
    if (a.kind == DTKind::PPartNontrivial || a.kind == DTKind::Nontrivial) a.k = 0;
    if (best) support.push_back(*best);
    if (a.kind == DTKind::PPartNontrivial || a.kind == DTKind::Nontrivial)
      for (const auto& [key, id] : known_)
        if (std::get<0>(key) == i && std::get<1>(key) == FDivisible) support.push_back(id);
    return a;
  }

 private:
  struct Proposal {
    Key key;
    std::string rule;
    std::string conclusion;
    std::vector<int> premises;
  };

  const FactBase& facts_;
  long p_;
  std::vector<Node> nodes_;
  std::deque<int> pending_expand_;
  std::map<Key, int> known_;
  std::vector<Derivation> log_;
  std::vector<Proposal> proposals_;
  int round_ = 0;

  std::string subject(int i) const { return nodes_[static_cast<std::size_t>(i)].label + " at p=" + std::to_string(p_); }

  std::string conclusion_text(const Key& key) const {
    auto [n, t, k] = key;
    if (dt_type(t)) return fact_text(t, k, p_);
    const auto& N = nodes_[static_cast<std::size_t>(n)].quotients[static_cast<std::size_t>(k)];
    std::string q = nodes_[static_cast<std::size_t>(N.node)].label;
    std::string base = "N of order " + std::to_string(N.N.order()) + " (quotient " + q + ")";
    if (t == FHybrid) return "Z_p[G] is N-hybrid, " + base;
    if (t == FWeak) return "Z_p[G] is weakly N-hybrid, " + base;
    return "Z_p[G] is not weakly N-hybrid, " + base;
  }

  void propose(int node, int type, long k, const std::string& rule, std::vector<int> premises) {
    Key key{node, type, k};
    if (known_.count(key)) return;
    proposals_.push_back({key, rule, conclusion_text(key), std::move(premises)});
  }

  bool commit() {
    bool changed = false;
    for (auto& pr : proposals_) {
      if (known_.count(pr.key)) continue;
      Derivation d;
      d.id = static_cast<int>(log_.size());
      d.rule = pr.rule;
      d.citation = facts_.citation(pr.rule);
      d.subject = subject(std::get<0>(pr.key));
      d.conclusion = pr.conclusion;
      d.premises = pr.premises;
      known_[pr.key] = d.id;
      log_.push_back(d);
      changed = true;
      check_consistency(pr.key);
    }
    return changed;
  }

  // Two DT facts about the same node that cannot both hold.
  bool conflict(int t1, long k1, int t2, long k2) const {
    auto exact = [](int t) { return t == FOrder || t == FCyclic; };
    auto nontriv = [&](int t, long k) {
      return t == FNontrivial || t == FPPart || (t == FDivisible && k > 1) || (exact(t) && k > 1);
    };
    for (int pass = 0; pass < 2; ++pass) {
      if (t1 == FTrivial && nontriv(t2, k2)) return true;
      if (exact(t1) && exact(t2) && k1 != k2) return true;
      if (exact(t1) && t2 == FDivisible && k1 % k2 != 0) return true;
      if (exact(t1) && t2 == FPPart && k1 % p_ != 0) return true;
      if (exact(t1) && k1 == 1 && t2 == FNontrivial) return true;
      std::swap(t1, t2);
      std::swap(k1, k2);
    }
    return false;
  }

  void check_consistency(const Key& key) {
    auto [n, t, k] = key;
    if (t == FWeak && known_.count({n, FNotWeak, k})) throw InternalError("weakly hybrid and not weakly hybrid both derived for " + subject(n));
    if (t == FNotWeak && known_.count({n, FWeak, k})) throw InternalError("weakly hybrid and not weakly hybrid both derived for " + subject(n));
    if (!dt_type(t)) return;
    for (const auto& [other, id] : known_) {
      if (std::get<0>(other) != n || !dt_type(std::get<1>(other))) continue;
      if (conflict(t, k, std::get<1>(other), std::get<2>(other)))
        throw InternalError("inconsistent DT facts for " + subject(n) + ": " + fact_text(t, k, p_) + " and " +
                            fact_text(std::get<1>(other), std::get<2>(other), p_));
    }
  }

  std::vector<std::pair<Key, int>> dt_facts_of(int n) const {
    std::vector<std::pair<Key, int>> out;
    for (auto it = known_.lower_bound({n, 0, LONG_MIN}); it != known_.end() && std::get<0>(it->first) == n; ++it)
      if (dt_type(std::get<1>(it->first))) out.push_back(*it);
    return out;
  }

  void expand(int i) {
    GroupPtr G = nodes_[static_cast<std::size_t>(i)].G;
    const int depth = nodes_[static_cast<std::size_t>(i)].depth;
    const std::string label = nodes_[static_cast<std::size_t>(i)].label;
    if (depth >= kDepthCap) return;
    std::vector<Child> children;
    for (auto& N : normal_subgroups(*G)) {
      if (N.order() == 1) continue;
      auto Q = quotient_group(*G, N);
      int c = add(Q.group, label + "/N" + std::to_string(N.order()), depth + 1);
      children.push_back({c, N});
    }
    nodes_[static_cast<std::size_t>(i)].quotients = children;

    if (G->order() % p_ == 0) {
      for (int x = 1; x < G->order(); ++x)
        if (G->element_order(x) == p_) {
          auto H = subgroup_as_group(*G, subgroup_generated(*G, {x}));
          nodes_[static_cast<std::size_t>(i)].cp = add(H.group, "C" + std::to_string(p_), depth + 1);
          break;
        }
    }

    std::vector<int> hybrid;
    bool need_table = false;
    for (const auto& ch : children)
      if (ch.N.order() % p_ != 0) need_table = true;
    if (need_table) {
      auto t = character_table(G);
      for (std::size_t c = 0; c < children.size(); ++c)
        if (children[c].N.order() % p_ != 0 && is_hybrid(t, children[c].N, p_).is_hybrid) hybrid.push_back(static_cast<int>(c));
    }
    nodes_[static_cast<std::size_t>(i)].hybrid_children = hybrid;

    if (p_ == 2) {
      std::vector<Direct> directs;
      for (const auto& [A, B] : direct_decompositions(*G)) {
        Direct d;
        auto Bg = subgroup_as_group(*G, B);
        d.b_node = add(Bg.group, label + "/A" + std::to_string(A.order()), depth + 1);
        auto Ag = subgroup_as_group(*G, A);
        auto tA = character_table(Ag.group);
        auto blocks = padic_blocks(tA, 2);
        for (auto& N1 : normal_subgroups(*Ag.group)) {
          if (N1.order() == 1 || N1.order() % 2 == 0) continue;
          auto rep = is_hybrid(tA, N1, 2);
          if (!rep.is_hybrid) continue;
          bool rational = std::all_of(rep.block_split.begin(), rep.block_split.end(),
                                      [&](int b) { return blocks[static_cast<std::size_t>(b)].orbit.size() == 1; });
          if (!rational) continue;
          std::vector<int> members;
          for (int x : N1.members) members.push_back(Ag.embed[static_cast<std::size_t>(x)]);
          std::sort(members.begin(), members.end());
          for (std::size_t c = 0; c < children.size(); ++c)
            if (children[c].N.members == members) d.weak_children.push_back(static_cast<int>(c));
        }
        if (!d.weak_children.empty()) directs.push_back(d);
      }
      nodes_[static_cast<std::size_t>(i)].directs = directs;
    }
  }

  void base_facts(int i) {
    if (round_ != 0) return;
    const auto& G = *nodes_[static_cast<std::size_t>(i)].G;
    if (G.order() % p_ != 0) propose(i, FTrivial, 1, "maximal-order", {});
    for (const auto& f : facts_.facts()) {
      if (f.p != 0 && f.p != p_) continue;
      bool match = false;
      if (f.match == "cyclic-of-order-p") match = G.order() == p_;
      else if (f.match == "isomorphic") {
        auto H = build_group(f.group);
        match = H->order() == G.order() && signature(*H) == signature(G) && isomorphic(*H, G);
      } else if (f.match == "inversion") {
        match = is_inversion_group(G);
      }
      if (!match) continue;
      long k = f.kind == DTKind::Trivial ? 1 : evaluate_k(f.k_expr, p_);
      int type = f.kind == DTKind::Trivial ? FTrivial : f.kind == DTKind::Cyclic ? FCyclic : f.kind == DTKind::Order ? FOrder
                 : f.kind == DTKind::PPartNontrivial ? FPPart : FNontrivial;
      propose(i, type, k, "fact:" + f.id, {});
    }
  }

  void elementary(int i) {
    for (const auto& [key, id] : dt_facts_of(i)) {
      auto [n, t, k] = key;
      if (t == FCyclic) propose(i, FOrder, k, "group-order-facts", {id});
      if (t == FOrder && k == 1) propose(i, FTrivial, 1, "group-order-facts", {id});
      if ((t == FOrder || t == FDivisible) && k > 1) {
        propose(i, FNontrivial, 0, "group-order-facts", {id});
        if (k % p_ == 0) propose(i, FPPart, 0, "group-order-facts", {id});
      }
      if (t == FPPart) propose(i, FNontrivial, 0, "group-order-facts", {id});
    }
  }

  // DT(source) surjects onto DT(target).
  void surjection(int source, int target, const std::string& rule) {
    if (auto t = fact(source, FTrivial, 1)) propose(target, FTrivial, 1, rule, {*t});
    for (const auto& [key, id] : dt_facts_of(target)) {
      auto [n, t, k] = key;
      if (t == FNontrivial) propose(source, FNontrivial, 0, rule, {id});
      if (t == FPPart) propose(source, FPPart, 0, rule, {id});
      if ((t == FOrder || t == FCyclic || t == FDivisible) && k > 1) propose(source, FDivisible, k, rule, {id});
    }
  }

  void apply_rules(int i) {
    base_facts(i);
    elementary(i);
    const Node& nd = nodes_[static_cast<std::size_t>(i)];
    for (std::size_t c = 0; c < nd.quotients.size(); ++c) {
      const int q = nd.quotients[c].node;
      const long idx = static_cast<long>(c);
      surjection(i, q, "quotient-surjective");
      if (nd.quotients[c].N.order() % p_ == 0) propose(i, FNotWeak, idx, "weakly-hybrid-coprime", {});
      if (auto h = fact(i, FHybrid, idx)) propose(i, FWeak, idx, "hybrid-is-weakly-hybrid", {*h});
      if (auto w = fact(i, FWeak, idx)) {
        for (const auto& [key, id] : dt_facts_of(q)) propose(i, std::get<1>(key), std::get<2>(key), "weakly-hybrid-quotient-iso", {*w, id});
        for (const auto& [key, id] : dt_facts_of(i)) propose(q, std::get<1>(key), std::get<2>(key), "weakly-hybrid-quotient-iso", {*w, id});
      } else {
        // Contrapositive: facts that cannot both hold after the isomorphism.
        for (const auto& [kq, iq] : dt_facts_of(q))
          for (const auto& [kg, ig] : dt_facts_of(i))
            if (conflict(std::get<1>(kq), std::get<2>(kq), std::get<1>(kg), std::get<2>(kg)))
              propose(i, FNotWeak, idx, "weakly-hybrid-quotient-iso", {iq, ig});
      }
    }
    for (int c : nd.hybrid_children) propose(i, FHybrid, c, "hybrid-criterion", {});
    if (nd.cp >= 0 && nd.cp != i) surjection(i, nd.cp, "restriction-surjective");
    for (const auto& d : nd.directs)
      if (auto t = fact(d.b_node, FTrivial, 1))
        for (int c : d.weak_children) propose(i, FWeak, c, "weak-hybrid-products", {*t});
  }
};

}  // namespace

std::string dt_kind_name(DTKind k) {
  switch (k) {
    case DTKind::Unknown: return "unknown";
    case DTKind::Nontrivial: return "nontrivial";
    case DTKind::PPartNontrivial: return "p-part-nontrivial";
    case DTKind::Order: return "order";
    case DTKind::Cyclic: return "isomorphic-to-cyclic";
    case DTKind::Trivial: return "trivial";
  }
  return "unknown";
}

bool DTAssertion::is_p_group(long p) const {
  if (kind == DTKind::Trivial) return true;
  if (kind == DTKind::Order || kind == DTKind::Cyclic) return is_power_of(k, p);
  return false;
}

std::string DTAssertion::to_string() const {
  if (kind == DTKind::Order || kind == DTKind::Cyclic) return dt_kind_name(kind) + "(" + std::to_string(k) + ")";
  return dt_kind_name(kind);
}

nlohmann::json DTAssertion::to_json() const {
  nlohmann::json j;
  j["kind"] = dt_kind_name(kind);
  if (kind == DTKind::Order || kind == DTKind::Cyclic) j["k"] = k;
  j["divisible_by"] = divisible_by;
  j["text"] = to_string();
  return j;
}

nlohmann::json derivation_tree(const std::vector<Derivation>& log, int root) {
  const auto& d = log.at(static_cast<std::size_t>(root));
  nlohmann::json j;
  j["conclusion"] = d.conclusion;
  j["subject"] = d.subject;
  j["rule"] = d.rule;
  j["citation"] = d.citation;
  j["premises"] = nlohmann::json::array();
  for (int p : d.premises) j["premises"].push_back(derivation_tree(log, p));
  return j;
}

FactBase FactBase::from_json(const nlohmann::json& j) {
  FactBase fb;
  if (j.value("schema", "") != "holgr.dt-facts") throw std::invalid_argument("not a DT fact base");
  fb.version_ = j.at("version").get<int>();
  for (const auto& f : j.at("facts")) {
    FactEntry e;
    e.id = f.at("id").get<std::string>();
    e.match = f.at("match").get<std::string>();
    if (e.match != "cyclic-of-order-p" && e.match != "isomorphic" && e.match != "inversion")
      throw std::invalid_argument("unknown fact pattern: " + e.match);
    e.group = f.value("group", "");
    e.p = f.value("p", 0L);
    e.kind = kind_from(f.at("assertion").at("kind").get<std::string>());
    if (f.at("assertion").contains("k")) {
      const auto& k = f.at("assertion").at("k");
      e.k_expr = k.is_string() ? k.get<std::string>() : std::to_string(k.get<long>());
    }
    e.citation = f.at("citation").get<std::string>();
    fb.rules_["fact:" + e.id] = e.citation;
    fb.facts_.push_back(e);
  }
  for (const auto& u : j.value("unknown", nlohmann::json::array())) fb.unknown_.push_back(u);
  for (const auto& r : j.at("rules")) fb.rules_[r.at("name").get<std::string>()] = r.at("citation").get<std::string>();
  for (const auto& r : j.value("report_rules", nlohmann::json::array())) fb.rules_[r.at("name").get<std::string>()] = r.at("citation").get<std::string>();
  return fb;
}

const FactBase& FactBase::builtin() {
  static const FactBase fb = from_json(nlohmann::json::parse(kDtFactsJson));
  return fb;
}

const std::string& FactBase::citation(const std::string& rule) const {
  auto it = rules_.find(rule);
  if (it == rules_.end()) throw InternalError("rule without a citation: " + rule);
  return it->second;
}

std::vector<std::string> FactBase::rule_names() const {
  std::vector<std::string> out;
  for (const auto& [k, v] : rules_) out.push_back(k);
  return out;
}

nlohmann::json DTAnswer::to_json() const {
  nlohmann::json j;
  j["group"] = group;
  j["p"] = p;
  j["assertion"] = assertion.to_json();
  j["derivation"] = nlohmann::json::array();
  for (int s : support) j["derivation"].push_back(derivation_tree(log, s));
  return j;
}

DTAnswer dt_query(GroupPtr G, long p, const FactBase& facts) {
  if (!is_prime(p)) throw std::invalid_argument("p must be prime");
  Engine e(facts, p);
  int root = e.add(G, G->spec().name(), 0);
  e.expand_all();
  e.run();
  DTAnswer a;
  a.group = G->spec().name();
  a.p = p;
  a.assertion = e.assertion(root, a.support);
  a.log = e.log();
  return a;
}

DTAnswer dt_query(const std::string& descriptor, long p, const FactBase& facts) { return dt_query(build_group(descriptor), p, facts); }

std::string tri_name(Tri t) { return t == Tri::Yes ? "yes" : t == Tri::No ? "no" : "unknown"; }

nlohmann::json WeakHybridVerdict::to_json() const {
  nlohmann::json j;
  j["weakly_hybrid"] = tri_name(verdict);
  j["derivation"] = nlohmann::json::array();
  for (int s : support) j["derivation"].push_back(derivation_tree(log, s));
  return j;
}

WeakHybridVerdict is_weakly_hybrid(GroupPtr G, const SubgroupHandle& N, long p, const FactBase& facts) {
  if (!is_normal(*G, N)) throw GroupError("subgroup is not normal");
  if (!is_prime(p)) throw std::invalid_argument("p must be prime");
  WeakHybridVerdict v;
  if (N.order() == 1) {
    Derivation d;
    d.rule = "hybrid-is-weakly-hybrid";
    d.citation = facts.citation(d.rule);
    d.subject = G->spec().name() + " at p=" + std::to_string(p);
    d.conclusion = "Z_p[G] is weakly N-hybrid for N trivial (e_N = 1)";
    v.verdict = Tri::Yes;
    v.log.push_back(d);
    v.support.push_back(0);
    return v;
  }
  Engine e(facts, p);
  int root = e.add(G, G->spec().name(), 0);
  e.expand_all();
  e.run();
  v.log = e.log();
  const auto& qs = e.node(root).quotients;
  for (std::size_t c = 0; c < qs.size(); ++c) {
    if (!(qs[c].N == N)) continue;
    if (auto y = e.fact(root, FWeak, static_cast<long>(c))) {
      v.verdict = Tri::Yes;
      v.support.push_back(*y);
    } else if (auto n = e.fact(root, FNotWeak, static_cast<long>(c))) {
      v.verdict = Tri::No;
      v.support.push_back(*n);
    }
  }
  return v;
}

nlohmann::json MaximalityConsequence::to_json() const {
  return {{"group_ring_maximal", group_ring_maximal}, {"consequence", consequence}, {"consistent", consistent}};
}

MaximalityConsequence maximality_consequence(const CharTable& t, long p, const DTAssertion& a) {
  const auto& G = *t.group;
  MaximalityConsequence m;
  auto blocks = padic_blocks(t, p);
  m.group_ring_maximal = std::all_of(blocks.begin(), blocks.end(), [](const PadicBlock& b) { return b.idempotent_integral; });
  if (m.group_ring_maximal != (G.order() % p != 0)) throw InternalError("integral idempotents disagree with p not dividing |G|");
  const long v2 = vp(G.order(), 2);
  if (m.group_ring_maximal) {
    m.consequence = "Z_p[G] is maximal, so DT is trivial";
    m.consistent = a.kind == DTKind::Trivial || a.kind == DTKind::Unknown || (a.is_p_group(p) && a.k == 1);
  } else if (a.kind == DTKind::Trivial) {
    m.consequence = "DT trivial: Z_p[G] is maximal, or p = 2 and v_2(|G|) = 1";
    m.consistent = p == 2 && v2 == 1;
  } else if (a.is_p_group(p)) {
    m.consequence = "DT a p-group: Z_p[G] is maximal or p = 2";
    m.consistent = p == 2;
  } else {
    m.consequence = "no structural consequence";
  }
  if (!m.consistent)
    throw InternalError("DT assertion " + a.to_string() + " for " + G.spec().name() + " at p=" + std::to_string(p) +
                        " contradicts the integral-idempotent data");
  return m;
}

bool isomorphic(const FiniteGroup& A, const FiniteGroup& B) {
  if (A.order() != B.order() || signature(A) != signature(B)) return false;
  auto gens = small_generating_set(A);
  const auto& ca = A.classes();
  const auto& cb = B.classes();
  std::vector<std::vector<int>> cand(gens.size());
  for (std::size_t i = 0; i < gens.size(); ++i) {
    const int g = gens[i];
    const long sz = ca.sizes[static_cast<std::size_t>(ca.class_of[static_cast<std::size_t>(g)])];
    for (int x = 0; x < B.order(); ++x)
      if (B.element_order(x) == A.element_order(g) && cb.sizes[static_cast<std::size_t>(cb.class_of[static_cast<std::size_t>(x)])] == sz)
        cand[i].push_back(x);
  }
  std::vector<int> imgs(gens.size());
  // The first image can be fixed up to conjugacy.
  std::function<bool(std::size_t)> search = [&](std::size_t i) {
    if (i == gens.size()) return extends_to_isomorphism(A, B, gens, imgs);
    std::set<int> classes_tried;
    for (int x : cand[i]) {
      if (i == 0) {
        int c = cb.class_of[static_cast<std::size_t>(x)];
        if (!classes_tried.insert(c).second) continue;
      }
      imgs[i] = x;
      if (search(i + 1)) return true;
    }
    return false;
  };
  return search(0);
}

std::string recognise_group(const FiniteGroup& G) {
  if (G.order() == 1) return "C1";
  std::lock_guard<std::mutex> lock(cache_mutex());
  for (const auto& [name, H] : recognition_cache(G.order()))
    if (isomorphic(*H, G)) return name;
  return "";
}

bool is_inversion_group(const FiniteGroup& G) {
  const long n = G.order();
  if (n % 2 != 0 || (n / 2) % 2 == 0) return false;
  std::vector<int> A;
  for (int x = 0; x < n; ++x)
    if (G.element_order(x) % 2 == 1) A.push_back(x);
  if (static_cast<long>(A.size()) * 2 != n) return false;
  for (int a : A)
    for (int b : A)
      if (G.mul(a, b) != G.mul(b, a)) return false;
  std::vector<char> inA(static_cast<std::size_t>(n), 0);
  for (int a : A) inA[static_cast<std::size_t>(a)] = 1;
  for (int a : A)
    for (int b : A)
      if (!inA[static_cast<std::size_t>(G.mul(a, b))]) return false;
  for (int t = 0; t < n; ++t) {
    if (inA[static_cast<std::size_t>(t)]) continue;
    for (int a : A)
      if (G.conj(a, t) != G.inv(a)) return false;
  }
  return true;
}

}  // namespace holgr

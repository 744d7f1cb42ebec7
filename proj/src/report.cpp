#include "holgr/report.hpp"

#include <algorithm>
#include <functional>
#include <map>

namespace holgr {

namespace {

constexpr int kRoundCap = 16;

std::set<long> prime_divisors(long n) {
  std::set<long> out;
  for (long q = 2; q * q <= n; ++q)
    while (n % q == 0) {
      out.insert(q);
      n /= q;
    }
  if (n > 1) out.insert(n);
  return out;
}

// 0 stands for every prime not dividing 2|G|.
std::string prime_text(long p) { return p == 0 ? "p" : std::to_string(p); }
std::string prime_note(long p) { return p == 0 ? " for p not dividing 2|G|" : ""; }

std::string name_of(const FiniteGroup& G, const std::string& fallback) {
  auto r = recognise_group(G);
  return r.empty() ? fallback : r;
}

struct NormalInfo {
  SubgroupHandle N;
  std::string n_name;
  std::string q_name;
  GroupPtr quotient;
  bool quotient_abelian = false;
};

class ReportEngine {
 public:
  ReportEngine(const Scenario& s, GroupPtr G, const FactBase& facts) : s_(s), G_(std::move(G)), facts_(facts) {
    abelian_ = static_cast<long>(G_->classes().count()) == G_->order();
    primes_ = prime_divisors(2 * G_->order());
    primes_.insert(0);
    if (s_.conjecture == "local-epsilon") primes_.insert(s_.p);
    for (auto& N : normal_subgroups(*G_)) {
      if (N.order() == 1 || N.order() == G_->order()) continue;
      NormalInfo info;
      info.N = N;
      auto Q = quotient_group(*G_, N);
      info.quotient = Q.group;
      info.quotient_abelian = static_cast<long>(Q.group->classes().count()) == Q.group->order();
      info.n_name = name_of(*subgroup_as_group(*G_, N).group, "N of order " + std::to_string(N.order()));
      info.q_name = name_of(*Q.group, "G/N of order " + std::to_string(Q.group->order()));
      normals_.push_back(info);
    }
  }

  void run() {
    seed();
    for (int round = 0; round < kRoundCap; ++round) {
      proposals_.clear();
      if (s_.conjecture == "etnc") etnc_rules();
      else epsilon_rules();
      if (!commit()) break;
    }
  }

  std::optional<int> get(const std::string& atom) const {
    auto it = known_.find(atom);
    if (it == known_.end()) return std::nullopt;
    return it->second;
  }
  const std::set<long>& primes() const { return primes_; }
  const std::vector<NormalInfo>& normals() const { return normals_; }
  std::vector<Derivation>& log() { return log_; }

  static std::string max_atom(long p) { return "ETNCmax_" + prime_text(p); }
  static std::string etnc_atom(long p) { return "ETNC_" + prime_text(p); }
  static std::string quot_atom(long p, std::size_t n) { return "ETNCquot_" + prime_text(p) + "_" + std::to_string(n); }
  static std::string equiv_atom(long p, std::size_t n) { return "EQUIV_" + prime_text(p) + "_" + std::to_string(n); }
  static std::string wh_atom(long p, std::size_t n) { return "WH_" + prime_text(p) + "_" + std::to_string(n); }
  static std::string dt_atom(long p) { return "DT_" + prime_text(p); }
  static std::string abel_atom(std::size_t n) { return "ABEL_" + std::to_string(n); }

 private:
  struct Proposal {
    std::string atom, rule, text;
    std::vector<int> premises;
  };

  const Scenario& s_;
  GroupPtr G_;
  const FactBase& facts_;
  std::set<long> primes_;
  bool abelian_ = false;
  std::vector<NormalInfo> normals_;
  std::map<std::string, int> known_;
  std::vector<Derivation> log_;
  std::vector<Proposal> proposals_;

  std::string rs() const { return std::to_string(s_.r); }
  std::string group_label() const { return name_of(*G_, G_->spec().name()); }

  int record(const std::string& rule, const std::string& text, std::vector<int> premises) {
    Derivation d;
    d.id = static_cast<int>(log_.size());
    d.rule = rule;
    d.citation = facts_.citation(rule);
    d.subject = group_label();
    d.conclusion = text;
    d.premises = std::move(premises);
    log_.push_back(d);
    return d.id;
  }

  void put(const std::string& atom, const std::string& rule, const std::string& text, std::vector<int> premises = {}) {
    if (!known_.count(atom)) known_[atom] = record(rule, text, std::move(premises));
  }

  void propose(const std::string& atom, const std::string& rule, const std::string& text, std::vector<int> premises) {
    if (known_.count(atom)) return;
    proposals_.push_back({atom, rule, text, std::move(premises)});
  }

  bool commit() {
    bool changed = false;
    for (auto& pr : proposals_) {
      if (known_.count(pr.atom)) continue;
      known_[pr.atom] = record(pr.rule, pr.text, pr.premises);
      changed = true;
    }
    return changed;
  }

  // Copies a derivation subtree from another log.
  int import(const std::vector<Derivation>& other, int root, std::map<int, int>& memo) {
    auto it = memo.find(root);
    if (it != memo.end()) return it->second;
    const auto& d = other.at(static_cast<std::size_t>(root));
    std::vector<int> prem;
    for (int p : d.premises) prem.push_back(import(other, p, memo));
    Derivation c = d;
    c.id = static_cast<int>(log_.size());
    c.premises = prem;
    log_.push_back(c);
    return memo[root] = c.id;
  }

  bool asserted(const std::string& h) const { return s_.asserted.count(h) != 0; }

  void seed() {
    if (s_.totally_real) put("HYP_totally_real", "user-asserted", "L/K is an extension of totally real fields");
    if (asserted("quadratic-subfield-imaginary")) put("HYP_imag", "user-asserted", "the quadratic subfield K' of L/Q is imaginary");
    if (asserted("class-number-one")) put("HYP_h1", "user-asserted", "K' has class number 1");
    for (long p : s_.class_number_coprime) put("HYP_h_" + prime_text(p), "user-asserted", std::to_string(p) + " does not divide the class number of K'");
    for (long p : s_.split_primes) put("HYP_split_" + prime_text(p), "user-asserted", std::to_string(p) + " splits in K'");
    if (asserted("commutator-field-abelian")) put("HYP_comm", "user-asserted", "L^{G'}/Q is abelian");

    for (std::size_t n = 0; n < normals_.size(); ++n) {
      const auto& N = normals_[n];
      if (!N.quotient_abelian) continue;
      std::string text = "L^N/Q is abelian for N = " + N.n_name;
      if (s_.base == "Q") put(abel_atom(n), "base-field-Q", text);
      else if (auto h = get("HYP_comm")) put(abel_atom(n), "commutator-field", text, {*h});
    }
    if (s_.base == "Q") put("ABEL_comm", "base-field-Q", "L^{G'}/Q is abelian");
    else if (auto h = get("HYP_comm")) known_["ABEL_comm"] = *h;

    // DT engine inputs.
    for (long p : primes_) {
      if (p == 0 || G_->order() % p != 0) {
        put(dt_atom(p), "maximal-order", "DT(Z_" + prime_text(p) + "[G]) trivial" + prime_note(p));
        continue;
      }
      auto a = dt_query(G_, p, facts_);
      if (a.assertion.kind == DTKind::Trivial) {
        std::map<int, int> memo;
        int root = import(a.log, a.support.at(0), memo);
        put(dt_atom(p), "dt-query", "DT(Z_" + std::to_string(p) + "[G]) trivial", {root});
      }
      for (std::size_t n = 0; n < normals_.size(); ++n) {
        if (normals_[n].N.order() % p == 0) continue;
        auto v = is_weakly_hybrid(G_, normals_[n].N, p, facts_);
        if (v.verdict != Tri::Yes) continue;
        std::map<int, int> memo;
        int root = import(v.log, v.support.at(0), memo);
        put(wh_atom(p, n), "dt-query", "Z_" + std::to_string(p) + "[G] is weakly N-hybrid for N = " + normals_[n].n_name, {root});
      }
    }
    if (s_.conjecture == "etnc") quotient_scenarios();
  }

  // ETNC for L^N/K from the scenario of G/N, for non-abelian quotients that matter.
  void quotient_scenarios() {
    for (std::size_t n = 0; n < normals_.size(); ++n) {
      const auto& N = normals_[n];
      if (N.quotient_abelian) continue;
      bool wanted = std::any_of(primes_.begin(), primes_.end(), [&](long p) { return get(wh_atom(p, n)).has_value(); });
      if (!wanted) continue;
      ReportEngine sub(s_, N.quotient, facts_);
      sub.run();
      const long qorder = N.quotient->order();
      for (long p : primes_) {
        const long pq = (p != 0 && (2 * qorder) % p == 0) ? p : 0;
        auto id = sub.get(etnc_atom(pq));
        if (!id) continue;
        std::map<int, int> memo;
        int root = import(sub.log(), *id, memo);
        put(quot_atom(p, n), "quotient-field",
            "ETNC_" + prime_text(p) + "(L^N/K," + rs() + ") holds for N = " + N.n_name + " (Gal(L^N/K) = " + N.q_name + ")" + prime_note(p), {root});
      }
    }
  }

  bool rational_or_abelian_field(std::vector<int>& premises) {
    auto t = character_table(G_);
    auto derived = commutator_subgroup(*G_);
    bool used_abel = false;
    for (const auto& c : t.chars) {
      bool rational = std::all_of(c.values.begin(), c.values.end(), [](const CycloNum& v) { return v.is_rational(); });
      if (rational) continue;
      bool linear = std::all_of(derived.members.begin(), derived.members.end(), [&](int x) { return c.kernel.contains(x); });
      if (linear && get("ABEL_comm")) {
        used_abel = true;
        continue;
      }
      return false;
    }
    if (used_abel) premises.push_back(*get("ABEL_comm"));
    return true;
  }

  std::optional<long> dihedral_odd_n() const {
    if (s_.base != "Q" || !is_inversion_group(*G_) || G_->order() < 6) return std::nullopt;
    const long n = G_->order() / 2;
    for (int x = 0; x < G_->order(); ++x)
      if (G_->element_order(x) == n) return n;
    return std::nullopt;
  }

  std::optional<int> class_number_ok(long p) const {
    if (auto h = get("HYP_h1")) return h;
    return get("HYP_h_" + prime_text(p));
  }

  void etnc_rules() {
    const std::string r = rs();
    const bool odd_negative = s_.r < 0 && (-s_.r) % 2 == 1;
    std::vector<int> prem;
    if (s_.r == 0 && rational_or_abelian_field(prem)) propose("SSC", "ssc-characters", "SSC(L/K) holds", prem);
    for (long p : primes_) {
      const std::string ps = prime_text(p);
      const std::string note = prime_note(p);
      if (auto ssc = get("SSC")) propose(max_atom(p), "ssc-is-max", "ETNC^max_" + ps + "(L/K,0) holds" + note, {*ssc});
      if (odd_negative && p != 2)
        if (auto tr = get("HYP_totally_real")) propose(max_atom(p), "max-totally-real", "ETNC^max_" + ps + "(L/K," + r + ") holds" + note, {*tr});
      auto mx = get(max_atom(p));
      const std::string etnc_text = "ETNC_" + ps + "(L/K," + r + ") holds" + note;
      if (auto ab = get("ABEL_comm"); ab && abelian_)
        propose(etnc_atom(p), "abelian-over-Q", "ETNC_" + ps + "(L/K," + r + ") holds, L = L^{G'}" + note, {*ab});
      if (mx && (p == 0 || G_->order() % p != 0)) propose(etnc_atom(p), "coprime-max", etnc_text, {*mx});
      if (mx)
        if (auto dt = get(dt_atom(p)); dt && p != 0 && G_->order() % p == 0) propose(etnc_atom(p), "dt-trivial-max", etnc_text, {*mx, *dt});
      for (std::size_t n = 0; n < normals_.size(); ++n) {
        const auto& N = normals_[n];
        const std::string qtext = "ETNC_" + ps + "(L^N/K," + r + ") holds for N = " + N.n_name + note;
        if (auto ab = get(abel_atom(n))) propose(quot_atom(p, n), "abelian-over-Q", qtext, {*ab});
        auto wh = get(wh_atom(p, n));
        if (wh && mx)
          propose(equiv_atom(p, n), "break-down",
                  "ETNC_" + ps + "(L/K," + r + ") <=> ETNC_" + ps + "(L^N/K," + r + ") for N = " + N.n_name, {*wh, *mx});
        if (auto eq = get(equiv_atom(p, n)))
          if (auto q = get(quot_atom(p, n))) propose(etnc_atom(p), "break-down", etnc_text, {*eq, *q});
      }
      frobenius_kernel_rule(p);
      dihedral_rules(p);
    }
  }

  void frobenius_kernel_rule(long ell) {
    if (ell == 0 || ell == 2 || !(s_.r < 0 && (-s_.r) % 2 == 1)) return;
    auto tr = get("HYP_totally_real");
    if (!tr) return;
    auto fs = frobenius_structure(*G_);
    if (!fs || !is_power_of_prime(fs->kernel.order(), ell)) return;
    for (std::size_t n = 0; n < normals_.size(); ++n) {
      if (!(normals_[n].N == fs->kernel)) continue;
      if (auto ab = get(abel_atom(n)))
        propose(etnc_atom(ell), "frobenius-l-kernel", "ETNC_" + std::to_string(ell) + "(L/K," + rs() + ") holds", {*tr, *ab});
    }
  }

  static bool is_power_of_prime(long n, long l) {
    if (n < l) return false;
    while (n % l == 0) n /= l;
    return n == 1;
  }

  void dihedral_rules(long p) {
    auto n = dihedral_odd_n();
    auto imag = get("HYP_imag");
    if (!n || !imag) return;
    const std::string ps = prime_text(p);
    const std::string note = prime_note(p);
    if (s_.r == 0) {
      if (auto h = class_number_ok(p)) propose(max_atom(p), "dihedral-max", "ETNC^max_" + ps + "(L/Q,0) holds" + note, {*imag, *h});
    } else if (s_.r < 0 && p != 0 && p != 2) {
      if (auto sp = get("HYP_split_" + ps)) propose(max_atom(p), "dihedral-max", "ETNC^max_" + ps + "(L/Q," + rs() + ") holds", {*imag, *sp});
    }
    if (p == 0 || p == 2 || *n % p != 0) return;
    auto mx = get(max_atom(p));
    auto sp = get("HYP_split_" + ps);
    if (!mx || !sp) return;
    std::vector<int> prem = {*mx, *imag, *sp};
    if (s_.r == 0) {
      auto h = class_number_ok(p);
      if (!h) return;
      prem.push_back(*h);
    }
    propose(etnc_atom(p), "dihedral-restriction", "ETNC_" + ps + "(L/Q," + rs() + ") holds", prem);
  }

  void epsilon_rules() {
    const bool local = s_.conjecture == "local-epsilon";
    const std::string name = local ? "LEC" : "GEC";
    for (long p : primes_) {
      if (local && p != s_.p) continue;
      const std::string ps = local ? "" : "_" + prime_text(p);
      const std::string note = local ? "" : prime_note(p);
      if (auto dt = get(dt_atom(p))) propose(etnc_atom(p), "epsilon-in-DT", name + ps + "(L/K) holds" + note, {*dt});
      for (std::size_t n = 0; n < normals_.size(); ++n)
        if (auto wh = get(wh_atom(p, n)))
          propose(equiv_atom(p, n), "epsilon-quotient", name + ps + "(L/K) <=> " + name + ps + "(L^N/K) for N = " + normals_[n].n_name, {*wh});
    }
  }
};

void collect(const std::vector<Derivation>& log, int id, std::set<std::string>& rules, std::set<std::string>& hyps) {
  const auto& d = log.at(static_cast<std::size_t>(id));
  rules.insert(d.rule);
  if (d.rule == "user-asserted") hyps.insert(d.conclusion);
  for (int p : d.premises) collect(log, p, rules, hyps);
}

std::string set_text(const std::vector<long>& ps) {
  std::string s = "{";
  for (std::size_t i = 0; i < ps.size(); ++i) s += (i ? ", " : "") + std::to_string(ps[i]);
  return s + "}";
}

}  // namespace

Scenario Scenario::from_json(const nlohmann::json& j) {
  static const std::set<std::string> keys = {"group", "conjecture", "r", "base", "totally_real", "asserted", "split_primes", "class_number_coprime", "p"};
  static const std::set<std::string> hyps = {"commutator-field-abelian", "quadratic-subfield-imaginary", "class-number-one"};
  if (!j.is_object()) throw std::invalid_argument("scenario must be a JSON object");
  for (const auto& [k, v] : j.items())
    if (!keys.count(k)) throw std::invalid_argument("unsupported scenario field: " + k);
  Scenario s;
  s.group = j.at("group").get<std::string>();
  s.conjecture = j.value("conjecture", "etnc");
  if (s.conjecture != "etnc" && s.conjecture != "local-epsilon" && s.conjecture != "global-epsilon")
    throw std::invalid_argument("unsupported conjecture: " + s.conjecture);
  s.r = j.value("r", 0L);
  if (s.conjecture == "etnc" && s.r > 0) throw std::invalid_argument("r must be 0 or negative");
  s.base = j.value("base", "any");
  if (s.base != "Q" && s.base != "any") throw std::invalid_argument("base must be \"Q\" or \"any\"");
  s.totally_real = j.value("totally_real", false);
  for (const auto& h : j.value("asserted", nlohmann::json::array())) {
    auto t = h.get<std::string>();
    if (!hyps.count(t)) throw std::invalid_argument("unsupported hypothesis: " + t);
    s.asserted.insert(t);
  }
  auto primes = [&](const char* key, std::set<long>& out) {
    for (const auto& v : j.value(key, nlohmann::json::array())) {
      long p = v.get<long>();
      if (!is_prime(p)) throw std::invalid_argument(std::string(key) + " must list primes");
      out.insert(p);
    }
  };
  primes("split_primes", s.split_primes);
  primes("class_number_coprime", s.class_number_coprime);
  s.p = j.value("p", 0L);
  if (s.conjecture == "local-epsilon" && !is_prime(s.p)) throw std::invalid_argument("local-epsilon needs a prime p");
  return s;
}

nlohmann::json Scenario::to_json() const {
  nlohmann::json j;
  j["group"] = group;
  j["conjecture"] = conjecture;
  j["r"] = r;
  j["base"] = base;
  j["totally_real"] = totally_real;
  j["asserted"] = std::vector<std::string>(asserted.begin(), asserted.end());
  j["split_primes"] = std::vector<long>(split_primes.begin(), split_primes.end());
  j["class_number_coprime"] = std::vector<long>(class_number_coprime.begin(), class_number_coprime.end());
  if (conjecture == "local-epsilon") j["p"] = p;
  return j;
}

std::vector<std::string> ConjectureReport::texts() const {
  std::vector<std::string> out;
  for (const auto& s : statements) out.push_back(s.text);
  return out;
}

nlohmann::json ConjectureReport::to_json() const {
  nlohmann::json j;
  j["scenario"] = scenario.to_json();
  j["group"] = group_name;
  j["statements"] = nlohmann::json::array();
  for (const auto& s : statements) {
    nlohmann::json st;
    st["statement"] = s.text;
    st["hypotheses"] = s.hypotheses;
    st["rules"] = s.rules;
    st["derivation"] = nlohmann::json::array();
    for (int id : s.support) st["derivation"].push_back(derivation_tree(log, id));
    j["statements"].push_back(st);
  }
  return j;
}

ConjectureReport conjecture_report(const Scenario& s, const FactBase& facts) {
  auto G = build_group(s.group);
  ReportEngine e(s, G, facts);
  e.run();
  ConjectureReport rep;
  rep.scenario = s;
  rep.group_name = G->spec().name();

  auto emit = [&](const std::string& text, std::vector<int> support) {
    ReportStatement st;
    st.text = text;
    st.support = std::move(support);
    std::set<std::string> rules, hyps;
    for (int id : st.support) collect(e.log(), id, rules, hyps);
    st.rules.assign(rules.begin(), rules.end());
    st.hypotheses.assign(hyps.begin(), hyps.end());
    rep.statements.push_back(st);
  };

  const std::string r = std::to_string(s.r);
  const bool epsilon = s.conjecture != "etnc";
  const std::string name = s.conjecture == "local-epsilon" ? "LEC" : s.conjecture == "global-epsilon" ? "GEC" : "ETNC";
  const std::string arg = epsilon ? "(L/K)" : "(L/K," + r + ")";

  if (!epsilon)
    if (auto ssc = e.get("SSC")) emit("SSC(L/K) holds", {*ssc});

  std::vector<long> holds, fails;
  std::vector<int> support;
  for (long p : e.primes()) {
    if (s.conjecture == "local-epsilon" && p != s.p) continue;
    if (auto id = e.get(ReportEngine::etnc_atom(p))) {
      if (p != 0) holds.push_back(p);
      support.push_back(*id);
    } else if (p != 0) {
      fails.push_back(p);
    }
  }
  const bool generic = s.conjecture != "local-epsilon" && e.get(ReportEngine::etnc_atom(0)).has_value();
  if (s.conjecture == "local-epsilon") {
    if (!holds.empty()) emit("LEC(L/K) holds", support);
  } else if (generic && fails.empty()) {
    emit(name + arg + " holds", support);
  } else if (generic) {
    emit(name + "_p" + arg + " holds for all primes p not in " + set_text(fails), support);
  } else if (!holds.empty()) {
    emit(name + "_p" + arg + " holds for p in " + set_text(holds), support);
  }

  // Reductions for primes where the conjecture itself was not reached.
  std::vector<std::pair<std::string, int>> reductions;
  for (long p : e.primes()) {
    if (p == 0 || e.get(ReportEngine::etnc_atom(p))) continue;
    if (s.conjecture == "local-epsilon" && p != s.p) continue;
    for (std::size_t n = 0; n < e.normals().size(); ++n) {
      auto eq = e.get(ReportEngine::equiv_atom(p, n));
      if (!eq) continue;
      const auto& N = e.normals()[n];
      const std::string ps = s.conjecture == "local-epsilon" ? "" : "_" + std::to_string(p);
      const std::string qarg = epsilon ? "(L^N/K)" : "(L^N/K," + r + ")";
      reductions.emplace_back(name + ps + arg + " <=> " + name + ps + qarg + " where N = " + N.n_name + " and Gal(L^N/K) = " + N.q_name, *eq);
    }
  }
  std::sort(reductions.begin(), reductions.end());
  for (const auto& [text, id] : reductions) emit(text, {id});
  rep.log = e.log();
  return rep;
}

}  // namespace holgr

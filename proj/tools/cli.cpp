#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "CLI11.hpp"
#include "criteria.hpp"
#include "holgr/dt.hpp"
#include "holgr/padic.hpp"
#include "holgr/reduced_norm.hpp"
#include "holgr/report.hpp"

namespace holgr::cli {

namespace {

constexpr int kSchemaVersion = 1;

struct Options {
  std::string group, family, generators;
  long n = 0, q = 0, p = 0;
  std::string normal = "commutator";
  std::string format = "text";
  std::uint64_t seed = verify::kDefaultSeed;
  long budget = 0;
  std::string matrix, x, scenario;
};

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

bool json_format(const Options& o) { return o.format == "json"; }

nlohmann::json envelope(const std::string& cmd) {
  nlohmann::json j;
  j["schema"] = "holgr." + cmd;
  j["version"] = kSchemaVersion;
  return j;
}

GroupSpec group_spec(const Options& o) {
  const int given = !o.group.empty() + !o.family.empty() + !o.generators.empty();
  if (given != 1) throw UsageError("give exactly one of --group, --family or --generators");
  if (!o.group.empty()) return GroupSpec::parse(o.group);
  if (!o.generators.empty()) return GroupSpec::from_json(nlohmann::json{{"generators", nlohmann::json::parse(o.generators)}});
  nlohmann::json j{{"family", o.family}};
  if (o.family == "cyclic" || o.family == "dihedral" || o.family == "symmetric" || o.family == "alternating") {
    if (o.n <= 0) throw UsageError("--family " + o.family + " needs --n");
    j["n"] = o.n;
  } else if (o.family == "affine") {
    if (o.q <= 0) throw UsageError("--family affine needs --q");
    j["q"] = o.q;
  } else if (o.family != "quaternion" && o.family != "frob72") {
    throw UsageError("--family must be cyclic, dihedral, symmetric, alternating, quaternion, affine or frob72; use --group for others");
  }
  return GroupSpec::from_json(j);
}

GroupPtr group_of(const Options& o) { return build_group(group_spec(o)); }

long prime_of(const Options& o) {
  if (o.p <= 0) throw UsageError("--p is required");
  if (!is_prime(o.p)) throw UsageError("--p must be prime");
  return o.p;
}

// JSON given inline or as a path to a file.
nlohmann::json json_arg(const std::string& v, const std::string& flag) {
  if (v.empty()) throw UsageError(flag + " is required");
  const auto first = v.find_first_not_of(" \t\n");
  if (first != std::string::npos && (v[first] == '{' || v[first] == '[')) return nlohmann::json::parse(v);
  std::ifstream in(v);
  if (!in) throw UsageError(flag + ": cannot read " + v);
  return nlohmann::json::parse(in);
}

void tree_text(std::ostream& out, const nlohmann::json& node, int depth) {
  if (node.is_array()) {
    for (const auto& n : node) tree_text(out, n, depth);
    return;
  }
  out << std::string(static_cast<std::size_t>(2 * depth), ' ') << "- " << node.at("conclusion").get<std::string>() << "  ["
      << node.at("rule").get<std::string>() << ": " << node.at("citation").get<std::string>() << "]\n";
  tree_text(out, node.at("premises"), depth + 1);
}

nlohmann::json block_records(const CharTable& t, const std::vector<PadicBlock>& blocks, const ConductorData& c) {
  auto out = nlohmann::json::array();
  for (const auto& b : blocks) {
    std::optional<long> exp;
    for (const auto& e : c.entries)
      if (e.block == b.id) exp = e.exponent;
    out.push_back(block_json(b, t, exp));
  }
  return out;
}

std::string yes(bool b) { return b ? "true" : "false"; }

// ---- subcommands ----

int cmd_chartab(const Options& o, std::ostream& out) {
  auto t = character_table(group_of(o));
  if (json_format(o)) {
    auto j = envelope("chartab");
    j["table"] = t.to_json();
    out << j.dump(2) << "\n";
    return 0;
  }
  const auto& cd = t.group->classes();
  out << "group: " << t.group->spec().name() << "\norder: " << t.group->order() << "\nmethod: " << t.method << "\n";
  out << "classes:";
  for (std::size_t c = 0; c < cd.count(); ++c) out << " " << cd.element_orders[c] << "^" << cd.sizes[c];
  out << "\n";
  for (std::size_t i = 0; i < t.count(); ++i) {
    out << "chi" << i + 1 << ":";
    for (const auto& v : t.chars[i].values) out << " " << v.to_string();
    out << "\n";
  }
  return 0;
}

int cmd_blocks(const Options& o, std::ostream& out) {
  auto t = character_table(group_of(o));
  const long p = prime_of(o);
  auto blocks = padic_blocks(t, p);
  if (json_format(o)) {
    auto j = envelope("blocks");
    j["group"] = t.group->spec().name();
    j["p"] = p;
    j["exponent_unit"] = "valuation in the prime of O_i";
    j["blocks"] = block_records(t, blocks, central_conductor(t, blocks));
    out << j.dump(2) << "\n";
    return 0;
  }
  out << "group: " << t.group->spec().name() << "\np: " << p << "\n";
  for (const auto& b : blocks) {
    out << "block " << b.id << ": characters";
    for (int c : b.orbit) out << " chi" << c + 1;
    out << ", n = " << b.n << ", f = " << b.field.f << ", e = " << b.field.e_ram << ", d = " << b.field.d
        << ", integral idempotent: " << yes(b.idempotent_integral) << "\n";
  }
  return 0;
}

int cmd_hybrid(const Options& o, std::ostream& out) {
  auto G = group_of(o);
  auto t = character_table(G);
  const long p = prime_of(o);
  auto N = select_normal(*G, o.normal);
  auto r = is_hybrid(t, N, p);
  if (json_format(o)) {
    auto j = envelope("hybrid");
    j["report"] = r.to_json();
    out << j.dump(2) << "\n";
    return 0;
  }
  out << "hybrid: " << yes(r.is_hybrid) << "\n";
  out << "group: " << r.group << "\nnormal subgroup order: " << r.normal_order << "\np: " << p << "\n";
  if (r.is_hybrid) out << "decomposition: " << r.quotient_order_desc << "\n";
  if (r.witness)
    out << "witness: chi" << r.witness->character + 1 << " of degree " << r.witness->degree << ", v_p(chi(1)) = " << r.witness->vp_degree
        << " < v_p(|G|) = " << r.witness->vp_order << "\n";
  out << "criterion: every character not trivial on N has p-defect zero\n";
  return 0;
}

int cmd_conductor(const Options& o, std::ostream& out) {
  auto t = character_table(group_of(o));
  const long p = prime_of(o);
  auto blocks = padic_blocks(t, p);
  auto c = central_conductor(t, blocks);
  if (json_format(o)) {
    auto j = envelope("conductor");
    j["group"] = t.group->spec().name();
    j["conductor"] = c.to_json(blocks);
    j["conductor"]["blocks"] = block_records(t, blocks, c);
    out << j.dump(2) << "\n";
    return 0;
  }
  out << "group: " << t.group->spec().name() << "\np: " << p << "\nmaximal: " << yes(c.maximal()) << "\n";
  for (const auto& e : c.entries)
    if (e.exponent > 0) out << "block " << e.block << ": conductor exponent " << e.exponent << "\n";
  return 0;
}

int cmd_nr(const Options& o, std::ostream& out) {
  auto t = character_table(group_of(o));
  auto H = mat_from_json(*t.group, json_arg(o.matrix, "--matrix"));
  auto nr = reduced_norm(t, H);
  if (json_format(o)) {
    auto j = envelope("nr");
    j["group"] = t.group->spec().name();
    j["n"] = H.n;
    j["nr"] = central_to_json(nr);
    j["nr_text"] = central_to_string(nr);
    out << j.dump(2) << "\n";
    return 0;
  }
  out << "nr: " << central_to_string(nr) << "\n";
  return 0;
}

int cmd_adjoint(const Options& o, std::ostream& out) {
  auto t = character_table(group_of(o));
  const auto& G = *t.group;
  auto H = mat_from_json(G, json_arg(o.matrix, "--matrix"));
  auto polys = reduced_char_polys(t, H);
  auto nr = reduced_norm_from(polys, H.n, t);
  auto Hs = generalized_adjoint(t, H, polys);
  auto nrI = mat_scalar(G, H.n, central_to_group_ring(t, nr));
  const bool identity = mat_equal(mat_mul(G, Hs, H), nrI) && mat_equal(mat_mul(G, H, Hs), nrI);
  const bool integral = entries_integral_over_z(t, Hs);
  if (json_format(o)) {
    auto j = envelope("adjoint");
    j["group"] = t.group->spec().name();
    j["adjoint"] = mat_to_json(Hs);
    j["nr"] = central_to_json(nr);
    j["nr_text"] = central_to_string(nr);
    j["identity_holds"] = identity;
    j["entries_integral"] = integral;
    out << j.dump(2) << "\n";
  } else {
    out << "nr: " << central_to_string(nr) << "\nidentity H*H = HH* = nr(H): " << yes(identity) << "\nentries integral: " << yes(integral)
        << "\nadjoint: " << mat_to_json(Hs).dump() << "\n";
  }
  return identity ? 0 : 1;
}

int cmd_denom_cert(const Options& o, std::ostream& out) {
  auto t = character_table(group_of(o));
  const long p = prime_of(o);
  auto x = central_from_json(t, json_arg(o.x, "--x"));
  const long budget = o.budget > 0 ? o.budget : 32;
  auto r = denominator_membership(t, x, p, budget, o.seed);
  if (json_format(o)) {
    auto j = envelope("denom-cert");
    j["group"] = t.group->spec().name();
    j["p"] = p;
    j["x"] = central_to_string(x);
    j["seed"] = o.seed;
    j["result"] = r.to_json();
    out << j.dump(2) << "\n";
    return 0;
  }
  out << "x: " << central_to_string(x) << "\nverdict: " << membership_name(r.verdict) << "\n";
  if (!r.certificate.empty()) out << "certificate: " << r.certificate << "\n";
  if (r.verdict != Membership::CertifiedIn) out << "samples: " << r.samples << " (sampling does not certify membership)\n";
  if (r.counterexample) out << "counterexample: " << mat_to_json(*r.counterexample).dump() << "\n";
  return 0;
}

int cmd_norm_ideal(const Options& o, std::ostream& out) {
  auto t = character_table(group_of(o));
  const long p = prime_of(o);
  const long budget = o.budget > 0 ? o.budget : static_cast<long>(t.count()) + 4;
  auto r = norm_ideal_probe(t, p, budget, o.seed);
  if (json_format(o)) {
    auto j = envelope("norm-ideal");
    j["group"] = t.group->spec().name();
    j["seed"] = o.seed;
    j["probe"] = r.to_json();
    out << j.dump(2) << "\n";
    return 0;
  }
  out << "group: " << t.group->spec().name() << "\np: " << p << "\nsamples: " << r.samples << "\nrank: " << r.rank << " of "
      << r.class_count << "\ninside maximal centre: " << yes(r.inside_maximal_center) << "\n";
  if (r.index_in_maximal_center) out << "index in maximal centre: p^" << *r.index_in_maximal_center << "\n";
  out << "equals maximal centre: " << yes(r.equals_maximal_center) << "\ncontains twice maximal centre: "
      << yes(r.contains_twice_maximal_center) << "\n";
  for (const auto& [name, in] : r.named_members) out << "contains " << name << ": " << yes(in) << "\n";
  if (!r.expected.empty()) out << "expected: " << r.expected << " (" << (r.expected_holds && *r.expected_holds ? "holds" : "fails") << ")\n";
  return 0;
}

int cmd_dt(const Options& o, std::ostream& out) {
  auto a = dt_query(group_of(o), prime_of(o));
  auto j = a.to_json();
  if (json_format(o)) {
    auto e = envelope("dt");
    e["answer"] = j;
    out << e.dump(2) << "\n";
    return 0;
  }
  out << "DT(Z_" << a.p << "[" << a.group << "]): " << a.assertion.to_string() << "\n";
  tree_text(out, j.at("derivation"), 1);
  return 0;
}

int cmd_report(const Options& o, std::ostream& out) {
  auto rep = conjecture_report(Scenario::from_json(json_arg(o.scenario, "--scenario")));
  auto j = rep.to_json();
  if (json_format(o)) {
    auto e = envelope("report");
    e["report"] = j;
    out << e.dump(2) << "\n";
    return 0;
  }
  out << "group: " << rep.group_name << "\n";
  if (rep.statements.empty()) out << "no statements derived\n";
  for (const auto& st : j.at("statements")) {
    out << "* " << st.at("statement").get<std::string>() << "\n";
    for (const auto& h : st.at("hypotheses")) out << "  assuming: " << h.get<std::string>() << "\n";
    tree_text(out, st.at("derivation"), 1);
  }
  return 0;
}

int cmd_verify(const Options& o, std::ostream& out, std::ostream& err) {
  const auto start = std::chrono::steady_clock::now();
  std::vector<verify::Section> sections;
  for (int k = 1; k <= 9; ++k) sections.push_back(verify::criterion(k, o.seed));
  sections.push_back(verify::paper_examples(o.seed));
  sections.push_back(verify::cli_examples([](const std::vector<std::string>& args) {
    std::ostringstream so, se;
    int code = run(args, so, se);
    return std::make_pair(code, so.str());
  }));
  const bool all = std::all_of(sections.begin(), sections.end(), [](const verify::Section& s) { return s.passed; });
  if (json_format(o)) {
    auto j = envelope("verify-paper");
    j["seed"] = o.seed;
    j["passed"] = all;
    j["sections"] = nlohmann::json::array();
    for (const auto& s : sections) j["sections"].push_back(s.to_json());
    out << j.dump(2) << "\n";
  } else {
    for (const auto& s : sections) {
      std::size_t ok = 0;
      for (const auto& c : s.checks) ok += c.passed ? 1 : 0;
      out << (s.passed ? "PASS" : "FAIL") << "  " << std::left << std::setw(9) << s.id << s.title << "  (" << ok << "/" << s.checks.size()
          << ", " << s.tolerance << ")\n";
      for (const auto& c : s.checks)
        out << "        " << (c.passed ? "ok   " : "FAIL ") << c.name << "  [" << c.citation << "]"
            << (c.detail.empty() ? "" : "  " + c.detail) << "\n";
    }
    out << (all ? "all checks passed" : "verification failed") << "\n";
  }
  err << "verify-paper: " << std::fixed << std::setprecision(1)
      << std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count() << " s\n";
  return all ? 0 : 1;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Hybrid group rings, reduced norms and DT deductions", "holgr"};
  app.require_subcommand(1);
  Options o;

  auto group_opts = [&](CLI::App* s) {
    s->add_option("--group", o.group, "Group descriptor, e.g. S4, D10, Aff(8), Q8, Frob72, C7:C3, Inv(3,3), S3xC2");
    s->add_option("--family", o.family, "cyclic | dihedral | symmetric | alternating | quaternion | affine | frob72");
    s->add_option("--n", o.n, "Family parameter: cyclic order, dihedral half order, symmetric or alternating degree");
    s->add_option("--q", o.q, "Field size for --family affine");
    s->add_option("--generators", o.generators, "JSON list of permutations as image lists, e.g. [[1,2,0],[1,0,2]]");
  };
  auto prime_opt = [&](CLI::App* s) { s->add_option("--p", o.p, "Prime"); };
  auto common = [&](CLI::App* s) {
    s->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"text", "json"}));
  };
  auto sampling = [&](CLI::App* s) {
    s->add_option("--seed", o.seed, "Master seed for random sampling (default 20240611)");
    s->add_option("--budget", o.budget, "Number of sampled matrices");
  };

  std::map<std::string, CLI::App*> subs;
  auto sub = [&](const std::string& name, const std::string& help) {
    auto* s = app.add_subcommand(name, help);
    common(s);
    subs[name] = s;
    return s;
  };
  group_opts(sub("chartab", "Character table"));
  auto* blocks = sub("blocks", "p-adic Wedderburn blocks of Q_p[G]");
  group_opts(blocks);
  prime_opt(blocks);
  auto* hybrid = sub("hybrid", "Is Z_p[G] N-hybrid?");
  group_opts(hybrid);
  prime_opt(hybrid);
  hybrid->add_option("--normal", o.normal, "Normal subgroup: commutator, kernel, trivial, whole or an order (default commutator)");
  auto* conductor = sub("conductor", "Central conductor of Z_p[G] in its maximal order");
  group_opts(conductor);
  prime_opt(conductor);
  auto* nr = sub("nr", "Reduced norm of a matrix over Q[G]");
  group_opts(nr);
  nr->add_option("--matrix", o.matrix, "JSON matrix (rows of {element id: rational}) or a file holding one");
  auto* adj = sub("adjoint", "Generalized adjoint H* with H*H = HH* = nr(H)");
  group_opts(adj);
  adj->add_option("--matrix", o.matrix, "JSON matrix (rows of {element id: rational}) or a file holding one");
  auto* denom = sub("denom-cert", "Membership of a central element in the denominator ideal");
  group_opts(denom);
  prime_opt(denom);
  sampling(denom);
  denom->add_option("--x", o.x, "Central element: value list, {\"idempotents\": {...}} or {\"group_ring\": {...}}");
  auto* ideal = sub("norm-ideal", "Probe of the ideal generated by reduced norms");
  group_opts(ideal);
  prime_opt(ideal);
  sampling(ideal);
  auto* dt = sub("dt", "DT(Z_p[G]) from the fact base");
  group_opts(dt);
  prime_opt(dt);
  auto* report = sub("report", "Conjecture report for a scenario");
  report->add_option("--scenario", o.scenario, "Scenario JSON or a file holding one");
  auto* verify = sub("verify-paper", "Run the full verification suite");
  verify->add_option("--seed", o.seed, "Master seed for random sampling (default 20240611)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    for (auto* s : app.get_subcommands())
      if (s->parsed()) {
        err << "error: " << e.what() << "\n" << s->help();
        return 2;
      }
    err << "error: " << e.what() << "\n" << app.help();
    return 2;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  try {
    if (name == "chartab") return cmd_chartab(o, out);
    if (name == "blocks") return cmd_blocks(o, out);
    if (name == "hybrid") return cmd_hybrid(o, out);
    if (name == "conductor") return cmd_conductor(o, out);
    if (name == "nr") return cmd_nr(o, out);
    if (name == "adjoint") return cmd_adjoint(o, out);
    if (name == "denom-cert") return cmd_denom_cert(o, out);
    if (name == "norm-ideal") return cmd_norm_ideal(o, out);
    if (name == "dt") return cmd_dt(o, out);
    if (name == "report") return cmd_report(o, out);
    if (name == "verify-paper") return cmd_verify(o, out, err);
  } catch (const std::invalid_argument& e) {  // also GroupError and UsageError
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const nlohmann::json::exception& e) {
    err << "error: malformed JSON: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "verification failure: " << e.what() << "\n";
    return 1;
  }
  err << "error: unknown subcommand " << name << "\n";
  return 2;
}

}  // namespace holgr::cli

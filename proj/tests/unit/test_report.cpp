#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <regex>

#include "holgr/report.hpp"

using namespace holgr;

namespace {

nlohmann::json load(const std::filesystem::path& p) {
  std::ifstream in(p);
  return nlohmann::json::parse(in);
}

std::vector<std::filesystem::path> golden_reports() {
  std::vector<std::filesystem::path> out;
  for (const auto& e : std::filesystem::directory_iterator(HOLGR_GOLDEN_DIR))
    if (e.path().filename().string().rfind("report_", 0) == 0) out.push_back(e.path());
  std::sort(out.begin(), out.end());
  return out;
}

void walk(const nlohmann::json& node, const std::function<void(const nlohmann::json&)>& f) {
  if (node.is_array()) {
    for (const auto& n : node) walk(n, f);
    return;
  }
  f(node);
  walk(node.at("premises"), f);
}

std::set<long> parse_set(const std::string& s) {
  std::set<long> out;
  std::regex num("[0-9]+");
  for (std::sregex_iterator it(s.begin(), s.end(), num), end; it != end; ++it) out.insert(std::stol(it->str()));
  return out;
}

// Whether the report proves the conjecture at prime p.
bool covers(const ConjectureReport& rep, long p) {
  static const std::regex all(R"(^ETNC\(L/K,-?[0-9]+\) holds$)");
  static const std::regex outside(R"(^ETNC_p\(L/K,-?[0-9]+\) holds for all primes p not in \{(.*)\}$)");
  static const std::regex inside(R"(^ETNC_p\(L/K,-?[0-9]+\) holds for p in \{(.*)\}$)");
  for (const auto& t : rep.texts()) {
    std::smatch m;
    if (std::regex_match(t, all)) return true;
    if (std::regex_match(t, m, outside)) return !parse_set(m[1].str()).count(p);
    if (std::regex_match(t, m, inside)) return parse_set(m[1].str()).count(p) > 0;
  }
  return false;
}

Scenario scenario(const std::string& text) { return Scenario::from_json(nlohmann::json::parse(text)); }

}  // namespace

TEST_CASE("reports match the golden files") {
  auto files = golden_reports();
  REQUIRE(files.size() >= 15);
  for (const auto& f : files) {
    CAPTURE(f.filename().string());
    auto g = load(f);
    auto rep = conjecture_report(Scenario::from_json(g.at("scenario")));
    const auto& want = g.at("statements");
    REQUIRE(rep.statements.size() == want.size());
    for (std::size_t i = 0; i < want.size(); ++i) {
      CHECK(rep.statements[i].text == want[i].at("text").get<std::string>());
      CHECK(rep.statements[i].rules == want[i].at("rules").get<std::vector<std::string>>());
      CHECK(rep.statements[i].hypotheses == want[i].at("hypotheses").get<std::vector<std::string>>());
    }
  }
}

TEST_CASE("citation chains resolve against the fact base") {
  const auto& fb = FactBase::builtin();
  for (const auto& f : golden_reports()) {
    auto rep = conjecture_report(Scenario::from_json(load(f).at("scenario")));
    auto j = rep.to_json();
    for (const auto& st : j.at("statements")) {
      std::set<std::string> leaves, rules;
      walk(st.at("derivation"), [&](const nlohmann::json& n) {
        const auto rule = n.at("rule").get<std::string>();
        rules.insert(rule);
        CHECK(n.at("citation").get<std::string>() == fb.citation(rule));
        if (rule == "user-asserted") {
          CHECK(n.at("premises").empty());
          leaves.insert(n.at("conclusion").get<std::string>());
        }
      });
      auto hyps = st.at("hypotheses").get<std::vector<std::string>>();
      CHECK(std::set<std::string>(hyps.begin(), hyps.end()) == leaves);
      auto listed = st.at("rules").get<std::vector<std::string>>();
      CHECK(std::set<std::string>(listed.begin(), listed.end()) == rules);
    }
  }
}

TEST_CASE("key theorem rules appear in the chains") {
  auto rules_of = [](const std::string& sc, std::size_t i) {
    auto rep = conjecture_report(scenario(sc));
    REQUIRE(rep.statements.size() > i);
    return rep.statements[i].rules;
  };
  auto has = [](const std::vector<std::string>& v, const std::string& r) {
    return std::find(v.begin(), v.end(), r) != v.end();
  };
  auto aff = rules_of(R"j({"group": "Aff(8)", "base": "Q"})j", 1);
  CHECK(has(aff, "break-down"));
  CHECK(has(aff, "hybrid-criterion"));
  auto s4 = rules_of(R"j({"group": "S4"})j", 2);
  CHECK(has(s4, "break-down"));
  auto d10 = rules_of(R"j({"group": "D10", "base": "Q", "asserted": ["quadratic-subfield-imaginary", "class-number-one"],
                          "split_primes": [5]})j",
                      0);
  CHECK(has(d10, "dihedral-restriction"));
  CHECK(has(d10, "fact:inversion-at-2"));
  auto frob = rules_of(R"j({"group": "Aff(5)", "base": "Q", "r": -1, "totally_real": true})j", 0);
  CHECK(has(frob, "frobenius-l-kernel"));
  auto s4neg = rules_of(R"j({"group": "S4", "base": "Q", "r": -1, "totally_real": true})j", 0);
  CHECK(has(s4neg, "quotient-field"));
}

TEST_CASE("scenario grammar") {
  auto s = scenario(R"j({"group": "D10", "base": "Q", "asserted": ["class-number-one"], "split_primes": [5, 11]})j");
  CHECK(Scenario::from_json(s.to_json()).to_json() == s.to_json());
  CHECK(s.conjecture == "etnc");
  CHECK(s.r == 0);
  for (const char* bad : {R"j([1, 2])j", R"j({"group": "S3", "colour": "red"})j", R"j({"group": "S3", "r": 1})j",
                          R"j({"group": "S3", "base": "R"})j", R"j({"group": "S3", "asserted": ["riemann-hypothesis"]})j",
                          R"j({"group": "S3", "split_primes": [4]})j", R"j({"group": "S3", "conjecture": "stark"})j",
                          R"j({"group": "S3", "conjecture": "local-epsilon"})j"}) {
    CAPTURE(bad);
    CHECK_THROWS_AS(Scenario::from_json(nlohmann::json::parse(bad)), std::invalid_argument);
  }
}

TEST_CASE("reports are deterministic") {
  auto sc = scenario(R"j({"group": "S4", "base": "Q", "r": -1, "totally_real": true})j");
  CHECK(conjecture_report(sc).to_json().dump() == conjecture_report(sc).to_json().dump());
}

TEST_CASE("hypotheses only strengthen a report") {
  const std::vector<std::string> groups = {"S3", "S4", "A4", "D10", "D14", "Aff(4)", "Aff(5)", "C7:C3", "Q8", "C6"};
  const std::vector<long> primes = {2, 3, 5, 7, 11, 13};
  for (const auto& g : groups) {
    for (long r : {0L, -1L}) {
      Scenario weak;
      weak.group = g;
      weak.r = r;
      Scenario strong = weak;
      strong.base = "Q";
      strong.totally_real = r < 0;
      strong.asserted = {"commutator-field-abelian", "quadratic-subfield-imaginary", "class-number-one"};
      strong.split_primes = {3, 5, 7};
      auto a = conjecture_report(weak);
      auto b = conjecture_report(strong);
      for (long p : primes) {
        CAPTURE(g);
        CAPTURE(r);
        CAPTURE(p);
        if (covers(a, p)) CHECK(covers(b, p));
      }
    }
  }
}

TEST_CASE("abelian groups over Q are fully covered") {
  for (const std::string g : {"C2", "C5", "C6", "C2xC2", "C12"}) {
    CAPTURE(g);
    Scenario s;
    s.group = g;
    s.base = "Q";
    auto rep = conjecture_report(s);
    for (long p : {2L, 3L, 5L, 7L}) CHECK(covers(rep, p));
  }
}

#include <doctest.h>

#include "holgr/dt.hpp"

using namespace holgr;

namespace {

const std::vector<std::string> kSweep = {"C2",     "C3",     "C4",     "C5",     "C6",    "C7",   "C8",    "D6",
                                         "D8",     "D10",    "D12",    "D14",    "S3",    "S4",   "A4",    "Q8",
                                         "Aff(3)", "Aff(4)", "Aff(5)", "Aff(7)", "Aff(8)", "Aff(9)", "Frob72", "V4",
                                         "C2xC4",  "Inv(3,3)", "C7:C3", "S3xC3",  "C3xA4"};

DTAssertion ask(const std::string& d, long p) { return dt_query(d, p).assertion; }

bool has_rule(const nlohmann::json& tree, const std::string& rule) {
  if (tree.is_array()) {
    for (const auto& t : tree)
      if (has_rule(t, rule)) return true;
    return false;
  }
  if (tree.at("rule").get<std::string>() == rule) return true;
  return has_rule(tree.at("premises"), rule);
}

}  // namespace

TEST_CASE("fact base loads with citations for every rule") {
  const auto& fb = FactBase::builtin();
  CHECK(fb.version() >= 1);
  CHECK(fb.facts().size() == 4);
  for (const auto& r : fb.rule_names()) CHECK_FALSE(fb.citation(r).empty());
  CHECK_THROWS_AS(fb.citation("no-such-rule"), InternalError);
  REQUIRE(fb.unknown().size() == 1);
  CHECK(fb.unknown()[0].at("group") == "Q8");
}

TEST_CASE("dt_query on the stated facts") {
  auto c5 = ask("C5", 5);
  CHECK(c5.kind == DTKind::Cyclic);
  CHECK(c5.k == 4);
  CHECK(c5.to_string() == "isomorphic-to-cyclic(4)");
  for (long p : {3L, 7L, 11L}) {
    auto a = ask("C" + std::to_string(p), p);
    CHECK(a.kind == DTKind::Cyclic);
    CHECK(a.k == p - 1);
  }
  CHECK(ask("C2", 2).kind == DTKind::Trivial);
  auto v4 = ask("C2xC2", 2);
  CHECK(v4.kind == DTKind::Order);
  CHECK(v4.k == 2);
  auto c4 = ask("C4", 2);
  CHECK(c4.kind == DTKind::Order);
  CHECK(c4.k == 2);
  for (int n : {3, 5, 7, 9, 15}) CHECK(ask("D" + std::to_string(2 * n), 2).kind == DTKind::Trivial);
  CHECK(ask("Inv(3,3)", 2).kind == DTKind::Trivial);
  CHECK(ask("Inv(5)", 2).kind == DTKind::Trivial);
  // p not dividing |G|.
  CHECK(ask("S4", 5).kind == DTKind::Trivial);
  CHECK(ask("Q8", 3).kind == DTKind::Trivial);
}

TEST_CASE("dt_query derivations cite the rules used") {
  auto d10 = dt_query("D10", 2);
  auto j = d10.to_json();
  CHECK(j["assertion"]["kind"] == "trivial");
  CHECK(has_rule(j["derivation"], "fact:inversion-at-2"));

  // S3 x C2 at 2: weakly C3-hybrid through the products lemma, so DT is DT(C2 x C2).
  auto d12 = dt_query("S3xC2", 2);
  CHECK(d12.assertion.kind == DTKind::Order);
  CHECK(d12.assertion.k == 2);
  auto jd = d12.to_json();
  CHECK(has_rule(jd["derivation"], "weak-hybrid-products"));
  CHECK(has_rule(jd["derivation"], "weakly-hybrid-quotient-iso"));
  CHECK(has_rule(jd["derivation"], "fact:v4-at-2"));
}

TEST_CASE("derived lower bounds") {
  // Q8 at 2 is left open, but its C2 x C2 quotient forces a nontrivial 2-part.
  auto q8 = ask("Q8", 2);
  CHECK(q8.kind == DTKind::PPartNontrivial);
  CHECK(std::find(q8.divisible_by.begin(), q8.divisible_by.end(), 2) != q8.divisible_by.end());
  // Restriction to C_5 inside D10 at 5.
  auto d10 = ask("D10", 5);
  CHECK(d10.kind == DTKind::Nontrivial);
  CHECK(std::find(d10.divisible_by.begin(), d10.divisible_by.end(), 4) != d10.divisible_by.end());
  // S4 at 3 is V4-hybrid, so DT(S4) = DT(S3) at 3, which surjects onto DT(C3) = C2.
  auto s4 = ask("S4", 3);
  CHECK(s4.kind == DTKind::Nontrivial);
  CHECK(std::find(s4.divisible_by.begin(), s4.divisible_by.end(), 2) != s4.divisible_by.end());
}

TEST_CASE("is_weakly_hybrid verdicts") {
  auto d12 = build_group("D12");
  auto v = is_weakly_hybrid(d12, select_normal(*d12, "3"), 2);
  CHECK(v.verdict == Tri::Yes);
  CHECK(has_rule(v.to_json()["derivation"], "weak-hybrid-products"));

  auto s3 = build_group("S3");
  auto h = is_weakly_hybrid(s3, commutator_subgroup(*s3), 2);
  CHECK(h.verdict == Tri::Yes);
  CHECK(has_rule(h.to_json()["derivation"], "hybrid-criterion"));

  auto c4 = build_group("C4");
  auto n = is_weakly_hybrid(c4, select_normal(*c4, "2"), 2);
  CHECK(n.verdict == Tri::No);
  CHECK(has_rule(n.to_json()["derivation"], "weakly-hybrid-coprime"));

  auto a4 = build_group("A4");
  CHECK(is_weakly_hybrid(a4, select_normal(*a4, "4"), 3).verdict == Tri::Yes);
  CHECK(is_weakly_hybrid(a4, trivial_subgroup(*a4), 2).verdict == Tri::Yes);

  auto s3s = build_group("S3");
  CHECK_THROWS_AS(is_weakly_hybrid(s3s, subgroup_generated(*s3s, {1}), 2), GroupError);
}

TEST_CASE("weakly hybrid verdicts left open or excluded") {
  // C6 at 3 by C2: only divisibility facts are derivable, which do not decide the question.
  auto c6 = build_group("C6");
  CHECK(is_weakly_hybrid(c6, select_normal(*c6, "2"), 3).verdict == Tri::Unknown);
  // C9 at 3 by C3 is excluded by coprimality.
  auto c9 = build_group("C9");
  CHECK(is_weakly_hybrid(c9, select_normal(*c9, "3"), 3).verdict == Tri::No);
}

TEST_CASE("hybrid implies weakly hybrid across the sweep") {
  for (const auto& d : {"S3", "A4", "S4", "Aff(5)", "Aff(8)", "D10", "Frob72"}) {
    auto G = build_group(d);
    auto t = character_table(G);
    for (const auto& N : normal_subgroups(*G))
      for (long p : {2L, 3L, 5L, 7L}) {
        if (!is_hybrid(t, N, p).is_hybrid) continue;
        CAPTURE(d);
        CAPTURE(p);
        CHECK(is_weakly_hybrid(G, N, p).verdict == Tri::Yes);
      }
  }
}

TEST_CASE("maximality consequences") {
  auto c3 = character_table(build_group("C3"));
  DTAssertion triv;
  triv.kind = DTKind::Trivial;
  CHECK_THROWS_AS(maximality_consequence(c3, 3, triv), InternalError);
  CHECK(ask("C3", 3).kind != DTKind::Trivial);

  auto s3 = character_table(build_group("S3"));
  auto m = maximality_consequence(s3, 2, ask("S3", 2));
  CHECK(m.consistent);
  CHECK_FALSE(m.group_ring_maximal);

  auto s4 = character_table(build_group("S4"));
  auto mm = maximality_consequence(s4, 5, ask("S4", 5));
  CHECK(mm.group_ring_maximal);
  CHECK(mm.consequence == "Z_p[G] is maximal, so DT is trivial");

  DTAssertion two;
  two.kind = DTKind::Order;
  two.k = 2;
  CHECK_NOTHROW(maximality_consequence(character_table(build_group("C4")), 2, two));
  CHECK_THROWS_AS(maximality_consequence(character_table(build_group("C9")), 3, [] {
                    DTAssertion a;
                    a.kind = DTKind::Order;
                    a.k = 3;
                    return a;
                  }()),
                  InternalError);
}

TEST_CASE("consistency sweep against maximality data") {
  for (const auto& d : kSweep) {
    auto G = build_group(d);
    auto t = character_table(G);
    for (long p : {2L, 3L, 5L, 7L}) {
      CAPTURE(d);
      CAPTURE(p);
      auto a = dt_query(G, p).assertion;
      CHECK_NOTHROW(maximality_consequence(t, p, a));
      if (a.kind == DTKind::Trivial && G->order() % p == 0) {
        CHECK(p == 2);
        CHECK(vp(G->order(), 2) == 1);
      }
    }
  }
}

TEST_CASE("surjectivity monotonicity across quotients") {
  for (const auto& d : kSweep) {
    auto G = build_group(d);
    for (long p : {2L, 3L}) {
      auto a = dt_query(G, p).assertion;
      for (const auto& N : normal_subgroups(*G)) {
        if (N.order() == 1 || N.order() == G->order()) continue;
        auto q = dt_query(quotient_group(*G, N).group, p).assertion;
        CAPTURE(d);
        CAPTURE(p);
        if (q.kind != DTKind::Trivial && q.kind != DTKind::Unknown) CHECK(a.kind != DTKind::Trivial);
        if (a.kind == DTKind::Trivial) CHECK((q.kind == DTKind::Trivial || q.kind == DTKind::Unknown));
      }
    }
  }
}

TEST_CASE("contradictory fact base is rejected") {
  auto j = nlohmann::json::parse(R"({
    "schema": "holgr.dt-facts", "version": 1,
    "facts": [
      {"id": "bad", "match": "isomorphic", "group": "C3", "p": 3, "assertion": {"kind": "trivial"}, "citation": "wrong"},
      {"id": "cyclic-prime", "match": "cyclic-of-order-p", "assertion": {"kind": "cyclic", "k": "p-1"}, "citation": "c"}
    ],
    "rules": [{"name": "maximal-order", "citation": "m"}, {"name": "group-order-facts", "citation": "g"},
              {"name": "quotient-surjective", "citation": "q"}, {"name": "restriction-surjective", "citation": "r"},
              {"name": "hybrid-criterion", "citation": "h"}, {"name": "hybrid-is-weakly-hybrid", "citation": "w"},
              {"name": "weakly-hybrid-quotient-iso", "citation": "i"}, {"name": "weakly-hybrid-coprime", "citation": "c"},
              {"name": "weak-hybrid-products", "citation": "p"}]
  })");
  auto fb = FactBase::from_json(j);
  CHECK_THROWS_AS(dt_query(build_group("C3"), 3, fb), InternalError);
  CHECK_THROWS_AS(FactBase::from_json(nlohmann::json::parse(R"({"schema": "x"})")), std::invalid_argument);
}

TEST_CASE("group recognition") {
  CHECK(recognise_group(*build_group("V4")) == "C2xC2");
  CHECK(recognise_group(*quotient_group(*build_group("S4"), select_normal(*build_group("S4"), "4")).group) == "S3");
  CHECK(isomorphic(*build_group("D6"), *build_group("S3")));
  CHECK_FALSE(isomorphic(*build_group("Q8"), *build_group("D8")));
  CHECK_FALSE(isomorphic(*build_group("C2xC4"), *build_group("C8")));
  CHECK(is_inversion_group(*build_group("D30")));
  CHECK(is_inversion_group(*build_group("C2")));
  CHECK_FALSE(is_inversion_group(*build_group("D8")));
  CHECK_FALSE(is_inversion_group(*build_group("C6")));
}

#include "conductor_oracle.hpp"
#include "doctest.h"
#include "holgr/wedderburn.hpp"

using namespace holgr;

namespace {

const std::vector<std::string> kCatalog = {"C2",     "C3",     "C4",    "C5",     "C6",       "C12",  "D8",   "D10",
                                           "D12",    "S3",     "S4",    "A4",     "Q8",       "A5",   "S5",   "Aff(3)",
                                           "Aff(4)", "Aff(5)", "Aff(7)", "Aff(8)", "Aff(9)", "Frob72", "Inv(3,3)", "C7:C3",
                                           "C3xA4",  "S3xC3",  "V4",    "C2xC4"};

CharTable table(const std::string& d) { return character_table(build_group(d)); }

// Conductor-discriminant oracle for Q_p(zeta_m) itself: sum of conductors of all characters of (Z/p^a)^x.
long cyclotomic_different(long p, long a) {
  // Characters of (Z/p^a)^x with conductor p^c: phi(p^c) - phi(p^(c-1)) of them (c >= 1; c = 1 needs p odd).
  long total = 0;
  auto phi_pp = [&](long c) {
    if (c == 0) return 1L;
    long v = p - 1;
    for (long i = 1; i < c; ++i) v *= p;
    return v;
  };
  for (long c = 1; c <= a; ++c) total += c * (phi_pp(c) - phi_pp(c - 1));
  return total;
}

}  // namespace

TEST_CASE("different valuation of cyclotomic fields") {
  for (long p : {2, 3, 5, 7}) {
    long pa = 1;
    for (long a = 1; a <= 3; ++a) {
      pa *= p;
      if (pa > 200) break;
      auto F = local_field_data(pa, p, {1});
      CHECK(F.e_ram == euler_phi(pa));
      CHECK(F.f == 1);
      CHECK(F.d == cyclotomic_different(p, a));
    }
  }
  CHECK(local_field_data(5, 5, {1}).d == 3);
  CHECK(local_field_data(4, 2, {1}).d == 2);
  // Unramified: Q_2(zeta_3) has f = 2 and no different.
  auto u = local_field_data(3, 2, {1});
  CHECK(u.f == 2);
  CHECK(u.e_ram == 1);
  CHECK(u.d == 0);
  // Whole group fixed: F = Q_p.
  std::vector<long> all;
  for (long k = 1; k < 8; k += 2) all.push_back(k);
  auto q = local_field_data(8, 2, all);
  CHECK(q.local_degree() == 1);
  CHECK(q.d == 0);
  // Q_2(sqrt 2) = fixed field of {1, 7} in Q_2(zeta_8): e = 2, d = 3.
  auto r = local_field_data(8, 2, {1, 7});
  CHECK(r.e_ram == 2);
  CHECK(r.d == 3);
}

TEST_CASE("padic blocks examples") {
  auto c2 = padic_blocks(table("C2"), 2);
  REQUIRE(c2.size() == 2);
  for (const auto& b : c2) CHECK(b.field.local_degree() == 1);
  auto c3 = padic_blocks(table("C3"), 2);
  REQUIRE(c3.size() == 2);
  CHECK(c3[1].orbit.size() == 2);
  CHECK(c3[1].field.f == 2);
  CHECK(c3[1].field.e_ram == 1);
  for (long q : {3, 4, 5, 7, 8, 9}) {
    auto t = table("Aff(" + std::to_string(q) + ")");
    for (long p : prime_divisors(t.group->order())) {
      if (q % p == 0) continue;
      for (const auto& b : padic_blocks(t, p))
        if (b.n == q - 1) {
          CHECK(b.orbit.size() == 1);
          CHECK(b.field.local_degree() == 1);
        }
    }
  }
}

TEST_CASE("blocks partition and equivalence consistency across the catalog") {
  for (const auto& d : kCatalog) {
    auto t = table(d);
    for (long p : {2, 3, 5, 7}) {
      auto blocks = padic_blocks(t, p);
      std::vector<int> seen(t.count(), 0);
      long s1 = 0, s2 = 0;
      for (const auto& b : blocks) {
        for (int c : b.orbit) ++seen[static_cast<std::size_t>(c)];
        s1 += static_cast<long>(b.orbit.size()) * b.n;
        CHECK(static_cast<long>(b.orbit.size()) == b.field.local_degree());
        auto cert = idempotent_integral(b, t);
        CHECK(cert.integral == b.idempotent_integral);
        if (cert.integral) {
          CHECK(cert.unramified);
          CHECK(cert.vanishes_on_p_singular);
          CHECK(b.schur_index == 1);
        }
      }
      for (const auto& c : t.chars) s2 += c.degree;
      CHECK(s1 == s2);
      CHECK(std::all_of(seen.begin(), seen.end(), [](int x) { return x == 1; }));
      auto cond = central_conductor(t, p);
      for (std::size_t i = 0; i < blocks.size(); ++i) {
        CHECK(cond.entries[i].exponent >= 0);
        CHECK((cond.entries[i].exponent == 0) == blocks[i].idempotent_integral);
      }
      if (t.group->order() % p != 0) CHECK(cond.maximal());
    }
  }
  // Unramified but not defect zero: the degree criterion is strictly stronger.
  auto c2 = padic_blocks(table("C2"), 2);
  CHECK(c2[0].field.e_ram == 1);
  CHECK(c2[0].field.d == 0);
  CHECK_FALSE(c2[0].idempotent_integral);
}

TEST_CASE("idempotent integrality examples") {
  auto s3 = table("S3");
  for (const auto& b : padic_blocks(s3, 2))
    if (b.n == 2) CHECK(idempotent_integral(b, s3).integral);
  auto a4 = table("A4");
  for (const auto& b : padic_blocks(a4, 3))
    if (b.n == 3) CHECK(idempotent_integral(b, a4).integral);
  auto c5 = table("C5");
  CHECK_FALSE(idempotent_integral(padic_blocks(c5, 5)[0], c5).integral);
}

TEST_CASE("hybrid verdicts") {
  auto check = [](const std::string& d, const std::string& sel, long p) {
    auto G = build_group(d);
    auto t = character_table(G);
    return is_hybrid(t, select_normal(*G, sel), p);
  };
  CHECK(check("S3", "commutator", 2).is_hybrid);
  CHECK(check("A4", "4", 3).is_hybrid);
  auto s4 = check("S4", "4", 3);
  CHECK(s4.is_hybrid);
  CHECK(s4.block_split.size() == 2);
  CHECK(s4.quotient_order_desc == "Z_3[G/N] (+) M_3x3(Z_3) (+) M_3x3(Z_3)");
  auto neg = check("C3xA4", "4", 3);
  CHECK_FALSE(neg.is_hybrid);
  REQUIRE(neg.witness);
  CHECK(neg.witness->degree == 3);
  CHECK(neg.witness->vp_degree == 1);
  CHECK(neg.witness->vp_order == 2);
  CHECK(check("Frob72", "kernel", 2).is_hybrid);
  for (long n = 3; n <= 15; n += 2) CHECK(check("D" + std::to_string(2 * n), "commutator", 2).is_hybrid);
  CHECK(check("Aff(4)", "commutator", 3).is_hybrid);
  CHECK_FALSE(check("Aff(4)", "commutator", 2).is_hybrid);
  auto S4 = build_group("S4");
  auto H = subgroup_generated(*S4, {1});
  CHECK_THROWS_AS(is_hybrid(character_table(S4), H, 2), GroupError);
}

TEST_CASE("hybrid properties") {
  // p does not divide |N| whenever hybrid.
  for (const auto& d : kCatalog) {
    auto G = build_group(d);
    auto t = character_table(G);
    for (const auto& N : normal_subgroups(*G))
      for (long p : prime_divisors(G->order())) {
        auto r = is_hybrid(t, N, p);
        if (r.is_hybrid) CHECK(N.order() % p != 0);
      }
  }
  // Frobenius groups are kernel-hybrid at every p dividing |G| but not |N|.
  for (const auto& d : {"D6", "D10", "D14", "A4", "Aff(3)", "Aff(5)", "Aff(7)", "Aff(8)", "Aff(9)", "Frob72", "Inv(3,3)", "C7:C3", "C13:C3"}) {
    auto G = build_group(d);
    auto fs = frobenius_structure(*G);
    REQUIRE(fs);
    auto t = character_table(G);
    for (long p : prime_divisors(G->order()))
      if (fs->kernel.order() % p != 0) CHECK_MESSAGE(is_hybrid(t, fs->kernel, p).is_hybrid, d);
  }
  // Adding a direct factor of order prime to p keeps the hybrid property.
  auto add = [](const std::string& d, const std::string& h, long nord, long p) {
    auto G = build_group(d + "x" + h);
    auto base = build_group(d);
    auto t = character_table(G);
    // N x 1 is the unique normal subgroup of that order inside the first factor's points.
    for (const auto& N : normal_subgroups(*G)) {
      if (N.order() != nord) continue;
      bool first = std::all_of(N.members.begin(), N.members.end(), [&](int x) {
        const auto& q = G->perm(x);
        for (int i = base->degree(); i < G->degree(); ++i)
          if (q[static_cast<std::size_t>(i)] != i) return false;
        return true;
      });
      if (first) return is_hybrid(t, N, p).is_hybrid;
    }
    return false;
  };
  CHECK(add("S3", "C3", 3, 2));
  CHECK(add("A4", "C2", 4, 3));
}

TEST_CASE("conductor against the lattice oracle") {
  for (auto [d, p] : std::vector<std::pair<std::string, long>>{{"C2", 2}, {"C3", 3}, {"C4", 2}, {"C5", 5}, {"C6", 2}, {"C6", 3}, {"C8", 2}, {"C9", 3}}) {
    auto t = table(d);
    auto blocks = padic_blocks(t, p);
    auto cond = central_conductor(t, blocks);
    auto ora = oracle::cyclic_exponents(*t.group, p);
    for (const auto& b : blocks) {
      // Order of the character = multiplicative order of its value on a generator.
      const auto& chi = t.chars[static_cast<std::size_t>(b.orbit[0])];
      int gen = t.group->generators()[0];
      long ord = 1;
      CycloNum v = chi.values[static_cast<std::size_t>(t.group->classes().class_of[static_cast<std::size_t>(gen)])], w = v;
      while (w != CycloNum(Rational(1))) {
        w *= v;
        ++ord;
      }
      CHECK_MESSAGE(cond.entries[static_cast<std::size_t>(b.id)].exponent == ora.at(ord), d << " p=" << p << " order " << ord);
    }
  }
  CHECK(oracle::cyclic_exponents(*build_group("C5"), 5).at(5) == 1);
  for (long p : {2, 3}) {
    auto t = table("S3");
    auto blocks = padic_blocks(t, p);
    auto cond = central_conductor(t, blocks);
    auto ora = oracle::s3_exponents(*t.group, p);
    for (const auto& b : blocks) {
      long want = b.n == 2 ? ora.two : (b.orbit[0] == 0 ? ora.trivial : ora.sign);
      CHECK(cond.entries[static_cast<std::size_t>(b.id)].exponent == want);
    }
  }
  auto s3 = central_conductor(table("S3"), 3);
  for (const auto& e : s3.entries) CHECK(e.exponent == 1);
}

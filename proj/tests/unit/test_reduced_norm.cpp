#include "doctest.h"
#include "holgr/padic.hpp"
#include "holgr/reduced_norm.hpp"
#include "regular_oracle.hpp"

using namespace holgr;

namespace {

CentralElement E(const CharTable& t, std::initializer_list<std::pair<int, long>> terms) {
  CentralElement x{std::vector<CycloNum>(t.count(), CycloNum(Rational(0)))};
  for (auto [i, c] : terms) x.values[static_cast<std::size_t>(i - 1)] = CycloNum(Rational(c));
  return x;
}

bool same(const CentralElement& a, const CentralElement& b) { return a.values == b.values; }

GroupRingMatrix one_by_one(const FiniteGroup& G, const GroupRingElem& a) { return mat_scalar(G, 1, a); }

int element_of_order_in(const FiniteGroup& G, long ord, const SubgroupHandle& N) {
  for (int x : N.members)
    if (G.element_order(x) == ord) return x;
  return -1;
}

}  // namespace

TEST_CASE("identity matrix") {
  auto t = character_table(build_group("S3"));
  for (long n = 1; n <= 3; ++n) {
    auto I = mat_identity(*t.group, n);
    for (const auto& p : reduced_char_polys(t, I)) {
      // (X - 1)^N
      const long N = p.degree();
      CHECK(N == t.chars[static_cast<std::size_t>(p.character)].degree * n);
      Integer b;
      for (long j = 0; j <= N; ++j) {
        mpz_bin_uiui(b.get_mpz_t(), static_cast<unsigned long>(N), static_cast<unsigned long>(j));
        Rational want = (N - j) % 2 ? Rational(-b) : Rational(b);
        CHECK(p.coeffs[static_cast<std::size_t>(j)] == CycloNum(want));
      }
    }
    CHECK(same(reduced_norm(t, I), central_one(t)));
    CHECK(mat_equal(generalized_adjoint(t, I), I));
  }
}

TEST_CASE("central idempotents") {
  for (const char* d : {"S3", "Q8", "C7:C3", "A4"}) {
    auto t = character_table(build_group(d));
    const auto& G = *t.group;
    for (std::size_t i = 0; i < t.count(); ++i)
      for (std::size_t j = 0; j < t.count(); ++j) {
        // e_i e_j = delta e_i computed in the group ring over Q(zeta) via the Galois orbit sums.
        auto ei = idempotent_of(t, {static_cast<int>(i)});
        auto ej = idempotent_of(t, {static_cast<int>(j)});
        auto prod = central_mul(ei, ej);
        CHECK(same(prod, i == j ? ei : idempotent_of(t, {})));
      }
    // A rational central element survives the round trip through the group ring.
    auto Gp = commutator_subgroup(G);
    auto eN = idempotent_of_normal(t, Gp);
    auto g = central_to_group_ring(t, eN);
    for (int x = 0; x < G.order(); ++x) CHECK(g[static_cast<std::size_t>(x)] == (Gp.contains(x) ? Rational(1, Gp.order()) : Rational(0)));
    CHECK(same(central_from_group_ring(t, g), eN));
    CHECK(gr_mul(G, g, g) == g);
  }
  auto c5 = character_table(build_group("C5"));
  CHECK_THROWS_AS(central_to_group_ring(c5, idempotent_of(c5, {1})), InternalError);
  CHECK_FALSE(is_galois_equivariant(c5, idempotent_of(c5, {1})));
  CHECK(is_galois_equivariant(c5, idempotent_of(c5, {1, 2, 3, 4})));
}

TEST_CASE("symmetric group identities") {
  auto t = character_table(build_group("S4"));
  const auto& G = *t.group;
  const auto& cd = G.classes();
  int tau = cd.representatives[1], sigma = cd.representatives[2];
  REQUIRE(G.element_order(tau) == 2);
  REQUIRE(G.element_order(sigma) == 3);
  auto one = gr_scalar(G, 1);
  GroupRingElem s = gr_add(gr_add(one, gr_basis(G, sigma)), gr_basis(G, G.mul(sigma, sigma)));
  CHECK(same(reduced_norm(t, one_by_one(G, gr_basis(G, tau))), E(t, {{1, 1}, {2, -1}, {3, -1}, {4, -1}, {5, 1}})));
  CHECK(same(reduced_norm(t, one_by_one(G, gr_scalar(G, -1))), E(t, {{1, -1}, {2, -1}, {3, 1}, {4, -1}, {5, -1}})));
  CHECK(same(reduced_norm(t, one_by_one(G, s)), E(t, {{1, 3}, {2, 3}})));
  CHECK(same(reduced_norm(t, one_by_one(G, gr_mul(G, gr_basis(G, tau), s))), E(t, {{1, 3}, {2, -3}})));
  CHECK(central_to_string(E(t, {{1, 1}, {2, -1}, {3, -1}, {4, -1}, {5, 1}})) == "e1 - e2 - e3 - e4 + e5");
}

TEST_CASE("affine group identities") {
  for (long q : {3, 4, 5, 7, 8, 9}) {
    auto t = character_table(build_group("Aff(" + std::to_string(q) + ")"));
    const auto& G = *t.group;
    auto Gp = commutator_subgroup(G);
    auto eG = idempotent_of_normal(t, Gp);
    auto enl = central_add(central_one(t), central_scale(eG, -1));
    if (q % 2 == 0) {
      int sigma = element_of_order_in(G, 2, Gp);
      REQUIRE(sigma > 0);
      auto nr = reduced_norm(t, one_by_one(G, gr_add(gr_scalar(G, 1), gr_basis(G, sigma))));
      CHECK(same(nr, central_scale(eG, 2)));
    } else {
      auto nr = reduced_norm(t, one_by_one(G, gr_scalar(G, -1)));
      CHECK(same(nr, central_add(central_scale(eG, -1), enl)));
    }
  }
}

TEST_CASE("regular representation determinant") {
  std::uint64_t seed = 11;
  for (const char* d : {"C4", "S3", "Q8", "D10", "C7:C3", "A4"}) {
    auto t = character_table(build_group(d));
    const auto& G = *t.group;
    for (long n = 1; n <= (G.order() <= 12 ? 2 : 1); ++n)
      for (int rep = 0; rep < 3; ++rep) {
        auto H = random_matrix(G, n, seed++);
        auto nr = reduced_norm(t, H);
        CycloNum prod(Rational(1));
        for (std::size_t i = 0; i < t.count(); ++i)
          for (long k = 0; k < t.chars[i].degree; ++k) prod *= nr.values[i];
        REQUIRE(prod.is_rational());
        CHECK_MESSAGE(prod.to_rational() == Rational(oracle::bareiss_det(oracle::regular_matrix(G, H))), d);
      }
  }
}

TEST_CASE("multiplicativity and Galois equivariance") {
  std::uint64_t seed = 500;
  for (const char* d : {"S3", "C5", "C7:C3", "Q8"}) {
    auto t = character_table(build_group(d));
    const auto& G = *t.group;
    for (long n = 1; n <= 2; ++n)
      for (int rep = 0; rep < 3; ++rep) {
        auto A = random_matrix(G, n, seed++), B = random_matrix(G, n, seed++);
        auto nA = reduced_norm(t, A), nB = reduced_norm(t, B);
        CHECK(same(reduced_norm(t, mat_mul(G, A, B)), central_mul(nA, nB)));
        CHECK(is_galois_equivariant(t, nA));
      }
  }
}

TEST_CASE("generalized adjoint identity and integrality") {
  std::uint64_t seed = 900;
  for (const char* d : {"S3", "Q8", "D10", "A4"}) {
    auto t = character_table(build_group(d));
    const auto& G = *t.group;
    for (long n = 1; n <= 3; ++n)
      for (int rep = 0; rep < (n == 3 ? 1 : 3); ++rep) {
        auto H = random_matrix(G, n, seed++);
        auto polys = reduced_char_polys(t, H);
        for (const auto& p : polys)
          for (const auto& c : p.coeffs) CHECK(c.is_algebraic_integer());
        auto nr = reduced_norm_from(polys, n, t);
        auto Hs = generalized_adjoint(t, H, polys);
        auto nrI = mat_scalar(G, n, central_to_group_ring(t, nr));
        CHECK(mat_equal(mat_mul(G, Hs, H), nrI));
        CHECK(mat_equal(mat_mul(G, H, Hs), nrI));
        CHECK(entries_integral_over_z(t, Hs));
      }
  }
  // A singular matrix has a zero reduced norm on some block.
  auto t = character_table(build_group("S3"));
  const auto& G = *t.group;
  GroupRingElem s = gr_zero(G);
  for (int x = 0; x < G.order(); ++x) s[static_cast<std::size_t>(x)] = 1;
  auto nr = reduced_norm(t, one_by_one(G, s));
  CHECK(nr.values[0] == CycloNum(Rational(6)));
  for (std::size_t i = 1; i < t.count(); ++i) CHECK(nr.values[i].is_zero());
}

TEST_CASE("p-adic valuations of cyclotomic elements") {
  for (long p : {2, 3, 5, 7}) {
    CHECK(*padic_model(p, p).valuation(CycloNum(Rational(p))) == p - 1);
    CHECK(*padic_model(p, p).valuation(CycloNum(Rational(1)) - CycloNum::zeta(p)) == 1);
    CHECK(*padic_model(p * p, p).valuation(CycloNum(Rational(1)) - CycloNum::zeta(p * p)) == 1);
    CHECK(*padic_model(p * p, p).valuation(CycloNum(Rational(1)) - CycloNum::zeta(p * p, p)) == p);
    CHECK(*padic_model(p, p).valuation(CycloNum(Rational(1, p))) == 1 - p);
  }
  CHECK(*padic_model(4, 2).valuation(CycloNum(Rational(2))) == 2);
  CHECK(*padic_model(3, 2).valuation(CycloNum(Rational(2))) == 1);
  CHECK(*padic_model(3, 2).valuation(CycloNum(Rational(1)) - CycloNum::zeta(3)) == 0);
  // Gaussian periods of Q(zeta_7) are the roots of X^2 + X + 2: one has valuation 1 at each prime above 2.
  CycloNum eta0 = CycloNum::zeta(7, 1) + CycloNum::zeta(7, 2) + CycloNum::zeta(7, 4);
  CycloNum eta1 = CycloNum::zeta(7, 3) + CycloNum::zeta(7, 5) + CycloNum::zeta(7, 6);
  long v0 = *padic_model(7, 2).valuation(eta0), v1 = *padic_model(7, 2).valuation(eta1);
  CHECK(v0 + v1 == 1);
  CHECK(v0 * v1 == 0);
  CHECK_FALSE(padic_model(7, 2).valuation(CycloNum(Rational(0))));
  // Sum over all conjugates equals the ramification index times the valuation of the norm.
  std::uint64_t state = 7;
  auto next = [&] {
    state = state * 6364136223846793005ULL + 1442695040888963407ULL;
    return static_cast<long>((state >> 33) % 9) - 4;
  };
  for (auto [m, p] : std::vector<std::pair<long, long>>{{12, 2}, {12, 3}, {20, 5}, {21, 7}, {24, 2}, {9, 3}, {15, 2}}) {
    const auto& model = padic_model(m, p);
    for (int rep = 0; rep < 8; ++rep) {
      std::vector<Rational> c(static_cast<std::size_t>(euler_phi(m)));
      for (auto& x : c) x = Rational(next(), rep % 2 ? 1 : p);
      CycloNum x = CycloNum::from_exponents(m, c);
      if (x.is_zero()) continue;
      long total = 0;
      for (long k = 1; k < m; ++k)
        if (gcd_l(k, m) == 1) total += *model.valuation(x.galois(k));
      CHECK(total == model.ramification() * *padic_valuation(oracle::field_norm(x), p));
    }
  }
}

TEST_CASE("denominator membership") {
  auto s3 = character_table(build_group("S3"));
  CHECK(denominator_membership(s3, central_one(s3), 2, 4, 1).verdict == Membership::CertifiedIn);
  auto s4 = character_table(build_group("S4"));
  auto cond = E(s4, {{1, 8}, {2, 8}, {3, 4}, {4, 8}, {5, 8}});
  auto r = denominator_membership(s4, cond, 2, 4, 1);
  CHECK(r.verdict == Membership::CertifiedIn);
  CHECK(r.certificate.find("conductor") != std::string::npos);
  // 4 e_{A4} is in the conductor of the A4-hybrid order but not in F_2(S4).
  auto hybrid = E(s4, {{1, 4}, {2, 4}});
  CHECK(denominator_membership(s4, hybrid, 2, 6, 3).verdict == Membership::SampledNoCounterexample);
  auto bad = denominator_membership(s4, E(s4, {{1, 2}}), 2, 6, 3);
  CHECK(bad.verdict == Membership::Counterexample);
  REQUIRE(bad.counterexample);
  CHECK_THROWS_AS(denominator_membership(s4, central_scale(central_one(s4), Rational(1, 2)), 2, 4, 1), std::invalid_argument);
}

TEST_CASE("norm ideal probe") {
  auto s4 = character_table(build_group("S4"));
  auto r = norm_ideal_probe(s4, 2, 9, 5);
  CHECK(r.rank == 5);
  CHECK(r.inside_maximal_center);
  CHECK(r.contains_twice_maximal_center);
  CHECK_FALSE(r.equals_maximal_center);
  REQUIRE(r.expected_holds);
  CHECK(*r.expected_holds);
  for (const auto& [name, in] : r.named_members) CHECK_MESSAGE(in, name);
  for (long q : {3, 5, 7, 9}) {
    auto t = character_table(build_group("Aff(" + std::to_string(q) + ")"));
    long ell = prime_power(q)->first;
    auto a = norm_ideal_probe(t, ell, static_cast<long>(t.count()) + 2, 7);
    CHECK_MESSAGE(a.equals_maximal_center, q);
    CHECK(a.named_members[0].first == "2e_{G'}");
    CHECK(a.named_members[0].second);
    REQUIRE(a.expected_holds);
    CHECK(*a.expected_holds);
  }
  auto c5 = character_table(build_group("C5"));
  auto u = norm_ideal_probe(c5, 2, 3, 1);
  CHECK(u.equals_group_ring_center);
  CHECK(u.equals_maximal_center);
  CHECK(u.maximal_over_group_ring == 0);
  CHECK_THROWS_AS(norm_ideal_probe(s4, 2, 1, 1), std::invalid_argument);
}

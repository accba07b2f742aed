#include <pencilzeta/errors.hpp>
#include <pencilzeta/expsum.hpp>
#include <pencilzeta/registry.hpp>
#include <pencilzeta/zeta.hpp>

#include <cstdint>
#include <vector>

#include "doctest.h"

using namespace pz;

namespace {

pencil_spec named_pencil(const std::string& name) {
  family_entry f = find_family(name);
  return make_pencil(f.matrix, f.coefficient, f.name);
}

// Independent slow oracle: count projective points of a fiber by counting
// affine-cone zeros with plain per-point monomial evaluation (fq::pow per
// exponent, no chart decomposition, no precomputed power tables beyond the
// field itself) and applying homogeneity #Y = (q - 1) N + 1.
unsigned long long slow_projective_count(const pencil_spec& pencil,
                                         const fq& f, fq::elem psi) {
  const fq_poly poly = fiber_polynomial(pencil, f, psi);
  const uint64_t q = f.q();
  const unsigned m = poly.nvars;
  std::vector<fq::elem> x(m, 0);
  unsigned long long zeros = 0;
  while (true) {
    fq::elem total = 0;
    for (const fq_term& t : poly.terms) {
      fq::elem v = t.coefficient;
      for (unsigned i = 0; i < m; ++i)
        v = f.mul(v, f.pow(x[i], t.exponents[i]));
      total = f.add(total, v);
    }
    if (total == 0) ++zeros;
    unsigned i = 0;
    while (i < m && x[i] == static_cast<fq::elem>(q - 1)) x[i++] = 0;
    if (i == m) break;
    ++x[i];
  }
  return (zeros - 1) / (q - 1);
}

// Independent second-order linear recurrence oracle for B_r through the
// Lucas-style trace sequence: if a^2 = b + 2q then a_s = a a_{s-1} - q
// a_{s-2} (a_0 = 2, a_1 = a) satisfies B_r = a_{2r}.
long long lucas_b(long long a, long long q, unsigned r) {
  long long prev = 2, cur = a;
  for (unsigned s = 2; s <= 2 * r; ++s) {
    long long next = a * cur - q * prev;
    prev = cur;
    cur = next;
  }
  return r == 0 ? 2 : cur;
}

}  // namespace

// ---------------------------------------------------------------------------
// Point counting.
// ---------------------------------------------------------------------------

TEST_CASE("fast counter agrees with the slow oracle on every small fiber") {
  for (const family_entry& fam : registry()) {
    pencil_spec pen = make_pencil(fam.matrix, fam.coefficient, fam.name);
    for (uint64_t p : {3, 5, 7}) {
      fq f = fq::make(p, 1);
      for (uint32_t psi = 0; psi < 3; ++psi) {
        CAPTURE(fam.name);
        CAPTURE(p);
        CAPTURE(psi);
        count_record fast = count_projective(pen, f, psi, 1);
        CHECK(fast.count == slow_projective_count(pen, f, psi));
      }
    }
  }
  // One extension field: F_9.
  fq f9 = fq::make(3, 2);
  for (const char* fam : {"F4", "L4", "C2F2"}) {
    pencil_spec pen = named_pencil(fam);
    for (uint32_t psi = 0; psi < 4; ++psi) {
      CAPTURE(fam);
      CAPTURE(psi);
      CHECK(count_projective(pen, f9, psi, 1).count ==
            slow_projective_count(pen, f9, psi));
    }
  }
}

TEST_CASE("projective and affine-cone counts satisfy homogeneity") {
  struct cell {
    const char* family;
    uint64_t p;
    uint32_t psi;
    unsigned long long projective;
    unsigned long long cone;
  };
  const cell cells[] = {
      {"F4", 5, 1, 16, 65},
      {"L2L2", 7, 2, 68, 409},
      {"C2F2", 5, 2, 22, 89},
  };
  for (const cell& c : cells) {
    CAPTURE(c.family);
    fq f = fq::make(c.p, 1);
    pencil_spec pen = named_pencil(c.family);
    CHECK(count_projective(pen, f, c.psi, 1).count == c.projective);
    CHECK(count_affine_cone(pen, f, c.psi, 1) == c.cone);
    CHECK((c.p - 1) * c.projective + 1 == c.cone);
  }
  // Homogeneity as a property over an extension level.
  fq f3 = fq::make(3, 1);
  pencil_spec pen = named_pencil("F1L3");
  unsigned long long n2 = count_projective(pen, f3, 2, 2).count;
  unsigned long long y2 = count_affine_cone(pen, f3, 2, 2);
  CHECK((9 - 1) * n2 + 1 == y2);
}

TEST_CASE("counts stay below the ambient projective space") {
  fq f5 = fq::make(5, 1);
  for (const family_entry& fam : registry()) {
    pencil_spec pen = make_pencil(fam.matrix, fam.coefficient, fam.name);
    unsigned long long ambient = 5 * 5 * 5 + 5 * 5 + 5 + 1;
    CHECK(count_projective(pen, f5, 2, 1).count < ambient);
  }
}

TEST_CASE("frozen tower over F_3 at the Fermat member") {
  fq f3 = fq::make(3, 1);
  pencil_spec pen = named_pencil("F4");
  CHECK(count_projective(pen, f3, 0, 1).count == 16);
  CHECK(count_projective(pen, f3, 0, 2).count == 280);
  CHECK(count_projective(pen, f3, 0, 3, 50'000'000ULL).count == 784);
  count_record rec = count_projective(pen, f3, 0, 1);
  CHECK(rec.family == "F4");
  CHECK(rec.q == 3);
  CHECK(rec.r == 1);
  CHECK(rec.psi == 0);
  CHECK(rec.seconds >= 0.0);
}

TEST_CASE("count budget is enforced before work starts") {
  fq f19 = fq::make(19, 1);
  pencil_spec pen = named_pencil("F4");
  bool caught = false;
  try {
    count_projective(pen, f19, 2, 2);  // 19^6-scale domain, default budget
  } catch (const error& e) {
    caught = true;
    CHECK(e.kind == errc::budget_exceeded);
  }
  CHECK(caught);
}

// ---------------------------------------------------------------------------
// The quadratic-factor trace sequence B_r.
// ---------------------------------------------------------------------------

TEST_CASE("B_r matches the Lucas oracle whenever b has elliptic-trace form") {
  for (long long q : {2, 3, 5, 7, 13}) {
    for (long long a = -5; a <= 5; ++a) {
      long long b = a * a - 2 * q;
      if (b < -2 * q || b > 2 * q) continue;
      for (unsigned r = 1; r <= 6; ++r) {
        CAPTURE(q);
        CAPTURE(a);
        CAPTURE(r);
        CHECK(frobenius_square_trace(b, q, r) == lucas_b(a, q, r));
      }
    }
  }
  // Supersingular poles of the window: B_r(2q) = 2 q^r and
  // B_r(-2q) = (-1)^r 2 q^r.
  CHECK(frobenius_square_trace(6, 3, 3) == 2 * 27);
  CHECK(frobenius_square_trace(-6, 3, 3) == -2 * 27);
  CHECK(frobenius_square_trace(-6, 3, 4) == 2 * 81);
}

TEST_CASE("B_r overflow is reported") {
  bool caught = false;
  try {
    frobenius_square_trace(2, 1ULL << 31, 6);
  } catch (const error& e) {
    caught = true;
    CHECK(e.kind == errc::too_large);
  }
  CHECK(caught);
}

// ---------------------------------------------------------------------------
// R-factor reconstruction.
// ---------------------------------------------------------------------------

TEST_CASE("frozen R-factor table at the Fermat member") {
  struct cell {
    uint64_t q;
    uint32_t psi;
    long long a_squared;
    long long b;
    r_factor_route route;
  };
  // psi = 0 is the classical CM fiber: over F_13 the curve y^2 = x^3 + x
  // has trace -6 from pi = 3 + 2i, so a^2 = 36 and b = pi^2 + conj(pi)^2
  // = 10.  The other entries were frozen from the two independent routes.
  const cell cells[] = {
      {3, 0, 0, -6, r_factor_route::fallback},
      {5, 0, 4, -6, r_factor_route::elliptic},
      {7, 0, 0, -14, r_factor_route::elliptic},
      {11, 0, 0, -22, r_factor_route::elliptic},
      {13, 0, 36, 10, r_factor_route::elliptic},
      {17, 0, 4, -30, r_factor_route::elliptic},
      {19, 0, 0, -38, r_factor_route::elliptic},
      {23, 0, 0, -46, r_factor_route::elliptic},
      {29, 0, 100, 42, r_factor_route::elliptic},
      {11, 2, 16, -6, r_factor_route::elliptic},
      {13, 2, 20, -6, r_factor_route::fallback},
  };
  family_entry fermat = find_family("F4");
  for (const cell& c : cells) {
    CAPTURE(c.q);
    CAPTURE(c.psi);
    fq f = fq::make(c.q, 1);
    r_factor_data rf = r_factor(fermat, f, c.psi, 20'000'000ULL);
    CHECK(rf.q == c.q);
    CHECK(rf.psi == c.psi);
    CHECK(rf.a_squared == c.a_squared);
    CHECK(rf.b == c.b);
    CHECK(rf.route == c.route);
  }
}

TEST_CASE("conjugate fibers: a^2 = b + 2q need not be a perfect square") {
  // At q = 13, psi^4 = 3 the j-invariant pair is irrational (discriminant 7
  // is a non-square mod 13): no curve of the pair descends to F_13, and the
  // unique count-admissible quadratic factor has b = -6, a^2 = 20.
  fq f13 = fq::make(13, 1);
  family_entry fermat = find_family("F4");
  r_factor_data rf = r_factor(fermat, f13, 2, 20'000'000ULL);
  CHECK(rf.route == r_factor_route::fallback);
  CHECK(rf.a_squared == 20);
  // Same mu = 256 psi^4, same factor at psi = 3.
  r_factor_data rf3 = r_factor(fermat, f13, 3, 20'000'000ULL);
  CHECK(rf3.b == rf.b);
  // q = 11 shows the same shape at psi = 5.
  fq f11 = fq::make(11, 1);
  r_factor_data rf5 = r_factor(fermat, f11, 5, 20'000'000ULL);
  CHECK(rf5.route == r_factor_route::fallback);
  CHECK(rf5.a_squared == 12);
  CHECK(rf5.b == -10);
}

TEST_CASE("the two routes agree when both apply") {
  family_entry fermat = find_family("F4");
  struct cell {
    uint64_t q;
    uint32_t psi;
  };
  // Elliptic-route cells re-run with the elliptic attempt disabled.
  const cell cells[] = {{11, 0}, {11, 2}, {11, 3}, {13, 0}, {13, 4}};
  for (const cell& c : cells) {
    CAPTURE(c.q);
    CAPTURE(c.psi);
    fq f = fq::make(c.q, 1);
    r_factor_data el = r_factor(fermat, f, c.psi, 20'000'000ULL);
    CHECK(el.route == r_factor_route::elliptic);
    r_factor_data fb = r_factor(fermat, f, c.psi, 20'000'000ULL, true);
    CHECK(fb.route == r_factor_route::fallback);
    CHECK(fb.b == el.b);
    CHECK(fb.a_squared == el.a_squared);
  }
}

TEST_CASE("all five shared-weight families reconstruct the same factor") {
  // Theorem-level check: R depends only on (psi, q), not the family.
  const char* families[] = {"F4", "F2L2", "F1L3", "L2L2", "L4"};
  fq f13 = fq::make(13, 1);
  for (const char* fam : families) {
    CAPTURE(fam);
    r_factor_data rf = r_factor(find_family(fam), f13, 2, 20'000'000ULL);
    CHECK(rf.a_squared == 20);
    CHECK(rf.b == -6);
  }
  fq f11 = fq::make(11, 1);
  for (const char* fam : families) {
    CAPTURE(fam);
    r_factor_data rf = r_factor(find_family(fam), f11, 2, 20'000'000ULL);
    CHECK(rf.a_squared == 16);
    CHECK(rf.route == r_factor_route::elliptic);
  }
}

TEST_CASE("supersingular tiebreak and honest ambiguity at the smallest prime") {
  // At q = 3 every admissible candidate is divisible by q, so divisibility
  // alone never separates them; the trace windows only bite when a value
  // reaches the boundary 18, and the square-realizability tiebreak settles
  // what remains.  Four of the five families resolve to b = -6 (the a = 0
  // supersingular pair; for L4 the level-4 trace sits exactly at the
  // boundary, which eliminates its impostors first); F1L3's windows stay
  // in the interior, so it is reported ambiguous rather than guessed.
  fq f3 = fq::make(3, 1);
  for (const char* fam : {"F4", "F2L2", "L2L2", "L4"}) {
    CAPTURE(fam);
    r_factor_data rf = r_factor(find_family(fam), f3, 0, 50'000'000ULL);
    CHECK(rf.b == -6);
    CHECK(rf.a_squared == 0);
    CHECK(rf.route == r_factor_route::fallback);
  }
  bool caught = false;
  try {
    r_factor(find_family("F1L3"), f3, 0, 50'000'000ULL);
  } catch (const error& e) {
    caught = true;
    CHECK(e.kind == errc::ambiguous_r_factor);
  }
  CHECK(caught);
}

TEST_CASE("R-factor over a genuine extension field") {
  // Over F_9 the Fermat fiber at psi = 0 is supersingular with all
  // eigenvalues equal to q: b = 2q = 18, a^2 = 36, and the mirror bound is
  // already met at r = 1.
  fq f9 = fq::make(3, 2);
  family_entry fermat = find_family("F4");
  r_factor_data rf = r_factor(fermat, f9, 0, 80'000'000ULL);
  CHECK(rf.q == 9);
  CHECK(rf.b == 18);
  CHECK(rf.a_squared == 36);
  r0_scan scan = find_r0(named_pencil("F4"), f9, 0, rf, 3, 80'000'000ULL);
  REQUIRE(scan.r0.has_value());
  CHECK(*scan.r0 == 1);
  CHECK(scan.traces == std::vector<long long>{18});
}

TEST_CASE("R-factor guards") {
  fq f13 = fq::make(13, 1);
  auto expect = [&](const char* family, const fq& f, uint32_t psi, errc kind) {
    bool caught = false;
    try {
      r_factor(find_family(family), f, psi);
    } catch (const error& e) {
      caught = true;
      CHECK(e.kind == kind);
    }
    CHECK(caught);
  };
  expect("C2F2", f13, 2, errc::unsupported);   // dual weights not all one
  expect("Dwork(2)", f13, 2, errc::unsupported);  // cubic, not quartic
  expect("F4", f13, 1, errc::bad_fiber);       // psi^4 = 1
  expect("F4", f13, 5, errc::bad_fiber);       // 5^4 = 1 mod 13
  fq f2 = fq::make(2, 1);
  expect("F4", f2, 1, errc::bad_prime);
  expect("F4", f13, 77, errc::invalid_argument);  // code outside the field
}

// ---------------------------------------------------------------------------
// Residual traces of the 18-dimensional factor.
// ---------------------------------------------------------------------------

TEST_CASE("residual traces at a frozen cell") {
  fq f13 = fq::make(13, 1);
  pencil_spec pen = named_pencil("F4");
  r_factor_data rf = r_factor(find_family("F4"), f13, 2, 20'000'000ULL);
  count_record n1 = count_projective(pen, f13, 2, 1);
  count_record n2 = count_projective(pen, f13, 2, 2, 20'000'000ULL);
  CHECK(n1.count == 320);
  CHECK(n2.count == 31640);
  std::vector<long long> t = residual_traces({n1, n2}, rf);
  CHECK(t == std::vector<long long>{10, 18});
}

TEST_CASE("trace defects are surfaced, never clamped") {
  fq f13 = fq::make(13, 1);
  pencil_spec pen = named_pencil("F4");
  r_factor_data rf = r_factor(find_family("F4"), f13, 2, 20'000'000ULL);
  count_record n1 = count_projective(pen, f13, 2, 1);

  count_record wrong_field = n1;
  wrong_field.q = 11;
  CHECK_THROWS_AS(residual_traces({wrong_field}, rf), error);
  count_record wrong_psi = n1;
  wrong_psi.psi = 3;
  CHECK_THROWS_AS(residual_traces({wrong_psi}, rf), error);

  count_record corrupt = n1;
  corrupt.count += 1;  // breaks divisibility by q
  bool caught = false;
  try {
    residual_traces({corrupt}, rf);
  } catch (const error& e) {
    caught = true;
    CHECK(e.kind == errc::non_integral_trace);
  }
  CHECK(caught);

  count_record outlier = n1;
  outlier.count = n1.count + 9 * 13;  // t_1 = 10 + 9 = 19 > 18
  caught = false;
  try {
    residual_traces({outlier}, rf);
  } catch (const error& e) {
    caught = true;
    CHECK(e.kind == errc::trace_bound);
  }
  CHECK(caught);
}

// ---------------------------------------------------------------------------
// Count congruences between families sharing dual weights.
// ---------------------------------------------------------------------------

TEST_CASE("the five shared-weight families agree mod q at every fiber") {
  std::vector<pencil_spec> five;
  for (const char* fam : {"F4", "F2L2", "F1L3", "L2L2", "L4"})
    five.push_back(named_pencil(fam));
  fq f11 = fq::make(11, 1);
  for (uint32_t psi = 0; psi < 11; ++psi) {
    CAPTURE(psi);
    comparison_matrix cm = compare_families(five, f11, psi, 1);
    CHECK(cm.modulus == 11);
    CHECK(cm.all_zero);
  }
  // Level 2: congruence mod q^2 = 121.
  comparison_matrix cm2 = compare_families(five, f11, 3, 2, 20'000'000ULL);
  CHECK(cm2.modulus == 121);
  CHECK(cm2.all_zero);
}

TEST_CASE("the chain pair and the all-ones trio also satisfy the congruence") {
  fq f11 = fq::make(11, 1);
  std::vector<pencil_spec> chains = {named_pencil("C2F2"),
                                     named_pencil("C2L2")};
  for (uint32_t psi = 0; psi < 11; ++psi) {
    CAPTURE(psi);
    CHECK(compare_families(chains, f11, psi, 1).all_zero);
  }
  // KM(3), Dwork(3) and the Fermat quartic share dual weights (1,1,1,1).
  std::vector<pencil_spec> trio = {named_pencil("F4"), named_pencil("KM(3)"),
                                   named_pencil("Dwork(3)")};
  for (uint64_t q : {11, 13}) {
    fq f = fq::make(q, 1);
    for (uint32_t psi = 0; psi < q; ++psi) {
      CAPTURE(q);
      CAPTURE(psi);
      CHECK(compare_families(trio, f, psi, 1).all_zero);
    }
  }
  // Deformation coefficient dies at p = 3 for the chains (3 divides 12);
  // the congruence still holds on the undeformed fibers.
  fq f3 = fq::make(3, 1);
  for (uint32_t psi = 0; psi < 3; ++psi) {
    comparison_matrix cm = compare_families(chains, f3, psi, 1);
    CHECK(cm.counts[0].count == 10);
    CHECK(cm.counts[1].count == 16);
    CHECK(cm.all_zero);
  }
}

TEST_CASE("mixed dual weights are rejected and self-comparison is zero") {
  fq f11 = fq::make(11, 1);
  std::vector<pencil_spec> mixed = {named_pencil("F4"), named_pencil("C2F2")};
  CHECK_THROWS_AS(compare_families(mixed, f11, 2, 1), error);
  std::vector<pencil_spec> self = {named_pencil("L4")};
  comparison_matrix cm = compare_families(self, f11, 2, 1);
  CHECK(cm.all_zero);
  CHECK(cm.residues.size() == 1);
  CHECK(cm.residues[0][0] == 0);
  CHECK_THROWS_AS(compare_families({}, f11, 2, 1), error);
}

// ---------------------------------------------------------------------------
// Ordinarity.
// ---------------------------------------------------------------------------

TEST_CASE("ordinarity verdicts at frozen fibers") {
  family_entry fermat = find_family("F4");
  pencil_spec pen = named_pencil("F4");
  struct cell {
    uint64_t q;
    uint32_t psi;
    bool ordinary;
  };
  // Supersingular exactly when the unit root is missing: the classical CM
  // fibers psi = 0 at q = 3 mod 4 are supersingular, q = 1 mod 4 ordinary.
  const cell cells[] = {
      {11, 0, false}, {19, 0, false}, {13, 0, true},
      {13, 2, true},  {11, 2, true},  {17, 0, true},
  };
  for (const cell& c : cells) {
    CAPTURE(c.q);
    CAPTURE(c.psi);
    fq f = fq::make(c.q, 1);
    CHECK(ordinary_test(pen, f, c.psi) == c.ordinary);
    // Cross-check against p | a on the elliptic side where R resolves.
    r_factor_data rf = r_factor(fermat, f, c.psi, 20'000'000ULL);
    bool a_unit = (rf.b % static_cast<long long>(c.q)) != 0
                      ? true
                      : (rf.a_squared % static_cast<long long>(c.q)) != 0;
    CHECK(a_unit == c.ordinary);
  }
}

TEST_CASE("ordinarity verdict is shared by the five families") {
  std::vector<pencil_spec> five;
  for (const char* fam : {"F4", "F2L2", "F1L3", "L2L2", "L4"})
    five.push_back(named_pencil(fam));
  for (uint64_t q : {11, 13}) {
    fq f = fq::make(q, 1);
    for (uint32_t psi = 0; psi < q; ++psi) {
      if (f.pow(psi, 4) == f.from_int(1)) continue;
      bool first = ordinary_test(five[0], f, psi);
      for (size_t i = 1; i < five.size(); ++i) {
        CAPTURE(q);
        CAPTURE(psi);
        CAPTURE(i);
        CHECK(ordinary_test(five[i], f, psi) == first);
      }
    }
  }
}

// ---------------------------------------------------------------------------
// Mirror counts and the r_0 search.
// ---------------------------------------------------------------------------

TEST_CASE("mirror model count matches the closed form") {
  fq f13 = fq::make(13, 1);
  r_factor_data rf = r_factor(find_family("F4"), f13, 2, 20'000'000ULL);
  // 1 + 20 q + q^2 + B_1, B_1 = b.
  CHECK(mirror_count(rf, 1) == 1 + 20 * 13 + 169 + rf.b);
  CHECK(mirror_count(rf, 2) ==
        1 + 20 * 169 + 169 * 169 + frobenius_square_trace(rf.b, 13, 2));
}

TEST_CASE("r_0 search at the smallest supersingular fiber") {
  fq f3 = fq::make(3, 1);
  pencil_spec pen = named_pencil("F4");
  r_factor_data rf = r_factor(find_family("F4"), f3, 0, 50'000'000ULL);
  r0_scan scan = find_r0(pen, f3, 0, rf, 6, 50'000'000ULL);
  REQUIRE(scan.r0.has_value());
  CHECK(*scan.r0 == 2);
  CHECK(scan.traces == std::vector<long long>{2, 18});
  CHECK(scan.counts.size() == 2);
  CHECK(scan.counts[0].count == 16);
  CHECK(scan.counts[1].count == 280);
  CHECK(scan.mirror_counts == std::vector<long long>{64, 280});
  // The defining property: at r = r_0 the count equals the mirror count
  // exactly, not merely mod q^r.
  CHECK(scan.counts[1].count ==
        static_cast<unsigned long long>(scan.mirror_counts[1]));
}

TEST_CASE("r_0 search respects its horizon") {
  fq f3 = fq::make(3, 1);
  pencil_spec pen = named_pencil("F4");
  r_factor_data rf = r_factor(find_family("F4"), f3, 0, 50'000'000ULL);
  r0_scan one = find_r0(pen, f3, 0, rf, 1, 50'000'000ULL);
  CHECK(!one.r0.has_value());
  CHECK(one.traces == std::vector<long long>{2});
  r0_scan zero = find_r0(pen, f3, 0, rf, 0, 50'000'000ULL);
  CHECK(!zero.r0.has_value());
  CHECK(zero.counts.empty());
  CHECK(zero.traces.empty());
}

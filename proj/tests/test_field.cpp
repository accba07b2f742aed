#include <pencilzeta/errors.hpp>
#include <pencilzeta/field.hpp>

#include <set>
#include <vector>

#include "doctest.h"

using namespace pz;

TEST_CASE("prime field basics") {
  fq f = fq::make(3, 1);
  CHECK(f.q() == 3);
  CHECK(f.modulus() == std::vector<uint32_t>{0, 1});  // modulus x for r = 1
  CHECK(f.add(1, 2) == 0);
  CHECK(f.mul(2, 2) == 1);
  CHECK(f.inv(2) == 2);
  CHECK(f.absolute_trace(2) == 2);  // identity on the prime field
}

TEST_CASE("composite characteristic is rejected") {
  CHECK_THROWS_AS(fq::make(4, 1), error);
  CHECK_THROWS_AS(fq::make(1, 1), error);
}

TEST_CASE("F9 uses modulus x^2+1 and has trace zero at sqrt(-1)") {
  fq f = fq::make(3, 2);
  CHECK(f.q() == 9);
  // Lexicographically smallest monic irreducible over F_3: x^2 + 1.
  CHECK(f.modulus() == std::vector<uint32_t>{1, 0, 1});
  // alpha = x has alpha^2 = -1, so alpha + alpha^3 = alpha - alpha = 0.
  fq::elem alpha = f.from_coeffs({0, 1});
  CHECK(f.mul(alpha, alpha) == f.from_int(-1));
  CHECK(f.absolute_trace(alpha) == 0);
  // Trace of 1 is r mod p = 2.
  CHECK(f.absolute_trace(1) == 2);
}

TEST_CASE("enumeration covers every element exactly once") {
  for (auto [p, r] : std::vector<std::pair<uint64_t, uint32_t>>{
           {2, 4}, {3, 2}, {5, 2}, {7, 1}, {11, 1}}) {
    fq f = fq::make(p, r);
    std::set<fq::elem> seen;
    for (fq::elem a = 0; a < f.q(); ++a) seen.insert(a);
    CHECK(seen.size() == f.q());
  }
}

TEST_CASE("field axioms and Frobenius additivity on full small fields") {
  for (auto [p, r] : std::vector<std::pair<uint64_t, uint32_t>>{
           {2, 3}, {3, 2}, {5, 1}, {7, 1}, {13, 1}, {3, 3}}) {
    fq f = fq::make(p, r);
    for (fq::elem a = 0; a < f.q(); ++a) {
      CHECK(f.add(a, f.neg(a)) == 0);
      CHECK(f.pow(a, f.q()) == a);  // x^q = x
      if (a != 0) CHECK(f.mul(a, f.inv(a)) == 1);
      for (fq::elem b = 0; b < f.q(); ++b) {
        CHECK(f.frobenius(f.add(a, b)) ==
              f.add(f.frobenius(a), f.frobenius(b)));
        CHECK(f.mul(a, b) == f.mul(b, a));
      }
    }
  }
}

TEST_CASE("generator has full multiplicative order") {
  for (auto [p, r] : std::vector<std::pair<uint64_t, uint32_t>>{
           {3, 2}, {5, 2}, {2, 5}, {17, 1}}) {
    fq f = fq::make(p, r);
    std::set<fq::elem> powers;
    fq::elem x = 1;
    for (uint64_t i = 0; i + 1 < f.q(); ++i) {
      powers.insert(x);
      x = f.mul(x, f.generator());
    }
    CHECK(powers.size() == f.q() - 1);
    CHECK(x == 1);
  }
}

TEST_CASE("trace is F_p-linear and surjective") {
  fq f = fq::make(5, 2);
  std::set<uint32_t> image;
  for (fq::elem a = 0; a < f.q(); ++a) {
    image.insert(f.absolute_trace(a));
    for (fq::elem b = 0; b < f.q(); ++b) {
      uint32_t lhs = f.absolute_trace(f.add(a, b));
      uint32_t rhs = (f.absolute_trace(a) + f.absolute_trace(b)) % f.p();
      CHECK(lhs == rhs);
    }
  }
  CHECK(image.size() == f.p());
}

TEST_CASE("squares and square roots") {
  for (auto [p, r] : std::vector<std::pair<uint64_t, uint32_t>>{
           {3, 2}, {7, 1}, {13, 1}, {2, 4}}) {
    fq f = fq::make(p, r);
    size_t square_count = 0;
    for (fq::elem a = 1; a < f.q(); ++a) {
      if (!f.is_square(a)) {
        CHECK(f.sqrt(a) == f.q());
        continue;
      }
      ++square_count;
      fq::elem s = f.sqrt(a);
      REQUIRE(s != f.q());
      CHECK(f.mul(s, s) == a);
    }
    size_t expected = (p == 2) ? f.q() - 1 : (f.q() - 1) / 2;
    CHECK(square_count == expected);
  }
}

TEST_CASE("tables agree with generic arithmetic") {
  fq fast = fq::make(3, 4);                  // 81 elements, tables on
  fq slow = fq::make(3, 4, /*table_limit=*/1);  // same field, generic path
  REQUIRE(fast.has_tables());
  REQUIRE(!slow.has_tables());
  REQUIRE(fast.modulus() == slow.modulus());
  for (fq::elem a = 0; a < fast.q(); ++a)
    for (fq::elem b = 0; b < fast.q(); ++b) {
      CHECK(fast.add(a, b) == slow.add(a, b));
      CHECK(fast.mul(a, b) == slow.mul(a, b));
    }
}

TEST_CASE("subfield embedding is a ring homomorphism") {
  fq sub = fq::make(3, 2);
  fq big = fq::make(3, 4);
  auto img = fq::embedding(sub, big);
  REQUIRE(img.size() == sub.q());
  CHECK(img[0] == 0);
  CHECK(img[1] == 1);
  for (fq::elem a = 0; a < sub.q(); ++a)
    for (fq::elem b = 0; b < sub.q(); ++b) {
      CHECK(img[sub.add(a, b)] == big.add(img[a], img[b]));
      CHECK(img[sub.mul(a, b)] == big.mul(img[a], img[b]));
    }
  // The embedded image is exactly the fixed field of Frobenius^2.
  for (fq::elem a = 0; a < sub.q(); ++a)
    CHECK(big.frobenius(big.frobenius(img[a])) == img[a]);
}

TEST_CASE("trace tower consistency via embedding") {
  fq sub = fq::make(2, 2);
  fq big = fq::make(2, 4);
  auto img = fq::embedding(sub, big);
  // Trace from F_16 restricted to embedded F_4 equals 2 * trace of F_4,
  // which vanishes in characteristic 2.
  for (fq::elem a = 0; a < sub.q(); ++a)
    CHECK(big.absolute_trace(img[a]) == 0);
}

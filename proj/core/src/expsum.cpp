#include <pencilzeta/expsum.hpp>

#include <pencilzeta/errors.hpp>
#include <pencilzeta/zeta.hpp>

#include "poly_eval.hpp"

#include <algorithm>
#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace pz {

namespace {

long long checked_add(long long a, long long b) {
  long long out = 0;
  if (__builtin_add_overflow(a, b, &out))
    fail(errc::too_large, "cyclotomic coordinate overflow");
  return out;
}

long long checked_sub(long long a, long long b) {
  long long out = 0;
  if (__builtin_sub_overflow(a, b, &out))
    fail(errc::too_large, "cyclotomic coordinate overflow");
  return out;
}

long long checked_mul(long long a, long long b) {
  long long out = 0;
  if (__builtin_mul_overflow(a, b, &out))
    fail(errc::too_large, "cyclotomic coordinate overflow");
  return out;
}

void require_prime_at_least_two(uint64_t p) {
  if (p < 2) fail(errc::invalid_argument, "cyclotomic order must be a prime >= 2");
  for (uint64_t d = 2; d * d <= p; ++d)
    if (p % d == 0) fail(errc::not_prime, "cyclotomic order must be prime");
}

}  // namespace

cyclotomic_integer::cyclotomic_integer(uint64_t p) : p_(p) {
  require_prime_at_least_two(p);
  coords_.assign(p - 1, 0);
}

cyclotomic_integer cyclotomic_integer::root_power(uint64_t p, uint64_t k) {
  cyclotomic_integer out(p);
  k %= p;
  if (k == p - 1) {
    // zeta^{p-1} = -(1 + zeta + ... + zeta^{p-2})
    for (long long& c : out.coords_) c = -1;
  } else {
    out.coords_[k] = 1;
  }
  return out;
}

cyclotomic_integer cyclotomic_integer::integer(uint64_t p, long long n) {
  cyclotomic_integer out(p);
  out.coords_[0] = n;
  return out;
}

cyclotomic_integer& cyclotomic_integer::operator+=(const cyclotomic_integer& o) {
  if (p_ != o.p_) fail(errc::invalid_argument, "mixed cyclotomic orders");
  for (size_t i = 0; i < coords_.size(); ++i)
    coords_[i] = checked_add(coords_[i], o.coords_[i]);
  return *this;
}

cyclotomic_integer& cyclotomic_integer::operator-=(const cyclotomic_integer& o) {
  if (p_ != o.p_) fail(errc::invalid_argument, "mixed cyclotomic orders");
  for (size_t i = 0; i < coords_.size(); ++i)
    coords_[i] = checked_sub(coords_[i], o.coords_[i]);
  return *this;
}

cyclotomic_integer cyclotomic_integer::operator*(
    const cyclotomic_integer& o) const {
  if (p_ != o.p_) fail(errc::invalid_argument, "mixed cyclotomic orders");
  // Accumulate on the redundant basis 1, zeta, ..., zeta^{p-1}, then fold
  // the last slot back through 1 + zeta + ... + zeta^{p-1} = 0.
  std::vector<long long> acc(p_, 0);
  for (size_t i = 0; i < coords_.size(); ++i) {
    if (coords_[i] == 0) continue;
    for (size_t j = 0; j < o.coords_.size(); ++j) {
      if (o.coords_[j] == 0) continue;
      const size_t k = (i + j) % p_;
      acc[k] = checked_add(acc[k], checked_mul(coords_[i], o.coords_[j]));
    }
  }
  cyclotomic_integer out(p_);
  for (size_t i = 0; i + 1 < p_; ++i)
    out.coords_[i] = checked_sub(acc[i], acc[p_ - 1]);
  return out;
}

bool cyclotomic_integer::operator==(const cyclotomic_integer& o) const {
  return p_ == o.p_ && coords_ == o.coords_;
}

bool cyclotomic_integer::is_zero() const {
  return std::all_of(coords_.begin(), coords_.end(),
                     [](long long c) { return c == 0; });
}

bool cyclotomic_integer::is_integer() const {
  return std::all_of(coords_.begin() + 1, coords_.end(),
                     [](long long c) { return c == 0; });
}

long long cyclotomic_integer::as_integer() const {
  if (!is_integer())
    fail(errc::invalid_argument, "cyclotomic element is not a rational integer");
  return coords_[0];
}

cyclotomic_integer cyclotomic_integer::galois(uint64_t c) const {
  c %= p_;
  if (c == 0)
    fail(errc::invalid_argument, "Galois substitution needs c prime to p");
  std::vector<long long> acc(p_, 0);
  for (size_t i = 0; i < coords_.size(); ++i) {
    const size_t k = (i * c) % p_;
    acc[k] = checked_add(acc[k], coords_[i]);
  }
  cyclotomic_integer out(p_);
  for (size_t i = 0; i + 1 < p_; ++i)
    out.coords_[i] = checked_sub(acc[i], acc[p_ - 1]);
  return out;
}

fq_poly fiber_polynomial(const pencil_spec& pencil, const fq& field,
                         fq::elem psi) {
  const int m = pencil.a.size();
  if (m < 1) fail(errc::empty_input, "no variables");
  fq_poly f;
  f.nvars = static_cast<unsigned>(m);
  for (int i = 0; i < m; ++i) {
    fq_term t;
    t.coefficient = field.from_int(1);
    t.exponents.assign(m, 0);
    for (int j = 0; j < m; ++j)
      t.exponents[j] = static_cast<unsigned>(pencil.a.at(i, j));
    f.terms.push_back(std::move(t));
  }
  fq_term deform;
  deform.coefficient =
      field.neg(field.mul(field.from_int(pencil.coefficient), psi));
  deform.exponents.assign(m, 1);
  if (deform.coefficient != 0) f.terms.push_back(std::move(deform));
  return f;
}

fq_poly cone_polynomial(const pencil_spec& pencil, const fq& field,
                        fq::elem psi) {
  const fq_poly fiber = fiber_polynomial(pencil, field, psi);
  fq_poly cone;
  cone.nvars = fiber.nvars + 1;
  for (const fq_term& t : fiber.terms) {
    fq_term wt;
    wt.coefficient = t.coefficient;
    wt.exponents.reserve(cone.nvars);
    wt.exponents.push_back(1);  // the cone variable w comes first
    wt.exponents.insert(wt.exponents.end(), t.exponents.begin(),
                        t.exponents.end());
    cone.terms.push_back(std::move(wt));
  }
  return cone;
}

cyclotomic_integer exp_sum(const fq_poly& f, unsigned toric, const fq& base,
                           unsigned r, unsigned long long budget) {
  if (toric > f.nvars)
    fail(errc::invalid_argument, "more toric variables than variables");
  if (f.nvars == 0) fail(errc::empty_input, "no variables");
  for (const fq_term& t : f.terms) {
    if (t.exponents.size() != f.nvars)
      fail(errc::invalid_argument, "term arity mismatch");
    if (t.coefficient >= base.q())
      fail(errc::invalid_argument, "coefficient outside the base field");
  }
  if (r == 0) fail(errc::invalid_argument, "extension degree must be positive");

  const fq ext = r == 1 ? base : fq::make(base.p(), base.r() * r);
  const uint64_t qe = ext.q();

  std::vector<fq::elem> lo(f.nvars, 0);
  for (unsigned i = 0; i < toric; ++i) lo[i] = 1;
  if (detail::domain_size(qe, lo) > budget)
    fail(errc::budget_exceeded, "character-sum enumeration exceeds the budget");

  fq_poly g = f;
  if (r > 1) {
    const std::vector<fq::elem> embed = fq::embedding(base, ext);
    for (fq_term& t : g.terms) t.coefficient = embed[t.coefficient];
  }

  const detail::poly_evaluator ev(ext, g);
  const uint64_t p = ext.p();
  std::vector<unsigned long long> histogram(p, 0);
  detail::domain_odometer odo(qe, std::move(lo));
  do {
    ++histogram[ext.absolute_trace(ev.evaluate(odo.point()))];
  } while (odo.step());

  // sum over residues c of histogram[c] * zeta^c, folding zeta^{p-1}
  cyclotomic_integer out(p);
  for (uint64_t c = 0; c < p; ++c) {
    const auto n = static_cast<long long>(histogram[c]);
    if (n == 0) continue;
    out += cyclotomic_integer::root_power(p, c) *
           cyclotomic_integer::integer(p, n);
  }
  return out;
}

cone_identity_report verify_cone_identity(const pencil_spec& pencil,
                                          const fq& base, fq::elem psi,
                                          unsigned r,
                                          unsigned long long budget) {
  cone_identity_report rep{false, cyclotomic_integer(base.p()), 0, 0};
  const fq_poly cone = cone_polynomial(pencil, base, psi);
  rep.sum = exp_sum(cone, 0, base, r, budget);
  rep.cone_count = count_affine_cone(pencil, base, psi, r, budget);

  unsigned __int128 qr = 1;
  for (unsigned i = 0; i < r; ++i) qr *= base.q();
  const unsigned __int128 expected = qr * rep.cone_count;
  if (expected > static_cast<unsigned __int128>(
                     std::numeric_limits<long long>::max()))
    fail(errc::too_large, "expected value exceeds 64 bits");
  rep.expected = static_cast<long long>(expected);
  rep.holds = rep.sum.is_integer() && rep.sum.as_integer() == rep.expected;
  return rep;
}

collapse_report verify_km_collapse(unsigned n, const fq& base, fq::elem psi,
                                   unsigned r, unsigned long long budget) {
  if (n < 2) fail(errc::invalid_argument, "loop length must be at least 2");
  const family_entry fam = find_family("KM(" + std::to_string(n) + ")");
  const pencil_spec pencil =
      make_pencil(fam.matrix, fam.coefficient, fam.name);
  const fq_poly cone = cone_polynomial(pencil, base, psi);
  // cone variables: w = slot 0, loop variables x_0..x_{n-1} = slots 1..n,
  // pure-power variable x_n = slot n + 1.

  collapse_report rep{false, cyclotomic_integer(base.p()),
                      cyclotomic_integer(base.p()), {}};
  rep.affine_side = exp_sum(cone, 1, base, r, budget);
  rep.toric_side = exp_sum(cone, n + 1, base, r, budget);

  // Correction terms: zero out the loop variables in J, drop the monomials
  // they kill, compress the surviving slots (w first, then the remaining
  // loop variables in order, then x_n), and sum with only w toric.
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    collapse_term term{{}, cyclotomic_integer(base.p())};
    std::vector<bool> zeroed(cone.nvars, false);
    for (unsigned i = 0; i < n; ++i)
      if (mask & (1u << i)) {
        zeroed[i + 1] = true;
        term.zeroed.push_back(i);
      }
    std::vector<int> slot_of(cone.nvars, -1);
    unsigned kept = 0;
    for (unsigned v = 0; v < cone.nvars; ++v)
      if (!zeroed[v]) slot_of[v] = static_cast<int>(kept++);
    fq_poly g;
    g.nvars = kept;
    for (const fq_term& t : cone.terms) {
      bool killed = false;
      for (unsigned v = 0; v < cone.nvars; ++v)
        if (zeroed[v] && t.exponents[v] > 0) {
          killed = true;
          break;
        }
      if (killed) continue;
      fq_term ct;
      ct.coefficient = t.coefficient;
      ct.exponents.assign(kept, 0);
      for (unsigned v = 0; v < cone.nvars; ++v)
        if (!zeroed[v]) ct.exponents[slot_of[v]] = t.exponents[v];
      g.terms.push_back(std::move(ct));
    }
    term.value = exp_sum(g, 1, base, r, budget);
    rep.corrections.push_back(std::move(term));
  }

  bool corrections_vanish = true;
  for (const collapse_term& t : rep.corrections)
    if (!t.value.is_zero()) corrections_vanish = false;
  rep.holds = corrections_vanish && rep.affine_side == rep.toric_side;
  return rep;
}

}  // namespace pz

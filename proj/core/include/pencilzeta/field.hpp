#pragma once

#include <cstdint>
#include <vector>

namespace pz {

// Immutable model of F_{p^r}.  Elements are dense codes
//   code = c_0 + c_1*p + ... + c_{r-1}*p^{r-1}
// for the residue c_0 + c_1*x + ... modulo the lexicographically smallest
// monic irreducible of degree r (modulus = x when r = 1).  Code order is the
// canonical enumeration order.  All state is fixed at construction, so one
// instance may be shared freely across threads.
class fq {
 public:
  using elem = uint32_t;

  // Discrete-log (and Zech) tables are built when p^r <= table_limit.
  static constexpr uint64_t default_table_limit = 1u << 16;

  static fq make(uint64_t p, uint32_t r, uint64_t table_limit = default_table_limit);

  uint64_t p() const { return p_; }
  uint32_t r() const { return r_; }
  uint64_t q() const { return q_; }
  bool has_tables() const { return !exp_.empty(); }
  // Coefficients of the modulus, constant term first, length r+1, monic.
  const std::vector<uint32_t>& modulus() const { return modulus_; }
  // Smallest code generating the multiplicative group.
  elem generator() const { return generator_; }

  elem add(elem a, elem b) const;
  elem sub(elem a, elem b) const { return add(a, neg(b)); }
  elem neg(elem a) const;
  elem mul(elem a, elem b) const;
  elem inv(elem a) const;
  elem pow(elem a, uint64_t e) const;
  // Residue of k embedded through Z -> F_p.
  elem from_int(int64_t k) const;
  elem mul_int(elem a, int64_t k) const { return mul(a, from_int(k)); }

  elem frobenius(elem a) const { return pow(a, p_); }
  // x + x^p + ... + x^{p^(r-1)}, landing in F_p; returns the value in [0, p).
  uint32_t absolute_trace(elem a) const;

  // Nonzero a only: true iff a is a square in F_q.
  bool is_square(elem a) const;
  // Some y with y^2 = a, or q() (an invalid code) if none exists.
  elem sqrt(elem a) const;

  std::vector<uint32_t> to_coeffs(elem a) const;
  elem from_coeffs(const std::vector<uint32_t>& c) const;

  // Image table for the embedding sub -> big determined by the first root
  // (in code order) of sub's modulus inside big.  Requires equal
  // characteristic and sub.r() | big.r().
  static std::vector<elem> embedding(const fq& sub, const fq& big);

 private:
  fq() = default;

  uint64_t p_ = 0, q_ = 0;
  uint32_t r_ = 0;
  std::vector<uint32_t> modulus_;
  elem generator_ = 0;

  // tables (present iff q_ <= table_limit at construction)
  std::vector<elem> exp_;       // exp_[i] = g^i, i in [0, q-1)
  std::vector<uint32_t> log_;   // log_[code], code >= 1
  std::vector<uint32_t> zech_;  // zech_[k] = log(1 + g^k), or zech_none
  static constexpr uint32_t zech_none = 0xffffffffu;

  elem add_generic(elem a, elem b) const;
  elem neg_generic(elem a) const;
  elem mul_generic(elem a, elem b) const;
  elem pow_generic(elem a, uint64_t e) const;
};

}  // namespace pz

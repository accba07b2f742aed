#pragma once

#include <pencilzeta/field.hpp>
#include <pencilzeta/invertible.hpp>

#include <cstdint>
#include <vector>

namespace pz {

// Exact element of Z[zeta] for a fixed prime p, with zeta a primitive p-th
// root of unity.  Coordinates live on the integral basis 1, zeta, ...,
// zeta^{p-2}; anything written on the redundant power zeta^{p-1} is folded
// back through 1 + zeta + ... + zeta^{p-1} = 0.  Because the basis is a
// Z-basis, equality of reduced coordinate vectors is equality in the ring.
// All arithmetic is overflow-checked and throws errc::too_large on wrap.
class cyclotomic_integer {
 public:
  // The zero element of Z[zeta_p].
  explicit cyclotomic_integer(uint64_t p);
  // zeta^k (k arbitrary, reduced mod p).
  static cyclotomic_integer root_power(uint64_t p, uint64_t k);
  // The rational integer n.
  static cyclotomic_integer integer(uint64_t p, long long n);

  uint64_t prime() const { return p_; }
  // Reduced coordinates, length p - 1.
  const std::vector<long long>& coords() const { return coords_; }

  cyclotomic_integer& operator+=(const cyclotomic_integer& o);
  cyclotomic_integer& operator-=(const cyclotomic_integer& o);
  friend cyclotomic_integer operator+(cyclotomic_integer a,
                                      const cyclotomic_integer& b) {
    a += b;
    return a;
  }
  friend cyclotomic_integer operator-(cyclotomic_integer a,
                                      const cyclotomic_integer& b) {
    a -= b;
    return a;
  }
  cyclotomic_integer operator*(const cyclotomic_integer& o) const;
  bool operator==(const cyclotomic_integer& o) const;
  bool operator!=(const cyclotomic_integer& o) const { return !(*this == o); }

  bool is_zero() const;
  // True iff the element lies in Z, i.e. every coordinate past the first
  // vanishes in reduced form.
  bool is_integer() const;
  // The value of an element of Z; throws errc::invalid_argument otherwise.
  long long as_integer() const;
  // Galois conjugate zeta -> zeta^c for c not divisible by p.
  cyclotomic_integer galois(uint64_t c) const;

 private:
  uint64_t p_ = 0;
  std::vector<long long> coords_;  // length p_ - 1
};

// A term c * prod_i x_i^{e_i} of a polynomial over a finite field, and a
// polynomial as a term list over a fixed number of variables.  Exponent
// vectors must all have length nvars; coefficients live in the field the
// polynomial is evaluated over (or any subfield, see exp_sum).
struct fq_term {
  fq::elem coefficient = 0;
  std::vector<unsigned> exponents;
};

struct fq_poly {
  unsigned nvars = 0;
  std::vector<fq_term> terms;
};

// F_psi(x) = (sum of the matrix monomials) - coefficient * psi * x_0...x_m
// as a term list over the pencil's m variables, coefficients reduced into
// `field`.
fq_poly fiber_polynomial(const pencil_spec& pencil, const fq& field,
                         fq::elem psi);

// w * F_psi(x) over the variables (w, x_0, ..., x_n), the weighted cone
// polynomial of a pencil fiber: w comes FIRST so that the toric-variable
// prefix conventions of exp_sum apply directly.  Coefficients are reduced
// into `field`.
fq_poly cone_polynomial(const pencil_spec& pencil, const fq& field,
                        fq::elem psi);

// The additive-character sum
//   S_r(f, G_m^toric x A^(nvars - toric))
//     = sum over x with the first `toric` coordinates nonzero of
//       zeta_p ^ Tr_{F_{q^r}/F_p} f(x)
// with f's coefficients given over the base field and the sum running over
// the degree-r extension.  The character is fixed as zeta_p to the lifted
// absolute trace; every identity verified here is uniform in that choice.
// Throws errc::budget_exceeded when the domain has more than `budget`
// points, errc::invalid_argument on malformed input.
cyclotomic_integer exp_sum(const fq_poly& f, unsigned toric, const fq& base,
                           unsigned r, unsigned long long budget = 10'000'000ULL);

// Verification that S_r(wF, A^{n+2}) = q^r * #{x in A^{n+1}(F_{q^r}) :
// F_psi(x) = 0}: the left side by character summation, the right side by
// the independent affine-cone point count.
struct cone_identity_report {
  bool holds = false;
  cyclotomic_integer sum;              // S_r(wF, A^{n+2})
  unsigned long long cone_count = 0;   // #Y(F_{q^r})
  long long expected = 0;              // q^r * cone_count
};

cone_identity_report verify_cone_identity(const pencil_spec& pencil,
                                          const fq& base, fq::elem psi,
                                          unsigned r,
                                          unsigned long long budget = 10'000'000ULL);

// Verification of the toric-collapse identity for the cyclic-loop pencil
// with a pure-power tail variable:
//   S_r(wF, G_m x A^{n+1}) = S_r(wF, G_m^{n+1} x A^1),
// together with the exact vanishing of every nonempty-J inclusion-exclusion
// correction S_r(wF with the J variables deleted, G_m x A^{J^c} x A^1).
struct collapse_term {
  std::vector<unsigned> zeroed;  // loop-variable indices set to zero (J)
  cyclotomic_integer value;      // the corresponding correction sum
};

struct collapse_report {
  bool holds = false;          // sides equal AND every correction vanishes
  cyclotomic_integer affine_side;  // S_r(wF, G_m x A^{n+1})
  cyclotomic_integer toric_side;   // S_r(wF, G_m^{n+1} x A^1)
  std::vector<collapse_term> corrections;  // 2^n - 1 entries
};

collapse_report verify_km_collapse(unsigned n, const fq& base, fq::elem psi,
                                   unsigned r,
                                   unsigned long long budget = 10'000'000ULL);

}  // namespace pz

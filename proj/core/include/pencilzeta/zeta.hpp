#pragma once

#include <pencilzeta/field.hpp>
#include <pencilzeta/invertible.hpp>
#include <pencilzeta/registry.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace pz {

// One exact projective point count N_r = #X_psi(F_{q^r}).
struct count_record {
  std::string family;        // pencil name (may be empty)
  uint64_t q = 0;            // base field size
  unsigned r = 1;            // extension degree counted over
  fq::elem psi = 0;          // deformation parameter, code in the base field
  unsigned long long count = 0;  // N_r
  double seconds = 0.0;      // wall-clock enumeration time
  unsigned shards = 1;       // enumeration shards summed (deterministic)
};

// Counts projective solutions of F_psi = 0 in P^{m-1}(F_{q^r}) by the
// standard chart decomposition (first nonzero coordinate scaled to 1).
// Exact; throws errc::budget_exceeded when the charts hold more than
// `budget` points in total.
count_record count_projective(const pencil_spec& pencil, const fq& base,
                              fq::elem psi, unsigned r = 1,
                              unsigned long long budget = 10'000'000ULL);

// Counts affine solutions of F_psi = 0 in A^m(F_{q^r}), origin included.
// The cone over the projective fiber: #Y = (q^r - 1) * N_r + 1.
unsigned long long count_affine_cone(const pencil_spec& pencil, const fq& base,
                                     fq::elem psi, unsigned r = 1,
                                     unsigned long long budget = 10'000'000ULL);

enum class r_factor_route { elliptic, fallback };

const char* r_factor_route_name(r_factor_route v);

// The degree-3 non-hyperplane factor R(T) = (1 - qT)(1 - bT + q^2 T^2) of
// the quartic-pencil zeta numerator.  When the fiber's elliptic-curve pair
// is defined over F_q, b = a^2 - 2q for the curve trace a; only a^2 is well
// defined (quadratic twists flip the sign of a), which is all R needs.
// When the pair only exists over F_{q^2} (conjugate j-invariants), b is
// still a well-defined integer in [-2q, 2q] but a_squared = b + 2q need not
// be a perfect square.
struct r_factor_data {
  uint64_t q = 0;
  fq::elem psi = 0;            // fiber the factor belongs to
  long long a_squared = 0;     // b + 2q, in [0, 4q] by the Weil bound
  long long b = 0;             // quadratic coefficient of R
  r_factor_route route = r_factor_route::elliptic;
};

// alpha^{2r} + beta^{2r} for the quadratic pair with alpha + beta = a,
// alpha * beta = q, computed from b = a^2 - 2q alone via B_0 = 2, B_1 = b,
// B_s = b * B_{s-1} - q^2 * B_{s-2}.  Overflow-checked (errc::too_large).
long long frobenius_square_trace(long long b, uint64_t q, unsigned r);

// Determines R for a shared-weight quartic pencil fiber.  Elliptic route
// (p >= 5): the multiplier mu = 256 psi^4 pins the j-invariant pair through
//   j j' = (mu + 144)^3,   (j - 1728)(j' - 1728) = mu (mu - 648)^2,
// so j solves x^2 - Sx + N with N = (mu+144)^3 and
// S = (N + 1728^2 - mu (mu - 648)^2)/1728; a rational root j selects a
// Weierstrass curve (j = 0: y^2 = x^3 + 1; j = 1728: y^2 = x^3 + x; else
// k = j/(1728 - j), y^2 = x^3 + 3kx + 2k) whose trace is read off by
// enumeration.  Count fallback (p = 3, both j conjugate, or the chosen
// Weierstrass model contradicting the r = 1 count — a twist the j-invariant
// cannot see): integer candidates b in [-2q, 2q] congruent to N_1 - 1 mod
// q, filtered by the residual-trace windows |t_r| <= 18 for r = 1 and,
// while ambiguous, r = 2..4 (level 2 is mandatory; levels 3 and 4 are
// consulted only while the point budget allows); if several candidates
// survive and exactly one
// has the elliptic-trace form b = a^2 - 2q, it wins (counts cannot separate
// b = -2q from b = 2q at a supersingular fiber, and only the former is
// realized by a curve over a prime field).  The elliptic result is always
// cross-checked against the r = 1 count before being returned.
//
// Errors: errc::unsupported (not a quartic pencil with dual weights all one
// — no degree-3 factor is reconstructed for the chain families),
// errc::bad_prime (characteristic 2), errc::bad_fiber (singular fiber,
// psi^4 = 1), errc::ambiguous_r_factor (fallback candidates not separated
// by r <= 4; at q = 3 any two Weil-admissible candidates congruent to 0
// mod q pass every window forever, so some families there are genuinely
// count-inseparable and R must be taken from a sibling with the same dual
// weights), errc::internal_check (no candidate matches the counts at
// all), errc::budget_exceeded.
//
// force_fallback skips the elliptic attempt even when it would apply, so
// callers can cross-validate the two routes against each other.
r_factor_data r_factor(const family_entry& family, const fq& base,
                       fq::elem psi,
                       unsigned long long budget = 10'000'000ULL,
                       bool force_fallback = false);

// Residual trace of the 18-dimensional factor at level r:
//   t_r = (N_r - 1 - q^{2r} - 2 q^r - B_r) / q^r,
// B_r from frobenius_square_trace.  Requires every record to share (q, psi)
// with the factor; throws errc::non_integral_trace when the division is not
// exact and errc::trace_bound when |t_r| > 18 — both signal a wrong R or a
// bad fiber and are surfaced, never clamped.
std::vector<long long> residual_traces(const std::vector<count_record>& counts,
                                       const r_factor_data& factor);

// All pairwise count differences reduced mod q^r for pencils sharing dual
// weights (errc::invalid_argument otherwise).  residues[i][j] =
// (N_r(i) - N_r(j)) mod q^r in [0, q^r); all_zero reports the full matrix.
struct comparison_matrix {
  unsigned long long modulus = 0;  // q^r
  std::vector<count_record> counts;
  std::vector<std::vector<unsigned long long>> residues;
  bool all_zero = false;
};

comparison_matrix compare_families(const std::vector<pencil_spec>& pencils,
                                   const fq& base, fq::elem psi, unsigned r = 1,
                                   unsigned long long budget = 10'000'000ULL);

// Ordinary iff N_1 != 1 mod p: the non-unit Frobenius eigenvalues of a
// supersingular fiber are all divisible by p, leaving N_1 = 1 + (unit-root
// contribution) = 1 mod p exactly when the unit root is absent.
bool ordinary_test(const pencil_spec& pencil, const fq& base, fq::elem psi,
                   unsigned long long budget = 10'000'000ULL);

// The count the degree-2 mirror model predicts at level r:
//   1 + 20 q^r + q^{2r} + B_r.
long long mirror_count(const r_factor_data& factor, unsigned r);

// Smallest r <= r_max with t_r = 18 (equivalently N_r equal to the mirror
// count), together with the trace and mirror-count trail.
struct r0_scan {
  std::optional<unsigned> r0;
  std::vector<count_record> counts;        // r = 1..r_scanned
  std::vector<long long> traces;           // t_r, same indexing
  std::vector<long long> mirror_counts;    // mirror model, same indexing
};

r0_scan find_r0(const pencil_spec& pencil, const fq& base, fq::elem psi,
                const r_factor_data& factor, unsigned r_max,
                unsigned long long budget = 10'000'000ULL);

// Everything the analysis pipeline knows about one fiber, as assembled by
// the command-line driver: counts, the R-factor when one exists, traces,
// ordinarity, sibling congruence residues, and the r_0 search outcome.
struct zeta_report {
  std::string family;
  uint64_t q = 0;
  fq::elem psi = 0;
  std::vector<count_record> counts;
  std::optional<r_factor_data> factor;
  std::vector<long long> traces;
  bool ordinary = false;
  // (sibling family name, (N_1 difference) mod q) for each other registry
  // entry sharing this family's dual weights.
  std::vector<std::pair<std::string, unsigned long long>> sibling_residues;
  std::optional<unsigned> r0;
};

}  // namespace pz

#pragma once

#include <pencilzeta/invertible.hpp>
#include <pencilzeta/zmath.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace pz {

// Hypergeometric data attached to a vector of positive integer weights
// (q_0, ..., q_n) with gcd 1 and total degree d = sum q_i.
//
// alpha is the set {j/d : 0 <= j < d}; beta is the multiset union over i of
// {j/q_i : 0 <= j < q_i}.  The shared list is alpha "intersect" beta: each
// value common to both, taken once (alpha has no repeats).  Removing the
// shared values once each from beta leaves `order` entries; the numerator
// parameters are alpha minus the shared values, and the denominator
// parameters are beta minus the shared values with one additional zero
// removed (classical hypergeometric normalization: a _DF_{D-1} has D upper
// and D-1 lower parameters).
struct hypergeometric_data {
    qvec alpha;        // sorted ascending, size = degree
    qvec beta;         // sorted ascending multiset, size = degree
    qvec shared;       // sorted; always contains 0
    qvec numerator;    // alpha minus shared, sorted; size = order
    qvec denominator;  // beta minus shared minus one zero, sorted; size = order - 1
                       // (empty when order == 0)
    unsigned order = 0;      // degree - #shared
    unsigned degree = 0;     // d = sum of weights
    std::vector<long long> weights;
};

hypergeometric_data hg_data(const std::vector<long long>& weights);
hypergeometric_data hg_data(const weight_data& w);  // uses w.dual

// The ordinary differential operator annihilating the holomorphic period of
// the pencil, in both standard presentations.
//
// psi-form (delta = psi d/dpsi):
//     scalar * psi^degree * P(delta) - M(delta),
// where P has roots {-b*d : b in beta minus shared} and M has roots
// {a*d : a in alpha minus shared}, and scalar = prod q_i^{q_i}.
//
// z-form (theta = z d/dz, z = 1 / (scalar * psi^degree), theta = -delta/d):
//     B(theta) - z * A(theta),
// where B has roots {b : b in beta minus shared} and A has roots
// {-a : a in alpha minus shared}.
//
// All coefficient lists are exact rationals in ascending order of the
// operator symbol, each of length order + 1 and monic.
struct pf_operator_data {
    unsigned order = 0;
    unsigned degree = 0;           // exponent of psi (and of 1/psi in z)
    mpz_class scalar;              // prod q_i^{q_i}
    qvec theta_poly;               // B: prod (theta - b)
    qvec theta_z_poly;             // A: prod (theta + a)
    qvec delta_psi_poly;           // P: prod (delta + b*d)
    qvec delta_const_poly;         // M: prod (delta - a*d)
};

pf_operator_data pf_operator(const std::vector<long long>& weights);

// Coefficients c_0, ..., c_count of the holomorphic solution
//     sum_k c_k z^k
// of the z-form operator, with c_0 = 1.  The classical lower Pochhammer
// parameter attached to a denominator entry b is 1 - b (so a zero entry
// gives 1); on weight data the denominator multiset is symmetric under
// b -> 1-b, so this coincides with using the raw nonzero entries.  Each
// returned coefficient is verified against the expanded operator
// polynomials: B(k) c_k = A(k-1) c_{k-1} for 1 <= k <= count.
std::vector<mpq_class> series_coefficients(const hypergeometric_data& hg,
                                           unsigned count);

// The k-th cyclotomic polynomial, integer coefficients ascending in x.
zvec cyclotomic_polynomial(unsigned k);

// Rationality certificate: both
//     g_alpha = prod over (alpha minus shared) of (x - e^{2 pi i a})
//     g_beta  = prod over (beta minus shared)  of (x - e^{2 pi i b})
// are integer polynomials, assembled as products of cyclotomic polynomials.
// With r_i = gcd(q_i, d) and r_ij = gcd(r_i, r_j):
//     numerator_orders   K   = {k > 1 : k | d, k does not divide any r_i},
//     denominator_orders K_i = {k > 1 : k | q_i, k does not divide r_i}
//                        union {k > 1 : k | r_i and k | r_ij for some j < i},
// and g_alpha = prod_{k in K} Phi_k,
//     g_beta  = (x-1)^n * prod_i prod_{k in K_i} Phi_k.
// Degrees are verified internally: deg g_alpha = deg g_beta = order.
struct cyclotomic_descent_data {
    std::vector<unsigned> shared_gcds;                      // r_i
    std::vector<unsigned> numerator_orders;                 // K, sorted
    std::vector<std::vector<unsigned>> denominator_orders;  // K_i, each sorted
    zvec g_alpha;  // integer coefficients, ascending
    zvec g_beta;
};

cyclotomic_descent_data cyclotomic_descent(const std::vector<long long>& weights);

// Checks that the numerator and denominator parameter lists are disjoint
// modulo integers (all entries live in [0,1), so this is plain disjointness).
// This is the classical criterion for the hypergeometric operator to be
// irreducible; it holds for every valid weight vector because coinciding
// parameters are removed by the shared list, so a false return on real data
// signals an internal bug.
struct irreducibility_report {
    bool irreducible = false;
    std::string explanation;
};

irreducibility_report irreducibility_certificate(const hypergeometric_data& hg);

// Exhaustive scan over all unordered positive weight vectors with gcd 1 and
// total degree <= max_degree.  For each vector it recomputes the cyclotomic
// data by divisor counting, assembles g_alpha and g_beta in overflow-checked
// 64-bit arithmetic, and verifies deg g_alpha = order, deg g_beta = order,
// and the degree identity order = degree - #shared.  Throws on the first
// violation.
struct cyclotomic_scan_result {
    unsigned long long vectors_scanned = 0;
    long long max_abs_coefficient = 0;
};

cyclotomic_scan_result scan_cyclotomic(unsigned max_degree);

}  // namespace pz

#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <vector>

namespace pz {

// Dense exact linear algebra on small matrices.  Row-major throughout.
using zvec = std::vector<mpz_class>;
using zmat = std::vector<zvec>;
using qvec = std::vector<mpq_class>;
using qmat = std::vector<qvec>;

zmat to_zmat(const std::vector<std::vector<int64_t>>& a);
qmat to_qmat(const zmat& a);

// Determinant by fraction-free (Bareiss) elimination.  Square input.
mpz_class det(zmat a);

// Rank over Q.  Rows are gcd-stripped between elimination steps to curb
// coefficient growth; safe on rectangular input.
int rank_z(zmat a);
int rank_q(qmat a);

// Exact solution of a*x = b for square nonsingular a.
qvec solve(const zmat& a, const zvec& b);

// Basis of the right kernel of a (vectors y with a*y = 0).
std::vector<qvec> nullspace(const qmat& a);

// Diagonal of the Smith normal form, nonnegative, divisibility chain,
// zeros trailing.  Input may be rectangular; result has min(rows, cols)
// entries.
zvec smith_invariants(zmat a);

// Columns of `a` span a finite-index sublattice of Z^m (m = row count).
// Returns an m-column basis of that lattice (column echelon, pivots > 0).
// Throws errc::singular_matrix if the span has rank < m.
zmat column_lattice_basis(zmat a);

// Invariant factors > 1 of the quotient L_outer / L_inner of two full-rank
// lattices in Z^m given by column bases, L_inner a sublattice of L_outer.
zvec quotient_invariants(const zmat& outer, const zmat& inner);

// Dense univariate polynomials, coefficients ascending (p[k] is the
// coefficient of x^k).  The zero polynomial is the empty vector; nonzero
// polynomials carry no trailing zero coefficients.
zvec poly_mul(const zvec& a, const zvec& b);
qvec poly_mul(const qvec& a, const qvec& b);

// Exact quotient a / b; throws errc::singular_matrix if b is zero and
// errc::invalid_argument if b does not divide a.
zvec poly_divexact(const zvec& a, const zvec& b);

mpz_class poly_eval(const zvec& p, const mpz_class& x);
mpq_class poly_eval(const qvec& p, const mpq_class& x);

// Monic polynomial prod_k (x - roots[k]).
qvec poly_from_roots(const qvec& roots);

}  // namespace pz

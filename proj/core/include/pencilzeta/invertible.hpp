#pragma once

#include <pencilzeta/zmath.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace pz {

// Square nonnegative integer matrix whose rows are the exponent vectors of a
// polynomial with as many monomials as variables: row i encodes the monomial
// prod_j x_j^{rows[i][j]}.
struct exponent_matrix {
  std::vector<std::vector<int64_t>> rows;

  int size() const { return static_cast<int>(rows.size()); }
  int64_t at(int r, int c) const { return rows[r][c]; }
  bool operator==(const exponent_matrix&) const = default;
};

exponent_matrix transpose(const exponent_matrix& a);

// The three atomic summand shapes every decomposable polynomial is built
// from.  With local variables y_1..y_k and exponents a_1..a_k:
//   fermat:  y_1^{a_1}                                   (k = 1)
//   loop:    y_1^{a_1} y_2 + y_2^{a_2} y_3 + ... + y_k^{a_k} y_1
//   chain:   y_1^{a_1} y_2 + ... + y_{k-1}^{a_{k-1}} y_k + y_k^{a_k}
enum class atom_kind { fermat, loop, chain };

struct atom {
  atom_kind kind = atom_kind::fermat;
  std::vector<int64_t> exponents;  // a_1..a_k in the normal-form order
  std::vector<int> variables;      // global index of y_1..y_k
  std::vector<int> source_rows;    // matrix row the i-th monomial came from

  int length() const { return static_cast<int>(exponents.size()); }
  // "Fermat(4)", "Loop(3,3)", "Chain(3,4)".
  std::string to_string() const;
};

// Partition of the variables into atoms.  Loops are rotated so their lowest
// variable comes first; chains run head to tail (the pure-power monomial
// last); atoms are sorted by their lowest participating variable.
struct decomposition {
  std::vector<atom> atoms;
  std::vector<int> variable_order;  // concatenated atom variable lists
};

struct validation_report {
  bool invertible = false;  // nonzero determinant, positive weights, decomposable
  bool calabi_yau = false;  // homogeneous with degree == number of variables
  mpz_class determinant;
  std::vector<int64_t> primal_weights;  // primitive positive, gcd 1
  int64_t primal_degree = 0;            // common weighted degree of all rows
};

struct weight_data {
  std::vector<int64_t> dual;  // primitive positive weights of the transpose
  int64_t dual_degree = 0;    // weighted degree of the transpose;
                              // equals the sum of `dual` in the
                              // degree-(n+1) homogeneous case
  std::vector<int64_t> primal;
  int64_t primal_degree = 0;
};

// One-parameter deformation F_psi = (matrix polynomial) - c*psi*x_0...x_n.
struct pencil_spec {
  exponent_matrix a;
  int64_t coefficient = 0;  // c above
  std::string name;         // registry name when applicable, else empty
};

enum class pencil_normalization {
  dual_degree,  // c = sum of dual weights
  ambient,      // c = number of variables (degree of the fiber)
};

// Finite abelian groups reported as invariant-factor chains d_1 | d_2 | ...
// with every d_i > 1; the trivial group is the empty list.
struct group_data {
  mpz_class aut_order;             // |det A|
  std::vector<mpz_class> aut;      // all diagonal scalings fixing the polynomial
  std::vector<mpz_class> sl;       // subgroup with coordinate product 1
  std::vector<mpz_class> j;        // subgroup acting trivially on the hypersurface
  std::vector<mpz_class> sl_mod_j; // the faithfully acting quotient
  qvec j_generator;                // exponent vector (primal weights / degree)
};

// Symmetry data of the length-n loop + single Fermat pencil: the scaling
// group is cyclic of order m = n^n + (-1)^{n+1} and (n+1) | m.
struct loop_fermat_group {
  mpz_class m;
  mpz_class faithful_order;                    // m / (n+1)
  std::vector<mpz_class> generator_exponents;  // of a primitive m-th root, mod m
  std::vector<mpz_class> faithful_generator;   // exponents of the (n+1)-st power
};

// Checks the invertibility package: nonzero determinant, a positive
// quasi-homogeneous weight system, and decomposability into atoms.  Throws
// errc::singular_matrix / no_positive_weights / not_decomposable on the
// respective failure; the homogeneity flag is informational.
validation_report validate(const exponent_matrix& a);

// Unique atom partition of a decomposable matrix (errc::not_decomposable
// otherwise).  reassemble() inverts it exactly, including row order.
decomposition decompose(const exponent_matrix& a);
exponent_matrix reassemble(const decomposition& d);

// Primitive positive integer solution q of (transpose A) q = d * 1 together
// with the primal system; errc::no_positive_weights when signs fail.
weight_data dual_weights(const exponent_matrix& a);

// Deformation family with an explicit coefficient (registry tables print 4
// or 12) or a named normalization.  Requires all row sums equal to the
// variable count (errc::not_calabi_yau).
pencil_spec make_pencil(const exponent_matrix& a, int64_t coefficient,
                        std::string name = {});
pencil_spec make_pencil(const exponent_matrix& a, pencil_normalization norm,
                        std::string name = {});

// Diagonal scaling symmetries of the polynomial as subgroups of (Q/Z)^{n+1}
// via exponent vectors: the full group is generated by the columns of
// A^{-1}, the product-one subgroup by those combinations whose coordinate
// sum is integral, and the trivially-acting subgroup by the single vector
// A^{-1} * (1,...,1).
group_data symmetry_groups(const exponent_matrix& a);

// Closed-form symmetry data for the loop+Fermat family in n+1 variables.
loop_fermat_group klein_mukai_order(int n);

}  // namespace pz

#pragma once

#include <pencilzeta/invertible.hpp>
#include <pencilzeta/zmath.hpp>

#include <cstdint>
#include <vector>

namespace pz {

// Graded dimensions of the Jacobian-ideal quotient of a pencil fiber at a
// fixed rational deformation parameter, together with the dimensions of the
// symmetry-invariant blocks in the residue degrees.
//
// The fiber polynomial must be honestly homogeneous (every exponent row sums
// to the variable count), so the quotient is graded with socle degree
// m*(m-2) for m variables.  For a smooth fiber the quotient vanishes beyond
// the socle; a nonzero piece one past the socle certifies a singular fiber
// and raises errc::singular_fiber.
//
// The product-one diagonal symmetry group acts on each monomial by a
// character, so every graded piece splits into character blocks.  The
// invariant dimensions are reported for the residue degrees a*m,
// a = 0..m-2, and their sum bounds the degree of the interesting zeta
// factor from above.
struct milnor_report {
  std::vector<unsigned> graded_dims;        // degrees 0..socle_degree
  unsigned socle_degree = 0;                // m*(m-2)
  std::vector<unsigned> primitive_degrees;  // a*m for a = 0..m-2
  std::vector<unsigned> invariant_dims;     // aligned with primitive_degrees
  unsigned invariant_dim = 0;               // sum of invariant_dims
  mpq_class fiber;                          // deformation parameter used
};

// Exact computation over the rationals at the given fiber (default 2, a
// smooth parameter for every registry family).  The rank of a graded piece
// can only drop on a closed locus of fibers, so agreement across a few
// fibers certifies genericity; callers wanting that certificate compare
// reports at several parameters.
//
// cell_budget caps rows*columns of any single elimination; two to five
// variables stay far below the default.  Errors: errc::budget_exceeded,
// errc::singular_fiber, errc::invalid_argument, errc::not_calabi_yau.
milnor_report milnor_data(const pencil_spec& pencil,
                          const mpq_class& fiber = mpq_class(2),
                          unsigned long long cell_budget = 5'000'000ULL);

// Convenience wrappers returning a single field of the full report.
std::vector<unsigned> graded_dims(const pencil_spec& pencil,
                                  const mpq_class& fiber = mpq_class(2),
                                  unsigned long long cell_budget = 5'000'000ULL);
unsigned invariant_dim(const pencil_spec& pencil,
                       const mpq_class& fiber = mpq_class(2),
                       unsigned long long cell_budget = 5'000'000ULL);

}  // namespace pz

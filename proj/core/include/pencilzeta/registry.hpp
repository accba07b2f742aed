#pragma once

#include <pencilzeta/invertible.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace pz {

// A named deformation family: quartic K3 pencils built from Fermat, loop,
// and chain atoms, plus the two parameterized series (single loop + single
// Fermat, and pure Fermat) in any dimension.
struct family_entry {
  std::string name;            // canonical registry spelling
  exponent_matrix matrix;      // rows = monomials of the undeformed polynomial
  int64_t coefficient = 0;     // deformation coefficient in front of psi
  std::string polynomial;      // printable fiber equation
  std::vector<int64_t> excluded_characteristics;  // primes where the
                                                  // smoothness criterion fails
  bool quartic_surface = false;  // member of the shared-weight quartic tables
};

// The seven fixed quartic families: F4, F2L2, F1L3, L2L2, L4 (dual weights
// all 1) and C2F2, C2L2 (dual weights (4,2,3,3)).
const std::vector<family_entry>& registry();

// Case-insensitive lookup; also parses the parameterized spellings "KM(n)"
// (loop of length n plus one Fermat, coefficient n+1) and "Dwork(n)"
// (diagonal Fermat pencil, coefficient n+1).  Throws errc::invalid_argument
// for unknown names.
family_entry find_family(const std::string& name);

// Fiber is smooth by the closed-form criterion: p not excluded and the
// deformation parameter avoids the singular locus (psi^{n+1} != 1 over the
// algebraic closure, checked as psi^{n+1} != 1 in the given field).
bool good_characteristic(const family_entry& fam, int64_t p);

}  // namespace pz

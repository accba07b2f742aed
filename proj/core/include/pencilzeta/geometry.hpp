#pragma once

#include <pencilzeta/field.hpp>
#include <pencilzeta/invertible.hpp>
#include <pencilzeta/registry.hpp>
#include <pencilzeta/zmath.hpp>

#include <cstdint>
#include <optional>
#include <vector>

namespace pz {

using lattice_point = std::vector<long long>;

// One face of the polytope: the indices of the support points lying on it,
// a supporting normal with <normal, p> >= offset for every support point and
// equality exactly on the face, and the face's affine dimension.  The whole
// polytope appears as the top face; its normal is constant on all support
// points (an affine-hull equality when the polytope is not full-dimensional,
// the zero vector otherwise).
struct polytope_face {
    std::vector<size_t> points;  // sorted indices into support
    qvec normal;
    mpq_class offset;
    int dim = -1;
};

struct newton_polytope {
    std::vector<lattice_point> support;
    std::vector<size_t> vertices;      // indices of the 0-dimensional faces
    std::vector<polytope_face> faces;  // all nonempty faces, sorted by
                                       // (dim, point list); includes the top
    int dim = -1;
};

// Complete face lattice of conv(support), computed by exact supporting-
// hyperplane search over point subsets.  Throws errc::too_large beyond
// 32 points or affine dimension 6, errc::invalid_argument on duplicates.
newton_polytope faces(const std::vector<lattice_point>& support);

// Dimension-drop test: for every subset J of variable_subset, deleting the
// monomials that involve a variable of J must drop the linear-span dimension
// of the support by exactly #J.  (The span of the support points equals the
// affine dimension of the convex hull of the support together with the
// origin.)  Always true for the empty subset.
bool is_convenient(const std::vector<lattice_point>& support,
                   const std::vector<size_t>& variable_subset);

// A point of (F_{q^k}^x)^{n+1} on which a face-restricted singular system
// vanishes.  `point` holds element codes in the degree-k extension of the
// search field; `face` is the face's support-index list.
struct degeneracy_witness {
    unsigned extension = 0;
    std::vector<fq::elem> point;
    std::vector<size_t> face;
};

// Result of the bounded search.  `newton` witnesses degeneracy with respect
// to the Newton polytope (face polynomial and all scaled derivatives
// x_i dF/dx_i vanish); `infinity` witnesses the variant that requires only
// the derivatives to vanish.  A newton witness is always an infinity
// witness.  Empty optionals are NOT a nondegeneracy proof: the search is an
// exhaustive falsifier over extensions of degree <= k_max only.
struct degeneracy_report {
    std::optional<degeneracy_witness> newton;
    std::optional<degeneracy_witness> infinity;
    unsigned long long systems_checked = 0;
};

// Searches (F_{q^k}^x)^{n+1} for k = 1..k_max, over every face of the Newton
// polytope of the fiber at psi (the deformation monomial drops out of the
// support when coefficient * psi vanishes).  Deterministic: extensions in
// ascending degree, points in lexicographic code order, faces in lattice
// order; the first witness of each kind is kept and the search stops once a
// newton witness is found.  Throws errc::budget_exceeded when the number of
// (point, face) systems would exceed `budget` before completing.
degeneracy_report degeneracy_search(const pencil_spec& pencil, const fq& field,
                                    fq::elem psi, unsigned k_max,
                                    unsigned long long budget = 100'000'000ULL);

enum class smoothness_verdict {
    smooth,    // good characteristic and discriminant nonzero: smooth fiber
    singular,  // good characteristic, discriminant zero: singular fiber
    excluded,  // characteristic not covered by the closed-form criterion
};

const char* smoothness_verdict_name(smoothness_verdict v);

// Closed-form smoothness verdict for a registry family at the fiber psi in
// the given field: `excluded` when the field characteristic is among the
// family's excluded characteristics, `singular` when the pencil
// discriminant (prod_i q_i^{q_i}) * psi^{d^T} - 1 vanishes (q the dual
// weights, d^T their sum; psi^{n+1} = 1 for the all-ones weight families),
// and `smooth` otherwise.
smoothness_verdict known_smoothness(const family_entry& family, const fq& field,
                                    fq::elem psi);

}  // namespace pz

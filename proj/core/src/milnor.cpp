#include "pencilzeta/milnor.hpp"

#include <map>
#include <utility>

#include "pencilzeta/errors.hpp"

namespace pz {

namespace {

using exponent = std::vector<int>;

// All exponent vectors with the given coordinate sum, lexicographically
// ascending; the companion map sends each vector to its position.
void monomials_of_degree(int nvars, int deg, std::vector<exponent>& out) {
  exponent cur(nvars, 0);
  auto rec = [&](auto&& self, int pos, int left) -> void {
    if (pos == nvars - 1) {
      cur[pos] = left;
      out.push_back(cur);
      return;
    }
    for (int e = 0; e <= left; ++e) {
      cur[pos] = e;
      self(self, pos + 1, left - e);
    }
  };
  if (nvars == 0) return;
  rec(rec, 0, deg);
}

struct fiber_term {
  exponent e;
  mpz_class coeff;  // after clearing the parameter denominator
};

// Character test against the product-one symmetry subgroup: the monomial
// x^e is invariant iff e^T * character_table is 0 mod `den` componentwise.
struct invariance_test {
  zmat table;     // m x m integer matrix winv * L-basis
  mpz_class den;  // |det A|

  bool invariant(const exponent& e) const {
    const size_t m = table.size();
    for (size_t j = 0; j < m; ++j) {
      mpz_class acc = 0;
      for (size_t i = 0; i < m; ++i)
        if (e[i] != 0) acc += e[i] * table[i][j];
      if (acc % den != 0) return false;
    }
    return true;
  }
};

invariance_test build_invariance_test(const exponent_matrix& a) {
  const int m = a.size();
  zmat az = to_zmat(a.rows);
  mpz_class den = abs(det(az));

  // den * A^{-1}, column by column.
  zmat winv(m, zvec(m));
  for (int j = 0; j < m; ++j) {
    zvec e(m, 0);
    e[j] = den;
    qvec col = solve(az, e);
    for (int i = 0; i < m; ++i) {
      if (col[i].get_den() != 1)
        fail(errc::internal_check, "scaled inverse column not integral");
      winv[i][j] = col[i].get_num();
    }
  }

  // The product-one subgroup is A^{-1} applied to the lattice of integer
  // vectors pairing with the dual weights to 0 mod the dual degree.  That
  // lattice is spanned by dT*e_i together with the pair vectors
  // q_j*e_i - q_i*e_j (the dual weights have gcd 1).
  weight_data wd = dual_weights(a);
  zmat gen(m);  // rows = ambient coordinates, columns = generators
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j)
      gen[i].push_back(i == j ? mpz_class(wd.dual_degree) : mpz_class(0));
    for (int s = 0; s < m; ++s)
      for (int t = s + 1; t < m; ++t)
        gen[i].push_back(i == s   ? mpz_class(wd.dual[t])
                         : i == t ? mpz_class(-wd.dual[s])
                                  : mpz_class(0));
  }
  zmat lb = column_lattice_basis(gen);

  invariance_test out;
  out.den = den;
  out.table.assign(m, zvec(m, 0));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k) out.table[i][j] += winv[i][k] * lb[k][j];
  // table = winv * lb, so e^T table j-th entry = den * (e^T A^{-1}) lb_j,
  // the character of x^e on the j-th generator scaled by den.
  return out;
}

// One graded piece: monomial count, Jacobian rows, and optionally the
// invariant-block data.
struct graded_piece {
  size_t monomial_count = 0;
  int rank = 0;
  size_t invariant_monomials = 0;
  int invariant_rank = 0;
};

graded_piece compute_piece(int nvars, int degree, int fiber_degree,
                           const std::vector<fiber_term>& terms,
                           const invariance_test* inv,
                           unsigned long long cell_budget) {
  std::vector<exponent> monos;
  monomials_of_degree(nvars, degree, monos);
  std::map<exponent, size_t> index;
  for (size_t i = 0; i < monos.size(); ++i) index[monos[i]] = i;

  graded_piece out;
  out.monomial_count = monos.size();

  std::vector<char> mono_invariant;
  if (inv) {
    mono_invariant.resize(monos.size());
    for (size_t i = 0; i < monos.size(); ++i)
      mono_invariant[i] = inv->invariant(monos[i]) ? 1 : 0;
    for (char c : mono_invariant) out.invariant_monomials += c;
  }

  const int mult_degree = degree - (fiber_degree - 1);
  if (mult_degree < 0) return out;

  std::vector<exponent> mults;
  monomials_of_degree(nvars, mult_degree, mults);

  const unsigned long long cells =
      static_cast<unsigned long long>(mults.size()) * nvars * monos.size();
  if (cells > cell_budget)
    fail(errc::budget_exceeded, "graded piece exceeds the elimination budget");

  zmat rows;
  zmat inv_rows;  // rows with trivial character, invariant columns only
  std::vector<size_t> inv_col;
  if (inv) {
    inv_col.assign(monos.size(), 0);
    size_t c = 0;
    for (size_t i = 0; i < monos.size(); ++i)
      if (mono_invariant[i]) inv_col[i] = c++;
  }

  exponent prod(nvars);
  for (const auto& u : mults)
    for (int i = 0; i < nvars; ++i) {
      zvec row(monos.size(), 0);
      bool nonzero = false;
      bool row_invariant = false;
      bool invariant_known = false;
      for (const auto& t : terms) {
        if (t.e[i] == 0) continue;
        for (int c = 0; c < nvars; ++c)
          prod[c] = u[c] + t.e[c] - (c == i ? 1 : 0);
        row[index.at(prod)] += t.coeff * t.e[i];
        nonzero = true;
        if (inv && !invariant_known) {
          // Every term of u * dF/dx_i carries the same character, so test
          // one product monomial.
          row_invariant = mono_invariant[index.at(prod)] != 0;
          invariant_known = true;
        }
      }
      if (!nonzero) continue;
      if (inv && row_invariant) {
        zvec r(out.invariant_monomials, 0);
        for (size_t c = 0; c < monos.size(); ++c)
          if (row[c] != 0) {
            if (!mono_invariant[c])
              fail(errc::internal_check,
                   "character block mixes invariant and movable monomials");
            r[inv_col[c]] = row[c];
          }
        inv_rows.push_back(std::move(r));
      }
      rows.push_back(std::move(row));
    }

  out.rank = rank_z(rows);
  if (inv) out.invariant_rank = inv_rows.empty() ? 0 : rank_z(inv_rows);
  return out;
}

}  // namespace

milnor_report milnor_data(const pencil_spec& pencil, const mpq_class& fiber,
                          unsigned long long cell_budget) {
  const int m = pencil.a.size();
  if (m < 2) fail(errc::invalid_argument, "need at least two variables");
  if (m > 5)
    fail(errc::budget_exceeded, "graded ranks supported for at most 5 variables");
  for (const auto& row : pencil.a.rows) {
    int64_t s = 0;
    for (int64_t e : row) {
      if (e < 0) fail(errc::invalid_argument, "negative exponent");
      s += e;
    }
    if (s != m)
      fail(errc::not_calabi_yau, "fiber is not homogeneous of ambient degree");
  }

  // Fiber terms of den(fiber) * F: the matrix monomials, plus the scaled
  // deformation monomial when its coefficient is nonzero.
  std::vector<fiber_term> terms;
  for (const auto& row : pencil.a.rows) {
    fiber_term t;
    t.e.assign(row.begin(), row.end());
    t.coeff = fiber.get_den();
    terms.push_back(std::move(t));
  }
  {
    mpz_class dcoef = -pencil.coefficient * fiber.get_num();
    if (dcoef != 0) {
      fiber_term t;
      t.e.assign(m, 1);
      t.coeff = dcoef;
      terms.push_back(std::move(t));
    }
  }

  milnor_report rep;
  rep.fiber = fiber;
  rep.socle_degree = static_cast<unsigned>(m * (m - 2));

  invariance_test inv = build_invariance_test(pencil.a);

  for (int a = 0; a <= m - 2; ++a)
    rep.primitive_degrees.push_back(static_cast<unsigned>(a * m));

  // A smooth fiber's quotient vanishes one degree past the socle, and a
  // singular fiber's never vanishes; check that degree first.
  {
    graded_piece p = compute_piece(m, static_cast<int>(rep.socle_degree) + 1, m,
                                   terms, nullptr, cell_budget);
    if (p.monomial_count != static_cast<size_t>(p.rank))
      fail(errc::singular_fiber,
           "jacobian ideal misses monomials past the socle degree");
  }

  for (int k = 0; k <= static_cast<int>(rep.socle_degree); ++k) {
    const bool primitive = k % m == 0;
    graded_piece p = compute_piece(m, k, m, terms, primitive ? &inv : nullptr,
                                   cell_budget);
    rep.graded_dims.push_back(
        static_cast<unsigned>(p.monomial_count - static_cast<size_t>(p.rank)));
    if (primitive) {
      unsigned idim = static_cast<unsigned>(p.invariant_monomials -
                                            static_cast<size_t>(p.invariant_rank));
      rep.invariant_dims.push_back(idim);
      rep.invariant_dim += idim;
    }
  }
  if (rep.invariant_dims.size() != rep.primitive_degrees.size())
    fail(errc::internal_check, "primitive degree bookkeeping mismatch");
  return rep;
}

std::vector<unsigned> graded_dims(const pencil_spec& pencil,
                                  const mpq_class& fiber,
                                  unsigned long long cell_budget) {
  return milnor_data(pencil, fiber, cell_budget).graded_dims;
}

unsigned invariant_dim(const pencil_spec& pencil, const mpq_class& fiber,
                       unsigned long long cell_budget) {
  return milnor_data(pencil, fiber, cell_budget).invariant_dim;
}

}  // namespace pz

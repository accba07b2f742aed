#include <pencilzeta/invertible.hpp>

#include <pencilzeta/errors.hpp>

#include <algorithm>
#include <numeric>
#include <sstream>

namespace pz {

namespace {

void check_shape(const exponent_matrix& a) {
  const int m = a.size();
  if (m == 0) fail(errc::empty_input, "exponent matrix is empty");
  for (const auto& row : a.rows) {
    if (static_cast<int>(row.size()) != m)
      fail(errc::invalid_argument, "exponent matrix must be square");
    for (int64_t e : row)
      if (e < 0) fail(errc::invalid_argument, "exponents must be nonnegative");
  }
}

// Primitive positive integer solution of a*x = degree*1; returns (x, degree).
std::pair<std::vector<int64_t>, int64_t> primitive_weights(const zmat& a,
                                                           const char* what) {
  const int m = static_cast<int>(a.size());
  zvec ones(m, 1);
  qvec s = solve(a, ones);
  mpz_class den_lcm = 1;
  for (const auto& v : s) {
    if (v <= 0) fail(errc::no_positive_weights, what);
    mpz_class l;
    mpz_lcm(l.get_mpz_t(), den_lcm.get_mpz_t(), v.get_den().get_mpz_t());
    den_lcm = l;
  }
  zvec w(m);
  mpz_class g = 0;
  for (int i = 0; i < m; ++i) {
    mpq_class scaled = s[i] * den_lcm;
    w[i] = scaled.get_num();  // denominator is 1 by construction
    mpz_class ng;
    mpz_gcd(ng.get_mpz_t(), g.get_mpz_t(), w[i].get_mpz_t());
    g = ng;
  }
  std::vector<int64_t> out(m);
  for (int i = 0; i < m; ++i) {
    mpz_class wi = w[i] / g;
    if (!wi.fits_slong_p()) fail(errc::too_large, "weight exceeds int64");
    out[i] = wi.get_si();
  }
  mpz_class deg = den_lcm / g;  // a * out = deg * 1 exactly
  if (!deg.fits_slong_p()) fail(errc::too_large, "degree exceeds int64");
  return {out, deg.get_si()};
}

struct row_shape {
  int nnz = 0;
  int v1 = -1, v2 = -1;      // nonzero columns, ascending
  int64_t e1 = 0, e2 = 0;    // their entries
};

row_shape shape_of(const std::vector<int64_t>& row) {
  row_shape s;
  for (int j = 0; j < static_cast<int>(row.size()); ++j) {
    if (row[j] == 0) continue;
    ++s.nnz;
    if (s.nnz == 1) {
      s.v1 = j;
      s.e1 = row[j];
    } else if (s.nnz == 2) {
      s.v2 = j;
      s.e2 = row[j];
    }
  }
  return s;
}

struct ownership {
  // For each variable: the row whose leading power it carries, the exponent
  // there, and the linked successor variable (-1 for a pure power).
  std::vector<int> row_of, next_of;
  std::vector<int64_t> exp_of;
};

// Assign every row a head variable (the one it contributes a power of) so
// that the link structure splits into cycles and pure-power-terminated
// paths.  Candidate heads per row are forced except for 2-variable rows with
// both entries 1; tiny backtracking resolves those.
bool assign_heads(const std::vector<row_shape>& shapes, int row, int m,
                  std::vector<int>& head, std::vector<bool>& taken) {
  if (row == m) return true;
  const row_shape& s = shapes[row];
  std::vector<std::pair<int, int>> candidates;  // (head variable, linked variable)
  if (s.nnz == 1) {
    if (s.e1 >= 2) candidates.push_back({s.v1, -1});
  } else if (s.nnz == 2) {
    if (s.e2 == 1) candidates.push_back({s.v1, s.v2});
    if (s.e1 == 1) candidates.push_back({s.v2, s.v1});
  }
  for (auto [v, w] : candidates) {
    if (taken[v]) continue;
    taken[v] = true;
    head[row] = v;
    if (assign_heads(shapes, row + 1, m, head, taken)) return true;
    taken[v] = false;
  }
  return false;
}

ownership resolve_ownership(const exponent_matrix& a) {
  const int m = a.size();
  std::vector<row_shape> shapes(m);
  for (int r = 0; r < m; ++r) {
    shapes[r] = shape_of(a.rows[r]);
    if (shapes[r].nnz == 0)
      fail(errc::not_decomposable, "zero monomial row");
    if (shapes[r].nnz > 2)
      fail(errc::not_decomposable,
           "monomial touches more than two variables");
    if (shapes[r].nnz == 1 && shapes[r].e1 < 2)
      fail(errc::not_decomposable, "bare linear monomial");
    if (shapes[r].nnz == 2 && shapes[r].e1 != 1 && shapes[r].e2 != 1)
      fail(errc::not_decomposable, "two-variable monomial without unit link");
  }
  std::vector<int> head(m, -1);
  std::vector<bool> taken(m, false);
  if (!assign_heads(shapes, 0, m, head, taken))
    fail(errc::not_decomposable, "no consistent head assignment");

  ownership own;
  own.row_of.assign(m, -1);
  own.next_of.assign(m, -1);
  own.exp_of.assign(m, 0);
  for (int r = 0; r < m; ++r) {
    const row_shape& s = shapes[r];
    int v = head[r];
    own.row_of[v] = r;
    if (s.nnz == 1) {
      own.exp_of[v] = s.e1;
    } else {
      own.exp_of[v] = (v == s.v1) ? s.e1 : s.e2;
      own.next_of[v] = (v == s.v1) ? s.v2 : s.v1;
    }
  }
  return own;
}

}  // namespace

exponent_matrix transpose(const exponent_matrix& a) {
  check_shape(a);
  const int m = a.size();
  exponent_matrix t;
  t.rows.assign(m, std::vector<int64_t>(m, 0));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) t.rows[j][i] = a.rows[i][j];
  return t;
}

std::string atom::to_string() const {
  static const char* names[] = {"Fermat", "Loop", "Chain"};
  std::ostringstream os;
  os << names[static_cast<int>(kind)] << '(';
  for (size_t i = 0; i < exponents.size(); ++i) {
    if (i) os << ',';
    os << exponents[i];
  }
  os << ')';
  return os.str();
}

decomposition decompose(const exponent_matrix& a) {
  check_shape(a);
  const int m = a.size();
  ownership own = resolve_ownership(a);

  // Follow links: in-degree > 1 cannot occur in a disjoint union of cycles
  // and pure-terminated paths.
  std::vector<int> indeg(m, 0);
  for (int v = 0; v < m; ++v)
    if (own.next_of[v] >= 0) ++indeg[own.next_of[v]];
  for (int v = 0; v < m; ++v)
    if (indeg[v] > 1) fail(errc::not_decomposable, "variable linked twice");

  std::vector<bool> used(m, false);
  std::vector<atom> atoms;

  auto make_atom = [&](atom_kind kind, const std::vector<int>& vars) {
    atom at;
    at.kind = kind;
    at.variables = vars;
    for (int v : vars) {
      at.exponents.push_back(own.exp_of[v]);
      at.source_rows.push_back(own.row_of[v]);
      used[v] = true;
    }
    atoms.push_back(std::move(at));
  };

  // Paths first: start from variables nobody links to, walk to a pure power.
  for (int start = 0; start < m; ++start) {
    if (indeg[start] != 0 || used[start]) continue;
    std::vector<int> vars;
    int v = start;
    while (true) {
      vars.push_back(v);
      int w = own.next_of[v];
      if (w < 0) break;  // pure power: chain tail (or lone Fermat)
      v = w;
      if (used[v] || static_cast<int>(vars.size()) > m)
        fail(errc::not_decomposable, "path runs into a cycle");
    }
    make_atom(vars.size() == 1 ? atom_kind::fermat : atom_kind::chain, vars);
  }
  // Remaining variables form link cycles.
  for (int start = 0; start < m; ++start) {
    if (used[start]) continue;
    std::vector<int> vars;
    int v = start;
    do {
      if (own.next_of[v] < 0)
        fail(errc::not_decomposable, "cycle interrupted by a pure power");
      vars.push_back(v);
      v = own.next_of[v];
    } while (v != start && static_cast<int>(vars.size()) <= m);
    if (v != start) fail(errc::not_decomposable, "broken link cycle");
    // Already rotated to the lowest variable: `start` is minimal among the
    // unused, and cycle members are only reachable from each other.
    make_atom(atom_kind::loop, vars);
  }

  std::sort(atoms.begin(), atoms.end(), [](const atom& x, const atom& y) {
    return *std::min_element(x.variables.begin(), x.variables.end()) <
           *std::min_element(y.variables.begin(), y.variables.end());
  });

  decomposition d;
  d.atoms = std::move(atoms);
  for (const atom& at : d.atoms)
    d.variable_order.insert(d.variable_order.end(), at.variables.begin(),
                            at.variables.end());
  return d;
}

exponent_matrix reassemble(const decomposition& d) {
  const int m = static_cast<int>(d.variable_order.size());
  exponent_matrix a;
  a.rows.assign(m, std::vector<int64_t>(m, 0));
  for (const atom& at : d.atoms) {
    const int k = at.length();
    for (int i = 0; i < k; ++i) {
      int r = at.source_rows[i];
      if (r < 0 || r >= m) fail(errc::invalid_argument, "bad source row");
      a.rows[r][at.variables[i]] += at.exponents[i];
      bool linked = (at.kind == atom_kind::loop) ||
                    (at.kind == atom_kind::chain && i + 1 < k);
      if (linked) a.rows[r][at.variables[(i + 1) % k]] += 1;
    }
  }
  return a;
}

validation_report validate(const exponent_matrix& a) {
  check_shape(a);
  const int m = a.size();
  validation_report rep;
  rep.determinant = det(to_zmat(a.rows));
  if (rep.determinant == 0) fail(errc::singular_matrix, "determinant is zero");
  auto [w, deg] = primitive_weights(to_zmat(a.rows), "no positive weight system");
  rep.primal_weights = std::move(w);
  rep.primal_degree = deg;
  decompose(a);  // throws errc::not_decomposable when the shape fails
  rep.invertible = true;
  rep.calabi_yau = true;
  for (const auto& row : a.rows) {
    int64_t sum = std::accumulate(row.begin(), row.end(), int64_t{0});
    if (sum != m) rep.calabi_yau = false;
  }
  return rep;
}

weight_data dual_weights(const exponent_matrix& a) {
  check_shape(a);
  if (det(to_zmat(a.rows)) == 0)
    fail(errc::singular_matrix, "determinant is zero");
  weight_data wd;
  auto [q, dt] = primitive_weights(to_zmat(transpose(a).rows),
                                   "transpose has no positive weights");
  wd.dual = std::move(q);
  wd.dual_degree = dt;
  auto [r, d] = primitive_weights(to_zmat(a.rows), "no positive weight system");
  wd.primal = std::move(r);
  wd.primal_degree = d;
  return wd;
}

pencil_spec make_pencil(const exponent_matrix& a, int64_t coefficient,
                        std::string name) {
  check_shape(a);
  const int m = a.size();
  for (const auto& row : a.rows)
    if (std::accumulate(row.begin(), row.end(), int64_t{0}) != m)
      fail(errc::not_calabi_yau, "row sums must all equal the variable count");
  if (coefficient <= 0) fail(errc::invalid_argument, "coefficient must be positive");
  pencil_spec p;
  p.a = a;
  p.coefficient = coefficient;
  p.name = std::move(name);
  return p;
}

pencil_spec make_pencil(const exponent_matrix& a, pencil_normalization norm,
                        std::string name) {
  int64_t c = (norm == pencil_normalization::ambient)
                  ? a.size()
                  : dual_weights(a).dual_degree;
  return make_pencil(a, c, std::move(name));
}

namespace {

// Unimodular U with q^T U = (gcd(q), 0, ..., 0); q primitive makes that
// leading entry 1.
zmat weight_splitting_basis(const std::vector<int64_t>& q) {
  const int m = static_cast<int>(q.size());
  zmat u(m, zvec(m, 0));
  for (int i = 0; i < m; ++i) u[i][i] = 1;
  zvec c(m);
  for (int i = 0; i < m; ++i) c[i] = q[i];
  for (int j = 1; j < m; ++j) {
    if (c[j] == 0) continue;
    mpz_class g, s, t;
    mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), c[0].get_mpz_t(),
               c[j].get_mpz_t());
    mpz_class p0 = c[0] / g, pj = c[j] / g;
    for (int i = 0; i < m; ++i) {
      mpz_class col0 = u[i][0] * s + u[i][j] * t;
      mpz_class colj = u[i][0] * (-pj) + u[i][j] * p0;
      u[i][0] = col0;
      u[i][j] = colj;
    }
    c[0] = g;
    c[j] = 0;
  }
  return u;
}

// Invariant factors (> 1) of the subgroup of (Q/Z)^m spanned by the given
// rational columns: scale everything by the common denominator den and
// compare the integer lattice (columns + den*Z^m) against den*Z^m.
zvec torsion_invariants(const zmat& scaled_columns, const mpz_class& den,
                        int m) {
  zmat gens(m);
  for (int i = 0; i < m; ++i) {
    gens[i] = scaled_columns[i];
    for (int j = 0; j < m; ++j) {
      gens[i].push_back(i == j ? den : mpz_class(0));
    }
  }
  zmat dz(m, zvec(m, 0));
  for (int i = 0; i < m; ++i) dz[i][i] = den;
  return quotient_invariants(column_lattice_basis(gens), dz);
}

}  // namespace

group_data symmetry_groups(const exponent_matrix& a) {
  check_shape(a);
  const int m = a.size();
  zmat az = to_zmat(a.rows);
  mpz_class dt = det(az);
  if (dt == 0) fail(errc::singular_matrix, "determinant is zero");
  mpz_class den = abs(dt);

  // den * A^{-1}, column by column (exact; denominators divide det).
  zmat winv(m, zvec(m));
  for (int j = 0; j < m; ++j) {
    zvec e(m, 0);
    e[j] = den;
    qvec col = solve(az, e);
    for (int i = 0; i < m; ++i) {
      if (col[i].get_den() != 1)
        fail(errc::singular_matrix, "inverse column not integral after scaling");
      winv[i][j] = col[i].get_num();
    }
  }

  group_data g;
  g.aut_order = den;
  g.aut = torsion_invariants(winv, den, m);

  weight_data wd = dual_weights(a);

  // Product-one subgroup: the coordinate sum of A^{-1} v is (q . v) / d^T,
  // so restrict v to the sublattice where the dual weights pair to 0 mod d^T.
  zmat u = weight_splitting_basis(wd.dual);
  for (int i = 0; i < m; ++i) u[i][0] *= wd.dual_degree;
  zmat sl_cols(m, zvec(m, 0));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k) sl_cols[i][j] += winv[i][k] * u[k][j];
  zmat sl_basis = column_lattice_basis([&] {
    zmat cols(m);
    for (int i = 0; i < m; ++i) {
      cols[i] = sl_cols[i];
      for (int j = 0; j < m; ++j) cols[i].push_back(i == j ? den : mpz_class(0));
    }
    return cols;
  }());
  zmat dz(m, zvec(m, 0));
  for (int i = 0; i < m; ++i) dz[i][i] = den;
  g.sl = quotient_invariants(sl_basis, dz);

  // Trivially-acting subgroup: generated by A^{-1} * (1,...,1)
  // = primal weights / primal degree.
  zmat j_cols(m, zvec(m + 1));
  for (int i = 0; i < m; ++i) {
    mpz_class s = 0;
    for (int k = 0; k < m; ++k) s += winv[i][k];
    j_cols[i][0] = s;
    for (int j = 0; j < m; ++j) j_cols[i][j + 1] = (i == j) ? den : mpz_class(0);
  }
  zmat j_basis = column_lattice_basis(j_cols);
  g.j = quotient_invariants(j_basis, dz);
  g.sl_mod_j = quotient_invariants(sl_basis, j_basis);

  g.j_generator.resize(m);
  for (int i = 0; i < m; ++i)
    g.j_generator[i] = mpq_class(wd.primal[i], wd.primal_degree);
  return g;
}

loop_fermat_group klein_mukai_order(int n) {
  if (n < 1) fail(errc::invalid_argument, "need n >= 1");
  loop_fermat_group out;
  mpz_class nn;
  mpz_ui_pow_ui(nn.get_mpz_t(), static_cast<unsigned long>(n),
                static_cast<unsigned long>(n));
  out.m = nn + ((n % 2 == 0) ? -1 : 1);
  if (out.m % (n + 1) != 0)
    fail(errc::invalid_argument, "order not divisible by n+1");
  out.faithful_order = out.m / (n + 1);

  auto reduce = [&](mpz_class v) {
    mpz_class r = v % out.m;
    if (r < 0) r += out.m;
    return r;
  };
  mpz_class e = 1;
  for (int i = 0; i < n; ++i) {
    out.generator_exponents.push_back(reduce(e));
    e *= -n;
  }
  mpz_class last = out.faithful_order;
  if (n % 2 == 1) last = -last;
  out.generator_exponents.push_back(reduce(last));
  for (const mpz_class& v : out.generator_exponents)
    out.faithful_generator.push_back(reduce(v * (n + 1)));
  return out;
}

}  // namespace pz

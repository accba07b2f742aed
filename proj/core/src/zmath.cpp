#include "pencilzeta/zmath.hpp"

#include <algorithm>
#include <cstdlib>

#include "pencilzeta/errors.hpp"

namespace pz {

zmat to_zmat(const std::vector<std::vector<int64_t>>& a) {
  zmat m(a.size());
  for (size_t i = 0; i < a.size(); ++i) {
    m[i].reserve(a[i].size());
    for (int64_t v : a[i]) m[i].emplace_back(static_cast<long>(v));
  }
  return m;
}

qmat to_qmat(const zmat& a) {
  qmat m(a.size());
  for (size_t i = 0; i < a.size(); ++i) {
    m[i].reserve(a[i].size());
    for (const auto& v : a[i]) m[i].emplace_back(v);
  }
  return m;
}

mpz_class det(zmat a) {
  const size_t n = a.size();
  for (auto& row : a)
    if (row.size() != n) fail(errc::invalid_argument, "det needs a square matrix");
  if (n == 0) return 1;
  // Bareiss fraction-free elimination: every division below is exact.
  mpz_class prev(1);
  int sign = 1;
  for (size_t k = 0; k + 1 < n; ++k) {
    if (a[k][k] == 0) {
      size_t s = k + 1;
      while (s < n && a[s][k] == 0) ++s;
      if (s == n) return 0;
      std::swap(a[k], a[s]);
      sign = -sign;
    }
    for (size_t i = k + 1; i < n; ++i) {
      for (size_t j = k + 1; j < n; ++j) {
        a[i][j] = a[k][k] * a[i][j] - a[i][k] * a[k][j];
        mpz_divexact(a[i][j].get_mpz_t(), a[i][j].get_mpz_t(), prev.get_mpz_t());
      }
      a[i][k] = 0;
    }
    prev = a[k][k];
  }
  return sign > 0 ? a[n - 1][n - 1] : mpz_class(-a[n - 1][n - 1]);
}

namespace {

void strip_row(zvec& r) {
  mpz_class g(0);
  for (const auto& x : r) {
    g = gcd(g, x);
    if (g == 1) return;
  }
  if (g > 1)
    for (auto& x : r) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), g.get_mpz_t());
}

}  // namespace

int rank_z(zmat a) {
  const size_t rows = a.size();
  if (rows == 0) return 0;
  const size_t cols = a[0].size();
  size_t r = 0;
  for (size_t c = 0; c < cols && r < rows; ++c) {
    size_t piv = r;
    while (piv < rows && a[piv][c] == 0) ++piv;
    if (piv == rows) continue;
    std::swap(a[r], a[piv]);
    for (size_t i = r + 1; i < rows; ++i) {
      if (a[i][c] == 0) continue;
      mpz_class f1 = a[r][c], f2 = a[i][c];
      mpz_class g = gcd(f1, f2);
      mpz_divexact(f1.get_mpz_t(), f1.get_mpz_t(), g.get_mpz_t());
      mpz_divexact(f2.get_mpz_t(), f2.get_mpz_t(), g.get_mpz_t());
      for (size_t j = c; j < cols; ++j) a[i][j] = f1 * a[i][j] - f2 * a[r][j];
      strip_row(a[i]);
    }
    ++r;
  }
  return static_cast<int>(r);
}

int rank_q(qmat a) {
  const size_t rows = a.size();
  if (rows == 0) return 0;
  const size_t cols = a[0].size();
  size_t r = 0;
  for (size_t c = 0; c < cols && r < rows; ++c) {
    size_t piv = r;
    while (piv < rows && a[piv][c] == 0) ++piv;
    if (piv == rows) continue;
    std::swap(a[r], a[piv]);
    for (size_t i = r + 1; i < rows; ++i) {
      if (a[i][c] == 0) continue;
      mpq_class f = a[i][c] / a[r][c];
      for (size_t j = c; j < cols; ++j) a[i][j] -= f * a[r][j];
    }
    ++r;
  }
  return static_cast<int>(r);
}

qvec solve(const zmat& a, const zvec& b) {
  const size_t n = a.size();
  if (n == 0 || b.size() != n) fail(errc::invalid_argument, "solve: bad dimensions");
  qmat m(n);
  for (size_t i = 0; i < n; ++i) {
    if (a[i].size() != n) fail(errc::invalid_argument, "solve: square matrix required");
    m[i].reserve(n + 1);
    for (const auto& v : a[i]) m[i].emplace_back(v);
    m[i].emplace_back(b[i]);
  }
  for (size_t c = 0; c < n; ++c) {
    size_t piv = c;
    while (piv < n && m[piv][c] == 0) ++piv;
    if (piv == n) fail(errc::singular_matrix, "solve: matrix is singular");
    std::swap(m[c], m[piv]);
    for (size_t i = 0; i < n; ++i) {
      if (i == c || m[i][c] == 0) continue;
      mpq_class f = m[i][c] / m[c][c];
      for (size_t j = c; j <= n; ++j) m[i][j] -= f * m[c][j];
    }
  }
  qvec x(n);
  for (size_t i = 0; i < n; ++i) x[i] = m[i][n] / m[i][i];
  return x;
}

std::vector<qvec> nullspace(const qmat& a0) {
  qmat a = a0;
  const size_t rows = a.size();
  const size_t cols = rows ? a[0].size() : 0;
  std::vector<size_t> pivot_col;
  size_t r = 0;
  for (size_t c = 0; c < cols && r < rows; ++c) {
    size_t piv = r;
    while (piv < rows && a[piv][c] == 0) ++piv;
    if (piv == rows) continue;
    std::swap(a[r], a[piv]);
    mpq_class d = a[r][c];
    for (size_t j = c; j < cols; ++j) a[r][j] /= d;
    for (size_t i = 0; i < rows; ++i) {
      if (i == r || a[i][c] == 0) continue;
      mpq_class f = a[i][c];
      for (size_t j = c; j < cols; ++j) a[i][j] -= f * a[r][j];
    }
    pivot_col.push_back(c);
    ++r;
  }
  std::vector<bool> is_pivot(cols, false);
  for (size_t c : pivot_col) is_pivot[c] = true;
  std::vector<qvec> basis;
  for (size_t c = 0; c < cols; ++c) {
    if (is_pivot[c]) continue;
    qvec v(cols, mpq_class(0));
    v[c] = 1;
    for (size_t i = 0; i < pivot_col.size(); ++i) v[pivot_col[i]] = -a[i][c];
    basis.push_back(std::move(v));
  }
  return basis;
}

zvec smith_invariants(zmat a) {
  const size_t rows = a.size();
  const size_t cols = rows ? a[0].size() : 0;
  const size_t n = std::min(rows, cols);
  zvec diag(n, mpz_class(0));
  size_t t = 0;
  while (t < n) {
    // locate a nonzero entry of minimal magnitude in the trailing block
    bool found = false;
    size_t pi = t, pj = t;
    mpz_class best;
    for (size_t i = t; i < rows; ++i)
      for (size_t j = t; j < cols; ++j)
        if (a[i][j] != 0) {
          mpz_class v = abs(a[i][j]);
          if (!found || v < best) {
            best = v;
            pi = i;
            pj = j;
            found = true;
          }
        }
    if (!found) break;
    std::swap(a[t], a[pi]);
    for (size_t i = t; i < rows; ++i) std::swap(a[i][t], a[i][pj]);

    bool clean = true;
    for (size_t i = t + 1; i < rows; ++i) {
      if (a[i][t] == 0) continue;
      mpz_class q = a[i][t] / a[t][t];
      for (size_t j = t; j < cols; ++j) a[i][j] -= q * a[t][j];
      if (a[i][t] != 0) clean = false;
    }
    for (size_t j = t + 1; j < cols; ++j) {
      if (a[t][j] == 0) continue;
      mpz_class q = a[t][j] / a[t][t];
      for (size_t i = t; i < rows; ++i) a[i][j] -= q * a[i][t];
      if (a[t][j] != 0) clean = false;
    }
    if (!clean) continue;  // smaller remainder appeared; re-pick the pivot

    // pivot must divide the whole trailing block for the divisibility chain
    bool divides = true;
    for (size_t i = t + 1; i < rows && divides; ++i)
      for (size_t j = t + 1; j < cols && divides; ++j)
        if (a[i][j] % a[t][t] != 0) {
          for (size_t jj = t; jj < cols; ++jj) a[t][jj] += a[i][jj];
          divides = false;
        }
    if (!divides) continue;

    diag[t] = abs(a[t][t]);
    ++t;
  }
  return diag;
}

zmat column_lattice_basis(zmat a) {
  const size_t m = a.size();
  if (m == 0) fail(errc::empty_input, "column_lattice_basis: no rows");
  const size_t k = a[0].size();
  size_t t = 0;
  for (size_t i = 0; i < m; ++i) {
    size_t j = t;
    while (j < k && a[i][j] == 0) ++j;
    if (j == k) fail(errc::singular_matrix, "column span has rank < m");
    for (size_t s = 0; s < m; ++s) std::swap(a[s][t], a[s][j]);
    for (size_t j2 = t + 1; j2 < k; ++j2) {
      if (a[i][j2] == 0) continue;
      mpz_class g, u, v;
      mpz_gcdext(g.get_mpz_t(), u.get_mpz_t(), v.get_mpz_t(), a[i][t].get_mpz_t(),
                 a[i][j2].get_mpz_t());
      mpz_class p = a[i][t] / g, q = a[i][j2] / g;
      for (size_t s = 0; s < m; ++s) {
        mpz_class ct = u * a[s][t] + v * a[s][j2];
        mpz_class cj = p * a[s][j2] - q * a[s][t];
        a[s][t] = ct;
        a[s][j2] = cj;
      }
    }
    if (a[i][t] < 0)
      for (size_t s = 0; s < m; ++s) a[s][t] = -a[s][t];
    // reduce earlier columns against the new pivot to keep entries small
    for (size_t j2 = 0; j2 < t; ++j2) {
      if (a[i][j2] == 0) continue;
      mpz_class q;
      mpz_fdiv_q(q.get_mpz_t(), a[i][j2].get_mpz_t(), a[i][t].get_mpz_t());
      if (q != 0)
        for (size_t s = 0; s < m; ++s) a[s][j2] -= q * a[s][t];
    }
    ++t;
  }
  zmat basis(m, zvec(m));
  for (size_t i = 0; i < m; ++i)
    for (size_t j = 0; j < m; ++j) basis[i][j] = a[i][j];
  return basis;
}

zvec quotient_invariants(const zmat& outer, const zmat& inner) {
  const size_t m = outer.size();
  if (m == 0 || inner.size() != m)
    fail(errc::invalid_argument, "quotient_invariants: dimension mismatch");
  // X = outer^{-1} * inner must be integral when L_inner is a sublattice.
  zmat x(m, zvec(m));
  for (size_t c = 0; c < m; ++c) {
    zvec col(m);
    for (size_t i = 0; i < m; ++i) col[i] = inner[i][c];
    qvec y = solve(outer, col);
    for (size_t i = 0; i < m; ++i) {
      if (y[i].get_den() != 1)
        fail(errc::invalid_argument, "quotient_invariants: inner is not a sublattice of outer");
      x[i][c] = y[i].get_num();
    }
  }
  zvec d = smith_invariants(std::move(x));
  zvec out;
  for (const auto& v : d) {
    if (v == 0) fail(errc::singular_matrix, "quotient_invariants: inner lattice not full rank");
    if (v > 1) out.push_back(v);
  }
  return out;
}

namespace {

template <typename Vec>
void strip_poly(Vec& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

template <typename Vec>
Vec poly_mul_impl(const Vec& a, const Vec& b) {
  if (a.empty() || b.empty()) return {};
  Vec out(a.size() + b.size() - 1);
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  }
  strip_poly(out);
  return out;
}

template <typename Vec, typename Scalar>
Scalar poly_eval_impl(const Vec& p, const Scalar& x) {
  Scalar acc = 0;
  for (size_t i = p.size(); i-- > 0;) acc = acc * x + p[i];
  return acc;
}

}  // namespace

zvec poly_mul(const zvec& a, const zvec& b) { return poly_mul_impl(a, b); }
qvec poly_mul(const qvec& a, const qvec& b) { return poly_mul_impl(a, b); }

zvec poly_divexact(const zvec& a, const zvec& b) {
  zvec num = a, den = b;
  strip_poly(num);
  strip_poly(den);
  if (den.empty()) fail(errc::singular_matrix, "poly_divexact: division by zero polynomial");
  if (num.empty()) return {};
  if (num.size() < den.size())
    fail(errc::invalid_argument, "poly_divexact: not divisible (degree)");
  zvec quot(num.size() - den.size() + 1);
  for (size_t i = quot.size(); i-- > 0;) {
    mpz_class q, r;
    mpz_tdiv_qr(q.get_mpz_t(), r.get_mpz_t(), num[i + den.size() - 1].get_mpz_t(),
                den.back().get_mpz_t());
    if (r != 0) fail(errc::invalid_argument, "poly_divexact: not divisible (leading)");
    quot[i] = q;
    for (size_t j = 0; j < den.size(); ++j) num[i + j] -= q * den[j];
  }
  for (const auto& c : num)
    if (c != 0) fail(errc::invalid_argument, "poly_divexact: nonzero remainder");
  strip_poly(quot);
  return quot;
}

mpz_class poly_eval(const zvec& p, const mpz_class& x) { return poly_eval_impl(p, x); }
mpq_class poly_eval(const qvec& p, const mpq_class& x) { return poly_eval_impl(p, x); }

qvec poly_from_roots(const qvec& roots) {
  qvec out{1};
  for (const auto& r : roots) out = poly_mul(out, qvec{-r, 1});
  return out;
}

}  // namespace pz

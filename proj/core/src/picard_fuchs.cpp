#include "pencilzeta/picard_fuchs.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>

#include "pencilzeta/errors.hpp"

namespace pz {

namespace {

void check_weights(const std::vector<long long>& w) {
  if (w.empty()) fail(errc::empty_input, "weight vector is empty");
  long long g = 0;
  for (long long q : w) {
    if (q <= 0) fail(errc::invalid_argument, "weights must be positive");
    g = std::gcd(g, q);
  }
  if (g != 1) fail(errc::invalid_argument, "weights must have gcd 1");
  long long sum = 0;
  for (long long q : w) sum += q;
  if (sum > 1'000'000) fail(errc::too_large, "total degree too large");
}

mpq_class frac(long long num, long long den) {
  mpq_class x(static_cast<long>(num), static_cast<long>(den));
  x.canonicalize();
  return x;
}

// Multiset difference b - a, where every element of a occurs in b.
qvec multiset_minus(const qvec& b, const qvec& a) {
  qvec out;
  size_t i = 0;
  for (const auto& x : b) {
    if (i < a.size() && x == a[i]) {
      ++i;
      continue;
    }
    out.push_back(x);
  }
  if (i != a.size())
    fail(errc::internal_check, "multiset_minus: subtrahend not contained in minuend");
  return out;
}

}  // namespace

hypergeometric_data hg_data(const std::vector<long long>& weights) {
  check_weights(weights);
  long long d = std::accumulate(weights.begin(), weights.end(), 0LL);

  hypergeometric_data hg;
  hg.weights = weights;
  hg.degree = static_cast<unsigned>(d);
  for (long long j = 0; j < d; ++j) hg.alpha.push_back(frac(j, d));
  for (long long q : weights)
    for (long long j = 0; j < q; ++j) hg.beta.push_back(frac(j, q));
  std::sort(hg.alpha.begin(), hg.alpha.end());
  std::sort(hg.beta.begin(), hg.beta.end());

  // shared = values of alpha that occur in beta (alpha has no repeats).
  for (const auto& a : hg.alpha)
    if (std::binary_search(hg.beta.begin(), hg.beta.end(), a)) hg.shared.push_back(a);

  for (const auto& a : hg.alpha)
    if (!std::binary_search(hg.shared.begin(), hg.shared.end(), a))
      hg.numerator.push_back(a);

  qvec beta_rest = multiset_minus(hg.beta, hg.shared);
  hg.order = static_cast<unsigned>(hg.degree - hg.shared.size());
  if (beta_rest.size() != hg.order)
    fail(errc::internal_check, "hypergeometric bookkeeping: #(beta minus shared) != order");
  if (hg.numerator.size() != hg.order)
    fail(errc::internal_check, "hypergeometric bookkeeping: #(alpha minus shared) != order");
  if (!beta_rest.empty()) {
    if (beta_rest.front() != 0)
      fail(errc::internal_check, "hypergeometric bookkeeping: no zero left in beta");
    hg.denominator.assign(beta_rest.begin() + 1, beta_rest.end());
  }
  return hg;
}

hypergeometric_data hg_data(const weight_data& w) {
  return hg_data(std::vector<long long>(w.dual.begin(), w.dual.end()));
}

pf_operator_data pf_operator(const std::vector<long long>& weights) {
  hypergeometric_data hg = hg_data(weights);
  if (weights.size() < 2)
    fail(errc::invalid_argument, "pencil operator needs at least two variables");

  qvec beta_rest = hg.denominator;
  beta_rest.insert(beta_rest.begin(), mpq_class(0));

  pf_operator_data op;
  op.order = hg.order;
  op.degree = hg.degree;
  op.scalar = 1;
  for (long long q : weights) {
    mpz_class base(static_cast<long>(q)), pw;
    mpz_pow_ui(pw.get_mpz_t(), base.get_mpz_t(), static_cast<unsigned long>(q));
    op.scalar *= pw;
  }

  const mpq_class d(static_cast<long>(hg.degree));
  qvec roots;
  for (const auto& b : beta_rest) roots.push_back(b);          // B(theta) roots b
  op.theta_poly = poly_from_roots(roots);
  roots.clear();
  for (const auto& a : hg.numerator) roots.push_back(-a);      // A(theta) roots -a
  op.theta_z_poly = poly_from_roots(roots);
  roots.clear();
  for (const auto& b : beta_rest) roots.push_back(-b * d);     // P(delta) roots -b*d
  op.delta_psi_poly = poly_from_roots(roots);
  roots.clear();
  for (const auto& a : hg.numerator) roots.push_back(a * d);   // M(delta) roots a*d
  op.delta_const_poly = poly_from_roots(roots);

  // Consistency between the two presentations: substituting
  // theta = -delta/d into B(theta) - z A(theta) and clearing
  // (-d)^order * scalar * psi^degree must reproduce the psi-form, i.e.
  //   P(delta) = (-d)^order B(-delta/d),  M(delta) = (-d)^order A(-delta/d).
  for (unsigned k = 0; k <= op.order; ++k) {
    mpq_class scale;
    mpz_class dz(static_cast<long>(hg.degree)), pw;
    mpz_pow_ui(pw.get_mpz_t(), dz.get_mpz_t(), op.order - k);
    scale = mpq_class(pw) * ((op.order - k) % 2 == 1 ? -1 : 1);
    if (op.delta_psi_poly[k] != op.theta_poly[k] * scale ||
        op.delta_const_poly[k] != op.theta_z_poly[k] * scale)
      fail(errc::internal_check, "operator presentations disagree");
  }
  return op;
}

std::vector<mpq_class> series_coefficients(const hypergeometric_data& hg, unsigned count) {
  if (hg.order == 0)
    fail(errc::invalid_argument, "series requires an operator of positive order");
  std::vector<mpq_class> c(count + 1);
  c[0] = 1;
  for (unsigned k = 1; k <= count; ++k) {
    mpq_class num = 1, den = static_cast<long>(k);
    for (const auto& a : hg.numerator) num *= a + static_cast<long>(k - 1);
    // Lower parameter for entry b is 1 - b, so (1-b) + (k-1) = k - b.
    for (const auto& b : hg.denominator) den *= static_cast<long>(k) - b;
    if (den == 0) fail(errc::internal_check, "vanishing lower Pochhammer factor");
    c[k] = c[k - 1] * num / den;
  }

  // Annihilation self-test against the expanded operator polynomials:
  // B(k) c_k = A(k-1) c_{k-1}, where B runs over beta minus shared
  // (denominator plus the removed zero) and A over the numerator list.
  qvec beta_rest = hg.denominator;
  if (hg.order > 0) beta_rest.insert(beta_rest.begin(), mpq_class(0));
  qvec broots, aroots;
  for (const auto& b : beta_rest) broots.push_back(b);
  for (const auto& a : hg.numerator) aroots.push_back(-a);
  qvec bpoly = poly_from_roots(broots), apoly = poly_from_roots(aroots);
  for (unsigned k = 1; k <= count; ++k) {
    mpq_class lhs = poly_eval(bpoly, mpq_class(static_cast<long>(k))) * c[k];
    mpq_class rhs = poly_eval(apoly, mpq_class(static_cast<long>(k - 1))) * c[k - 1];
    if (lhs != rhs) fail(errc::internal_check, "series does not satisfy the operator");
  }
  return c;
}

zvec cyclotomic_polynomial(unsigned k) {
  static std::map<unsigned, zvec> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  if (k == 0) fail(errc::invalid_argument, "cyclotomic index must be positive");
  auto it = cache.find(k);
  if (it != cache.end()) return it->second;

  std::function<zvec(unsigned)> compute = [&](unsigned m) -> zvec {
    auto hit = cache.find(m);
    if (hit != cache.end()) return hit->second;
    zvec xm_minus_1(m + 1);
    xm_minus_1[0] = -1;
    xm_minus_1[m] = 1;
    zvec quot = xm_minus_1;
    for (unsigned div = 1; div < m; ++div)
      if (m % div == 0) quot = poly_divexact(quot, compute(div));
    cache.emplace(m, quot);
    return quot;
  };
  return compute(k);
}

cyclotomic_descent_data cyclotomic_descent(const std::vector<long long>& weights) {
  check_weights(weights);
  hypergeometric_data hg = hg_data(weights);
  const long long d = hg.degree;
  const size_t n1 = weights.size();

  cyclotomic_descent_data out;
  for (long long q : weights)
    out.shared_gcds.push_back(static_cast<unsigned>(std::gcd(q, d)));

  for (long long k = 2; k <= d; ++k) {
    if (d % k != 0) continue;
    bool divides_some_r = false;
    for (unsigned r : out.shared_gcds)
      if (r % k == 0) divides_some_r = true;
    if (!divides_some_r) out.numerator_orders.push_back(static_cast<unsigned>(k));
  }

  out.denominator_orders.resize(n1);
  for (size_t i = 0; i < n1; ++i) {
    const long long qi = weights[i];
    const unsigned ri = out.shared_gcds[i];
    for (long long k = 2; k <= qi; ++k) {
      if (qi % k != 0) continue;
      if (ri % k != 0) {
        out.denominator_orders[i].push_back(static_cast<unsigned>(k));
        continue;
      }
      // k divides r_i; include it when it also divides r_ij for some j < i.
      for (size_t j = 0; j < i; ++j) {
        unsigned rij = std::gcd(ri, out.shared_gcds[j]);
        if (rij % k == 0) {
          out.denominator_orders[i].push_back(static_cast<unsigned>(k));
          break;
        }
      }
    }
  }

  out.g_alpha = {1};
  for (unsigned k : out.numerator_orders)
    out.g_alpha = poly_mul(out.g_alpha, cyclotomic_polynomial(k));

  out.g_beta = {1};
  const zvec x_minus_1 = {-1, 1};
  for (size_t i = 0; i + 1 < n1; ++i) out.g_beta = poly_mul(out.g_beta, x_minus_1);
  for (const auto& ki : out.denominator_orders)
    for (unsigned k : ki) out.g_beta = poly_mul(out.g_beta, cyclotomic_polynomial(k));

  if (out.g_alpha.size() != hg.order + 1)
    fail(errc::internal_check, "deg g_alpha != operator order");
  if (out.g_beta.size() != hg.order + 1)
    fail(errc::internal_check, "deg g_beta != #(beta minus shared)");
  return out;
}

irreducibility_report irreducibility_certificate(const hypergeometric_data& hg) {
  irreducibility_report rep;
  rep.irreducible = true;
  // All parameters live in [0,1), so two differ by an integer iff their
  // reductions to [0,1) coincide.
  auto reduce = [](const mpq_class& x) {
    mpz_class num = x.get_num(), den = x.get_den(), r;
    mpz_fdiv_r(r.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    mpq_class out(r, den);
    out.canonicalize();
    return out;
  };
  for (const auto& a : hg.numerator) {
    mpq_class ar = reduce(a);
    for (const auto& b : hg.denominator) {
      if (ar == reduce(b)) {
        rep.irreducible = false;
        std::ostringstream os;
        os << "numerator parameter " << ar.get_str()
           << " coincides with a denominator parameter modulo integers";
        rep.explanation = os.str();
        return rep;
      }
    }
  }
  rep.explanation =
      "numerator and denominator parameters are pairwise distinct modulo integers";
  return rep;
}

namespace {

// Overflow-checked 64-bit polynomial accumulator for the exhaustive scan.
struct small_poly {
  std::vector<long long> c{1};

  void mul(const std::vector<long long>& f) {
    std::vector<long long> out(c.size() + f.size() - 1, 0);
    for (size_t i = 0; i < c.size(); ++i) {
      if (c[i] == 0) continue;
      for (size_t j = 0; j < f.size(); ++j) {
        long long prod, sum;
        if (__builtin_mul_overflow(c[i], f[j], &prod) ||
            __builtin_add_overflow(out[i + j], prod, &sum))
          fail(errc::internal_check, "scan coefficient overflow");
        out[i + j] = sum;
      }
    }
    c = std::move(out);
  }
};

}  // namespace

cyclotomic_scan_result scan_cyclotomic(unsigned max_degree) {
  if (max_degree == 0) fail(errc::invalid_argument, "max_degree must be positive");
  if (max_degree > 120) fail(errc::too_large, "scan bound too large");
  const unsigned N = max_degree;

  // Precomputed tables for 1..N.
  std::vector<unsigned> phi(N + 1, 0);
  for (unsigned i = 1; i <= N; ++i) phi[i] = i;
  for (unsigned i = 2; i <= N; ++i) {
    if (phi[i] == i)  // i prime
      for (unsigned j = i; j <= N; j += i) phi[j] -= phi[j] / i;
  }
  std::vector<std::vector<unsigned>> divisors(N + 1);  // divisors > 1
  for (unsigned k = 2; k <= N; ++k)
    for (unsigned m = k; m <= N; m += k) divisors[m].push_back(k);
  std::vector<std::vector<long long>> cyclo(N + 1);
  for (unsigned k = 1; k <= N; ++k) {
    zvec f = cyclotomic_polynomial(k);
    for (const auto& coef : f) {
      if (!coef.fits_slong_p()) fail(errc::internal_check, "cyclotomic coefficient overflow");
      cyclo[k].push_back(coef.get_si());
    }
  }

  cyclotomic_scan_result result;
  std::vector<unsigned> parts;
  parts.reserve(N);

  // Visits every nonempty multiset of positive integers with sum <= N,
  // represented as a non-increasing sequence; g = gcd of the parts.
  std::function<void(unsigned, unsigned, unsigned)> walk = [&](unsigned max_part,
                                                               unsigned remaining,
                                                               unsigned g) {
    for (unsigned a = std::min(max_part, remaining); a >= 1; --a) {
      parts.push_back(a);
      unsigned g2 = std::gcd(g, a);
      if (g2 == 1) {
        // Process this weight vector.
        unsigned d = N - remaining + a;
        // numerator side: K = {k > 1 : k | d, no part divisible by k}.
        unsigned shared_phi = phi[1];  // k = 1 always shared (zero parameters)
        small_poly ga;
        unsigned ga_deg_expected = 0;
        for (unsigned k : divisors[d]) {
          bool in_beta = false;
          for (unsigned p : parts)
            if (p % k == 0) {
              in_beta = true;
              break;
            }
          if (in_beta)
            shared_phi += phi[k];
          else {
            ga.mul(cyclo[k]);
            ga_deg_expected += phi[k];
          }
        }
        unsigned order = d - shared_phi;
        if (ga_deg_expected != order || ga.c.size() != order + 1)
          fail(errc::internal_check, "scan: deg g_alpha != order");
        // denominator side per the gcd recipe.
        small_poly gb;
        for (size_t rep = 1; rep < parts.size(); ++rep) gb.mul({-1, 1});
        unsigned gb_deg = static_cast<unsigned>(parts.size()) - 1;
        for (size_t i = 0; i < parts.size(); ++i) {
          unsigned qi = parts[i];
          unsigned ri = std::gcd(qi, d);
          for (unsigned k : divisors[qi]) {
            bool use = false;
            if (ri % k != 0)
              use = true;
            else
              for (size_t j = 0; j < i && !use; ++j)
                if (std::gcd(ri, std::gcd(parts[j], d)) % k == 0) use = true;
            if (use) {
              gb.mul(cyclo[k]);
              gb_deg += phi[k];
            }
          }
        }
        if (gb_deg != order || gb.c.size() != order + 1)
          fail(errc::internal_check, "scan: deg g_beta != order");
        for (long long coef : ga.c)
          result.max_abs_coefficient = std::max(result.max_abs_coefficient, std::abs(coef));
        for (long long coef : gb.c)
          result.max_abs_coefficient = std::max(result.max_abs_coefficient, std::abs(coef));
        ++result.vectors_scanned;
      }
      if (remaining > a) walk(a, remaining - a, g2);
      parts.pop_back();
    }
  };
  walk(N, N, 0);
  return result;
}

}  // namespace pz

#include "pencilzeta/field.hpp"

#include <algorithm>
#include <string>

#include "pencilzeta/errors.hpp"

namespace pz {

namespace {

bool is_prime_u64(uint64_t n) {
  if (n < 2) return false;
  for (uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

std::vector<uint64_t> prime_factors(uint64_t n) {
  std::vector<uint64_t> out;
  for (uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

// dense-code <-> digit helpers; digits are base-p, least significant first
void decode(uint64_t code, uint64_t p, uint32_t r, uint32_t* d) {
  for (uint32_t i = 0; i < r; ++i) {
    d[i] = static_cast<uint32_t>(code % p);
    code /= p;
  }
}

uint64_t encode(const uint32_t* d, uint64_t p, uint32_t r) {
  uint64_t code = 0;
  for (uint32_t i = r; i-- > 0;) code = code * p + d[i];
  return code;
}

// polynomial remainder of a (len na, little-endian) mod m (monic, degree r)
void poly_mod(uint32_t* a, uint32_t na, const std::vector<uint32_t>& m, uint32_t r, uint64_t p) {
  for (uint32_t i = na; i-- > r;) {
    uint64_t c = a[i];
    if (c == 0) continue;
    a[i] = 0;
    for (uint32_t j = 0; j < r; ++j) {
      uint64_t sub = (c * m[j]) % p;
      uint64_t cur = a[i - r + j];
      a[i - r + j] = static_cast<uint32_t>((cur + p - sub) % p);
    }
  }
}

// true iff the monic polynomial f (len r+1, f[r] == 1) has no monic divisor
// of degree in [1, r/2]
bool irreducible_by_trial_division(const std::vector<uint32_t>& f, uint32_t r, uint64_t p) {
  if (r == 1) return true;
  std::vector<uint32_t> rem(r + 1), g;
  for (uint32_t dg = 1; dg <= r / 2; ++dg) {
    uint64_t count = 1;
    for (uint32_t i = 0; i < dg; ++i) count *= p;
    g.assign(dg + 1, 0);
    g[dg] = 1;
    for (uint64_t gc = 0; gc < count; ++gc) {
      decode(gc, p, dg, g.data());
      // long division of f by g, in place on a copy
      rem.assign(f.begin(), f.end());
      for (uint32_t i = r + 1; i-- > dg;) {
        uint64_t c = rem[i];
        if (c == 0) continue;
        rem[i] = 0;
        for (uint32_t j = 0; j < dg; ++j) {
          uint64_t sub = (c * g[j]) % p;
          rem[i - dg + j] = static_cast<uint32_t>((rem[i - dg + j] + p - sub) % p);
        }
      }
      bool zero = true;
      for (uint32_t i = 0; i < dg; ++i)
        if (rem[i] != 0) {
          zero = false;
          break;
        }
      if (zero) return false;
    }
  }
  return true;
}

}  // namespace

fq fq::make(uint64_t p, uint32_t r, uint64_t table_limit) {
  if (!is_prime_u64(p)) fail(errc::not_prime, "p = " + std::to_string(p));
  if (r < 1) fail(errc::invalid_argument, "extension degree must be >= 1");

  // q must fit the 32-bit code space; extensions additionally capped so that
  // digit convolutions stay in uint64.
  uint64_t q = 1;
  for (uint32_t i = 0; i < r; ++i) {
    if (q > (uint64_t(1) << 31) / p) fail(errc::too_large, "p^r exceeds the supported code space");
    q *= p;
  }
  if (r >= 2 && q > (uint64_t(1) << 26))
    fail(errc::too_large, "extension fields supported up to 2^26 elements");

  fq F;
  F.p_ = p;
  F.r_ = r;
  F.q_ = q;

  if (r == 1) {
    F.modulus_ = {0, 1};
  } else {
    std::vector<uint32_t> f(r + 1, 0);
    f[r] = 1;
    bool found = false;
    for (uint64_t code = 0; code < q; ++code) {
      decode(code, p, r, f.data());
      if (irreducible_by_trial_division(f, r, p)) {
        found = true;
        break;
      }
    }
    if (!found) fail(errc::unsupported, "no irreducible modulus found");  // cannot happen
    F.modulus_ = f;
  }

  // smallest-code generator of the cyclic group F_q^*
  auto factors = prime_factors(q - 1);
  for (uint64_t cand = 1; cand < q; ++cand) {
    auto c = static_cast<elem>(cand);
    bool ok = true;
    for (uint64_t ell : factors)
      if (F.pow_generic(c, (q - 1) / ell) == 1) {
        ok = false;
        break;
      }
    if (ok) {
      F.generator_ = c;
      break;
    }
  }
  if (F.generator_ == 0 && q > 2) fail(errc::unsupported, "no generator found");  // cannot happen
  if (q == 2) F.generator_ = 1;

  if (q <= table_limit) {
    F.exp_.resize(q - 1);
    F.log_.assign(q, 0);
    F.exp_[0] = 1;
    for (uint64_t i = 1; i < q - 1; ++i) F.exp_[i] = F.mul_generic(F.exp_[i - 1], F.generator_);
    for (uint64_t i = 0; i < q - 1; ++i) F.log_[F.exp_[i]] = static_cast<uint32_t>(i);
    F.zech_.assign(q - 1, zech_none);
    for (uint64_t k = 0; k < q - 1; ++k) {
      elem y = F.add_generic(F.exp_[k], 1);
      if (y != 0) F.zech_[k] = F.log_[y];
    }
  }
  return F;
}

fq::elem fq::add_generic(elem a, elem b) const {
  if (p_ == 2) return a ^ b;
  uint32_t da[32], db[32];
  decode(a, p_, r_, da);
  decode(b, p_, r_, db);
  for (uint32_t i = 0; i < r_; ++i) {
    da[i] += db[i];
    if (da[i] >= p_) da[i] -= static_cast<uint32_t>(p_);
  }
  return static_cast<elem>(encode(da, p_, r_));
}

fq::elem fq::neg_generic(elem a) const {
  if (p_ == 2) return a;
  uint32_t d[32];
  decode(a, p_, r_, d);
  for (uint32_t i = 0; i < r_; ++i)
    if (d[i] != 0) d[i] = static_cast<uint32_t>(p_) - d[i];
  return static_cast<elem>(encode(d, p_, r_));
}

fq::elem fq::mul_generic(elem a, elem b) const {
  if (a == 0 || b == 0) return 0;
  if (r_ == 1) return static_cast<elem>((uint64_t(a) * b) % p_);
  uint32_t da[32], db[32], prod[63];
  decode(a, p_, r_, da);
  decode(b, p_, r_, db);
  uint64_t acc[63] = {0};
  for (uint32_t i = 0; i < r_; ++i) {
    if (da[i] == 0) continue;
    for (uint32_t j = 0; j < r_; ++j) acc[i + j] += uint64_t(da[i]) * db[j];
  }
  for (uint32_t i = 0; i < 2 * r_ - 1; ++i) prod[i] = static_cast<uint32_t>(acc[i] % p_);
  poly_mod(prod, 2 * r_ - 1, modulus_, r_, p_);
  return static_cast<elem>(encode(prod, p_, r_));
}

fq::elem fq::pow_generic(elem a, uint64_t e) const {
  elem result = 1, base = a;
  while (e) {
    if (e & 1) result = mul_generic(result, base);
    base = mul_generic(base, base);
    e >>= 1;
  }
  return result;
}

fq::elem fq::add(elem a, elem b) const {
  if (p_ == 2) return a ^ b;
  if (has_tables()) {
    if (a == 0) return b;
    if (b == 0) return a;
    uint32_t la = log_[a], lb = log_[b];
    uint32_t d = lb >= la ? lb - la : lb + static_cast<uint32_t>(q_ - 1) - la;
    uint32_t z = zech_[d];
    if (z == zech_none) return 0;
    uint32_t s = la + z;
    if (s >= q_ - 1) s -= static_cast<uint32_t>(q_ - 1);
    return exp_[s];
  }
  return add_generic(a, b);
}

fq::elem fq::neg(elem a) const { return neg_generic(a); }

fq::elem fq::mul(elem a, elem b) const {
  if (has_tables()) {
    if (a == 0 || b == 0) return 0;
    uint32_t s = log_[a] + log_[b];
    if (s >= q_ - 1) s -= static_cast<uint32_t>(q_ - 1);
    return exp_[s];
  }
  return mul_generic(a, b);
}

fq::elem fq::inv(elem a) const {
  if (a == 0) fail(errc::invalid_argument, "inverse of zero");
  if (has_tables()) {
    uint32_t l = log_[a];
    return l == 0 ? a : exp_[q_ - 1 - l];
  }
  return pow_generic(a, q_ - 2);
}

fq::elem fq::pow(elem a, uint64_t e) const {
  if (a == 0) return e == 0 ? 1 : 0;
  if (has_tables()) {
    uint64_t l = (uint64_t(log_[a]) * (e % (q_ - 1))) % (q_ - 1);
    return exp_[l];
  }
  return pow_generic(a, e);
}

fq::elem fq::from_int(int64_t k) const {
  int64_t m = k % static_cast<int64_t>(p_);
  if (m < 0) m += static_cast<int64_t>(p_);
  return static_cast<elem>(m);
}

uint32_t fq::absolute_trace(elem a) const {
  elem acc = a, t = a;
  for (uint32_t i = 1; i < r_; ++i) {
    acc = frobenius(acc);
    t = add(t, acc);
  }
  // the trace lands in the prime subfield, i.e. t is a constant polynomial
  if (t >= p_) fail(errc::unsupported, "trace left the prime subfield");  // cannot happen
  return t;
}

bool fq::is_square(elem a) const {
  if (a == 0) return true;
  if (p_ == 2) return true;  // squaring is bijective in characteristic 2
  if (has_tables()) return (log_[a] & 1u) == 0;
  return pow_generic(a, (q_ - 1) / 2) == 1;
}

fq::elem fq::sqrt(elem a) const {
  if (a == 0) return 0;
  if (has_tables()) {
    uint32_t l = log_[a];
    if (p_ != 2 && (l & 1u)) return static_cast<elem>(q_);
    // odd q-1 (p = 2): halve the exponent in Z/(q-1)
    if (p_ == 2) {
      uint64_t half = (l % 2 == 0) ? l / 2 : (l + q_ - 1) / 2;
      return exp_[half % (q_ - 1)];
    }
    return exp_[l / 2];
  }
  for (uint64_t y = 0; y < q_; ++y)
    if (mul_generic(static_cast<elem>(y), static_cast<elem>(y)) == a) return static_cast<elem>(y);
  return static_cast<elem>(q_);
}

std::vector<uint32_t> fq::to_coeffs(elem a) const {
  std::vector<uint32_t> c(r_);
  decode(a, p_, r_, c.data());
  return c;
}

fq::elem fq::from_coeffs(const std::vector<uint32_t>& c) const {
  if (c.size() != r_) fail(errc::invalid_argument, "coefficient vector has wrong length");
  for (uint32_t v : c)
    if (v >= p_) fail(errc::invalid_argument, "coefficient out of range");
  return static_cast<elem>(encode(c.data(), p_, r_));
}

std::vector<fq::elem> fq::embedding(const fq& sub, const fq& big) {
  if (sub.p() != big.p() || big.r() % sub.r() != 0)
    fail(errc::invalid_argument, "no embedding: incompatible fields");
  // first root (code order) of sub's modulus inside big
  elem root = 0;
  bool found = false;
  for (uint64_t z = 0; z < big.q(); ++z) {
    elem acc = 0, zp = 1;
    auto ze = static_cast<elem>(z);
    for (uint32_t i = 0; i <= sub.r(); ++i) {
      acc = big.add(acc, big.mul_int(zp, sub.modulus()[i]));
      if (i < sub.r()) zp = big.mul(zp, ze);
    }
    if (acc == 0) {
      root = ze;
      found = true;
      break;
    }
  }
  if (!found) fail(errc::unsupported, "embedding root not found");  // cannot happen
  std::vector<elem> map(sub.q());
  for (uint64_t a = 0; a < sub.q(); ++a) {
    auto c = sub.to_coeffs(static_cast<elem>(a));
    elem acc = 0;
    for (uint32_t i = sub.r(); i-- > 0;) acc = big.add(big.mul(acc, root), big.from_int(c[i]));
    map[a] = acc;
  }
  return map;
}

}  // namespace pz

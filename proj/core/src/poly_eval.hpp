#pragma once

// Internal enumeration helpers shared by the counting and character-sum
// translation units.  Not installed.

#include <pencilzeta/errors.hpp>
#include <pencilzeta/expsum.hpp>
#include <pencilzeta/field.hpp>

#include <cstdint>
#include <vector>

namespace pz::detail {

// Per-term power tables over a fixed field: tables[t] lists, for every
// variable the term touches with positive exponent, the map code -> code^e.
// Evaluation is then one table lookup per touched variable, a product, and
// one multiplication by the coefficient.
class poly_evaluator {
 public:
  poly_evaluator(const fq& field, const fq_poly& poly) : field_(&field) {
    const auto q = field.q();
    terms_.reserve(poly.terms.size());
    for (const fq_term& t : poly.terms) {
      term_entry e;
      e.coefficient = t.coefficient;
      for (unsigned v = 0; v < poly.nvars; ++v) {
        if (v < t.exponents.size() && t.exponents[v] > 0) {
          var_table vt;
          vt.var = v;
          vt.powers.resize(q);
          for (uint64_t code = 0; code < q; ++code)
            vt.powers[code] =
                field.pow(static_cast<fq::elem>(code), t.exponents[v]);
          e.vars.push_back(std::move(vt));
        }
      }
      terms_.push_back(std::move(e));
    }
  }

  fq::elem evaluate(const std::vector<fq::elem>& point) const {
    fq::elem sum = 0;
    for (const term_entry& t : terms_) {
      fq::elem prod = t.coefficient;
      for (const var_table& vt : t.vars) {
        prod = field_->mul(prod, vt.powers[point[vt.var]]);
        if (prod == 0) break;
      }
      sum = field_->add(sum, prod);
    }
    return sum;
  }

 private:
  struct var_table {
    unsigned var = 0;
    std::vector<fq::elem> powers;
  };
  struct term_entry {
    fq::elem coefficient = 0;
    std::vector<var_table> vars;
  };

  const fq* field_;
  std::vector<term_entry> terms_;
};

// Odometer over a product domain: coordinate i runs over codes
// [lo[i], q).  step() advances to the next point, returning false after the
// last one.  Domains with any empty coordinate range are rejected upstream
// (lo[i] < q always holds here since lo is 0 or 1 and q >= 2).
class domain_odometer {
 public:
  domain_odometer(uint64_t q, std::vector<fq::elem> lo)
      : q_(q), lo_(std::move(lo)), point_(lo_.begin(), lo_.end()) {}

  const std::vector<fq::elem>& point() const { return point_; }

  bool step() {
    for (size_t i = point_.size(); i-- > 0;) {
      if (++point_[i] < q_) return true;
      point_[i] = lo_[i];
    }
    return false;
  }

 private:
  uint64_t q_;
  std::vector<fq::elem> lo_;
  std::vector<fq::elem> point_;
};

// (q - toric_ones)^{#lo==1} * q^{#lo==0} with saturation at 2^64 - 1, for
// budget checks before enumeration starts.
inline unsigned long long domain_size(uint64_t q,
                                      const std::vector<fq::elem>& lo) {
  unsigned __int128 total = 1;
  for (fq::elem l : lo) {
    total *= (q - l);
    if (total > ~0ULL) return ~0ULL;
  }
  return static_cast<unsigned long long>(total);
}

}  // namespace pz::detail

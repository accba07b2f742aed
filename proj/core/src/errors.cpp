#include "pencilzeta/errors.hpp"

namespace pz {

const char* errc_name(errc k) {
  switch (k) {
    case errc::not_prime: return "not_prime";
    case errc::budget_exceeded: return "budget_exceeded";
    case errc::singular_matrix: return "singular_matrix";
    case errc::not_decomposable: return "not_decomposable";
    case errc::no_positive_weights: return "no_positive_weights";
    case errc::not_calabi_yau: return "not_calabi_yau";
    case errc::unsupported: return "unsupported";
    case errc::too_large: return "too_large";
    case errc::bad_fiber: return "bad_fiber";
    case errc::bad_prime: return "bad_prime";
    case errc::ambiguous_r_factor: return "ambiguous_r_factor";
    case errc::non_integral_trace: return "non_integral_trace";
    case errc::trace_bound: return "trace_bound";
    case errc::singular_fiber: return "singular_fiber";
    case errc::empty_input: return "empty_input";
    case errc::invalid_argument: return "invalid_argument";
    case errc::internal_check: return "internal_check";
  }
  return "unknown";
}

void fail(errc k, const std::string& what) { throw error(k, what); }

}  // namespace pz

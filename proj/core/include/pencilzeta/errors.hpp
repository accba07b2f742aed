#pragma once

#include <stdexcept>
#include <string>

namespace pz {

// Failure taxonomy shared across the library.  Each value names the violated
// precondition or invariant, not the call site that noticed it.
enum class errc {
  not_prime,
  budget_exceeded,
  singular_matrix,
  not_decomposable,
  no_positive_weights,
  not_calabi_yau,
  unsupported,
  too_large,
  bad_fiber,
  bad_prime,
  ambiguous_r_factor,
  non_integral_trace,
  trace_bound,
  singular_fiber,
  empty_input,
  invalid_argument,
  internal_check,
};

const char* errc_name(errc k);

struct error : std::runtime_error {
  errc kind;
  error(errc k, const std::string& what)
      : std::runtime_error(std::string(errc_name(k)) + ": " + what), kind(k) {}
};

[[noreturn]] void fail(errc k, const std::string& what);

}  // namespace pz

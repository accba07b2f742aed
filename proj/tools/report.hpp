#pragma once

// JSON emission helpers shared by the command-line tools.
//
// Output contract: the payload document on stdout is byte-identical across
// identical invocations — fixed key order (nlohmann::ordered_json preserves
// insertion order), exact numerics (64-bit integers natively, arbitrary
// precision integers and rationals as decimal strings), and no timing or
// timestamps in the body.  Timing goes to stderr as a separate one-line
// metadata document.

#include <pencilzeta/errors.hpp>
#include <pencilzeta/expsum.hpp>
#include <pencilzeta/zmath.hpp>

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include "json.hpp"

namespace pzcli {

using ojson = nlohmann::ordered_json;

inline std::string str(const mpz_class& z) { return z.get_str(); }
inline std::string str(const mpq_class& q) { return q.get_str(); }

inline ojson jarr(const pz::zvec& v) {
  ojson a = ojson::array();
  for (const mpz_class& z : v) a.push_back(str(z));
  return a;
}

inline ojson jarr(const pz::qvec& v) {
  ojson a = ojson::array();
  for (const mpq_class& q : v) a.push_back(str(q));
  return a;
}

template <typename T>
ojson jarr(const std::vector<T>& v) {
  ojson a = ojson::array();
  for (const T& x : v) a.push_back(x);
  return a;
}

// An exact cyclotomic-ring value: plain integer string when the element is
// rational, otherwise the reduced coordinate vector on 1, zeta, ...,
// zeta^{p-2}.
inline ojson jcyc(const pz::cyclotomic_integer& c) {
  if (c.is_integer()) return std::to_string(c.as_integer());
  ojson o;
  o["coords"] = jarr(c.coords());
  return o;
}

class timer {
 public:
  timer() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

// Payload to stdout, timing metadata to stderr.
inline void emit(const ojson& payload, const timer& t) {
  std::fputs(payload.dump(2).c_str(), stdout);
  std::fputc('\n', stdout);
  ojson meta;
  meta["elapsed_seconds"] = t.seconds();
  std::fputs(meta.dump().c_str(), stderr);
  std::fputc('\n', stderr);
}

// One NDJSON record (scan streams print one line per cell).
inline void emit_line(const ojson& record) {
  std::fputs(record.dump().c_str(), stdout);
  std::fputc('\n', stdout);
}

// Deterministic error payload; exit code 1 is applied by the caller.
inline ojson error_payload(const pz::error& e) {
  ojson o;
  o["error"]["kind"] = pz::errc_name(e.kind);
  o["error"]["message"] = e.what();
  return o;
}

}  // namespace pzcli

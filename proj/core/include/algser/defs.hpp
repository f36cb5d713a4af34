#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace algser {

using Int = mpz_class;
using Rat = mpq_class;

// Every failure mode the toolkit distinguishes.  Callers switch on the code;
// the message carries human-readable context.
enum class Errc {
  duplicate_generator,
  non_prime_characteristic,
  not_monic,
  bad_inseparable_shape,
  reducible_witness,
  rebasing_failed,
  not_separable,
  not_purely_inseparable,
  lambda_not_minimal,
  infinite_truncation,
  ramified_root,
  conjugates_unavailable,
  budget_too_small,
  oracle_stuck,
  no_power_series_branch,
  value_exceeds_budget,
  not_applicable,
  parse_error,
  validation_error,
  internal,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& msg)
      : std::runtime_error(std::string(errc_name(code)) + ": " + msg), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& msg) { throw Error(code, msg); }

inline void require(bool cond, Errc code, const std::string& msg) {
  if (!cond) fail(code, msg);
}

// p^e as an exact integer.
inline Int pow_int(const Int& base, unsigned long e) {
  Int r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
  return r;
}

inline Int pow_uint(unsigned long base, unsigned long e) { return pow_int(Int(base), e); }

std::string rat_to_string(const Rat& q);

}  // namespace algser

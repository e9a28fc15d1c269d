#pragma once

// Shared error taxonomy and small utilities. Every fatal condition in the
// library is reported through one of these exception types so that callers
// (and the CLI) can map outcomes to distinct exit classes.

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace wittcount {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed external input (instance files, box stanzas, poly text).
struct ParseError : Error {
  using Error::Error;
};

// A documented precondition or construction invariant was violated.
struct InvariantError : Error {
  using Error::Error;
};

// A hard size or enumeration budget was exceeded.
struct BudgetError : Error {
  using Error::Error;
};

// The two independent counters disagree. Always a bug, never recoverable.
struct OracleMismatchError : Error {
  using Error::Error;
};

// A machine-verified theorem instance failed its asserted conclusion.
// Treated as a fatal internal error, on par with OracleMismatchError.
struct RefutationError : Error {
  using Error::Error;
};

inline bool is_prime_u64(unsigned long long v) {
  if (v < 2) return false;
  for (unsigned long long d = 2; d * d <= v; ++d) {
    if (v % d == 0) return false;
  }
  return true;
}

// Checked power for small machine integers; throws on overflow.
inline long long ipow_checked(long long base, int exp, const char* what) {
  long long r = 1;
  for (int i = 0; i < exp; ++i) {
    if (base != 0 && r > (1LL << 62) / (base < 0 ? -base : base)) {
      throw BudgetError(std::string(what) + ": integer power overflow");
    }
    r *= base;
  }
  return r;
}

}  // namespace wittcount

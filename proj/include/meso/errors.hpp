#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace meso {

// Resource ceilings for completion, enumeration, and basis computations.
// degree is the primary knob (iterative deepening multiplies it); the other
// limits are hard safety rails.
struct Budget {
  std::int64_t degree = 16;
  std::size_t max_classes = 200000;
  std::size_t max_rules = 200000;
  std::size_t max_pairs = 4000000;

  Budget scaled(std::int64_t factor) const {
    Budget b = *this;
    b.degree *= factor;
    return b;
  }
};

struct BudgetExceeded : std::runtime_error {
  explicit BudgetExceeded(const std::string& what) : std::runtime_error(what) {}
};

struct InputError : std::runtime_error {
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

struct VerificationFailure : std::runtime_error {
  explicit VerificationFailure(const std::string& what) : std::runtime_error(what) {}
};

// Raised when a cross-validated pair of classification routines disagrees, or
// when a structural fact the algorithms rely on (binomial closure, confluence)
// fails; always a bug, never a user error.
struct InternalInconsistency : std::logic_error {
  explicit InternalInconsistency(const std::string& what) : std::logic_error(what) {}
};

// Raised when a character extension needs a root the current coefficient field
// lacks. cyclotomic_order is the smallest m with the root in Q(zeta_m), or 0
// when no cyclotomic field contains it.
struct MissingRoot : std::runtime_error {
  std::uint64_t cyclotomic_order;
  MissingRoot(const std::string& what, std::uint64_t m)
      : std::runtime_error(what), cyclotomic_order(m) {}
};

}  // namespace meso

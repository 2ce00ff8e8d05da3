#pragma once

#include <stdexcept>
#include <string>

namespace eqfrob {

// Malformed input: bad model file, mismatched shapes, violated preconditions.
class InputError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// A model file parsed but failed a structural validator check.
class ValidationError : public InputError {
public:
  ValidationError(std::string invariant, std::string witness)
      : InputError("validation failed: " + invariant +
                   (witness.empty() ? std::string{} : " (witness: " + witness + ")")),
        invariant_(std::move(invariant)), witness_(std::move(witness)) {}

  const std::string& invariant() const noexcept { return invariant_; }
  const std::string& witness() const noexcept { return witness_; }

private:
  std::string invariant_;
  std::string witness_;
};

// A product or capped operator left the truncated model.
class CapExceeded : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Internal consistency failure; signals a bug or a model outside the
// hypotheses of the construction.
class MathError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace eqfrob

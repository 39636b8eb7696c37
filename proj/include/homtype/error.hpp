#pragma once

#include <stdexcept>
#include <string>

namespace homtype {

/// Process exit codes shared by the CLI and the error hierarchy below.
enum class ExitCode : int {
  success = 0,
  refusal = 2,    // precondition or theorem-hypothesis refusal
  violation = 3,  // an invariant or certified inequality failed
  io = 4,         // IO or schema problem
};

class Error : public std::runtime_error {
 public:
  Error(ExitCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ExitCode code() const noexcept { return code_; }

 private:
  ExitCode code_;
};

class PreconditionError : public Error {
 public:
  explicit PreconditionError(const std::string& what) : Error(ExitCode::refusal, what) {}
};

/// The hypothesis of a theorem does not hold for the supplied input.
class HypothesisRefusal : public PreconditionError {
 public:
  explicit HypothesisRefusal(const std::string& what) : PreconditionError(what) {}
};

/// Raised by the exact cover oracle when an instance exceeds its search limits.
class LimitExceeded : public PreconditionError {
 public:
  explicit LimitExceeded(const std::string& what) : PreconditionError(what) {}
};

class InvariantViolation : public Error {
 public:
  explicit InvariantViolation(const std::string& what) : Error(ExitCode::violation, what) {}
};

enum class SpaceErrorCode {
  schema,
  unknown_field,
  duplicate_id,
  non_dense_ids,
  nonpositive_weight,
  nonzero_diagonal,
  nonpositive_distance,
  asymmetric,
  size_mismatch,
  bad_magic,
  bad_version,
  non_finite,
  io,
};

const char* to_string(SpaceErrorCode code) noexcept;

/// Validation or parse failure for space, matrix, measure or subset files.
class SpaceError : public Error {
 public:
  SpaceError(SpaceErrorCode code, const std::string& what)
      : Error(ExitCode::io, std::string(to_string(code)) + ": " + what), space_code_(code) {}
  SpaceErrorCode space_code() const noexcept { return space_code_; }

 private:
  SpaceErrorCode space_code_;
};

}  // namespace homtype

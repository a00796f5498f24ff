#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace qsuggest {

// Bad user input: malformed files, failed validation, unknown ids.
// The CLI maps these to exit status 1.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A requested file does not exist.
class NotFoundError : public InputError {
 public:
  using InputError::InputError;
};

// A persisted artifact has an unexpected schema or format version.
class SchemaError : public InputError {
 public:
  using InputError::InputError;
};

// A persisted artifact failed its fingerprint check.
class IntegrityError : public InputError {
 public:
  using InputError::InputError;
};

// An id that is not present in the active index.
class LookupError : public InputError {
 public:
  using InputError::InputError;
};

// Error carrying one line per offending record; the what() string joins them.
class ReportError : public InputError {
 public:
  ReportError(const std::string& headline, std::vector<std::string> problems);

  const std::vector<std::string>& problems() const noexcept { return problems_; }

 private:
  std::vector<std::string> problems_;
};

// A precondition or internal invariant was broken by the caller or by us.
// The CLI maps these to exit status 2.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace qsuggest

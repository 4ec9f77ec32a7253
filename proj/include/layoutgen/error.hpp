#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace layoutgen {

enum class ErrorKind {
  InvalidInput,
  InvalidState,
  EmptyCandidate,
  NoValidCandidate,
  AbsentMetric,
  ProviderFailure,
  DataError,
};

std::string_view to_string(ErrorKind kind);

/// Every failure surfaced by the library carries one of the kinds above so
/// callers (and the CLI exit-code mapping) can branch on it.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace layoutgen

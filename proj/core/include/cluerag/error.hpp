#pragma once

#include <stdexcept>
#include <string>

namespace cluerag {

// Base class for all library failures. Subclasses indicate which layer the
// failure originated in so callers can distinguish bad input from bad state.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed input data: corpus files, fixture files, config values.
class ParseError : public Error {
 public:
  explicit ParseError(const std::string& what) : Error(what) {}
};

// Filesystem trouble: missing files, short reads, checksum mismatches.
class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(what) {}
};

// A remote provider could not be reached or kept returning errors after the
// configured retry budget was exhausted.
class ProviderError : public Error {
 public:
  explicit ProviderError(const std::string& what) : Error(what) {}
};

// Internal invariant violated; indicates a bug, not bad input.
class InvariantError : public Error {
 public:
  explicit InvariantError(const std::string& what) : Error(what) {}
};

}  // namespace cluerag

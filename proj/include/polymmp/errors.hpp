#pragma once

#include <stdexcept>
#include <string>

namespace polymmp {

/** Malformed input document (bad JSON, missing fields, wrong shapes). */
class SchemaError : public std::runtime_error {
 public:
  explicit SchemaError(const std::string& what) : std::runtime_error(what) {}
};

/** Structurally valid input that violates a domain invariant. */
class InvariantError : public std::runtime_error {
 public:
  explicit InvariantError(const std::string& what) : std::runtime_error(what) {}
};

/** Divisor data that does not define an ample divisor on the given fan. */
class AmpleError : public std::runtime_error {
 public:
  explicit AmpleError(const std::string& what) : std::runtime_error(what) {}
};

/** A cross-check that theory guarantees must hold has failed. */
class InternalError : public std::logic_error {
 public:
  explicit InternalError(const std::string& what) : std::logic_error(what) {}
};

inline void internal_check(bool ok, const std::string& what) {
  if (!ok) throw InternalError(what);
}

}  // namespace polymmp

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace bz {

inline constexpr const char* kVersion = "0.3.0";

enum class ErrorKind {
  InvalidArgument,
  Domain,
  Convergence,
  Io,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool ok, ErrorKind kind, const std::string& what) {
  if (!ok) fail(kind, what);
}

using Vec = std::vector<double>;

}  // namespace bz

#pragma once

#include <stdexcept>
#include <string>

namespace fbbm {

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Invalid grid parameters or mismatched grids between operands.
class GridError : public Error {
 public:
  explicit GridError(const std::string& msg) : Error(msg) {}
};

/// Out-of-range numeric parameter passed to a module operation.
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& msg) : Error(msg) {}
};

/// Non-finite state or runaway amplitude during time integration.
class BlowUpError : public Error {
 public:
  BlowUpError(const std::string& msg, double t) : Error(msg), time_(t) {}
  double time() const { return time_; }

 private:
  double time_;
};

/// Fixed-point or fitting procedure failed to produce a usable answer.
class ConvergenceError : public Error {
 public:
  explicit ConvergenceError(const std::string& msg) : Error(msg) {}
};

}  // namespace fbbm

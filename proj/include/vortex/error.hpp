#pragma once

#include <stdexcept>
#include <string>

namespace vortex {

/// Bad input: invalid parameters, mismatched grids, malformed test fields.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An input file could not be opened.
class FileNotFound : public std::runtime_error {
 public:
  explicit FileNotFound(std::string path)
      : std::runtime_error("cannot open " + path), path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

/// A nonlinear or eigenvalue iteration did not converge.
class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, double last_residual, std::string state = {})
      : std::runtime_error(what), last_residual_(last_residual), state_(std::move(state)) {}

  double last_residual() const noexcept { return last_residual_; }
  /// Free-form description of where the solver gave up (continuation stage, step size).
  const std::string& state() const noexcept { return state_; }

 private:
  double last_residual_;
  std::string state_;
};

}  // namespace vortex

#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace gpe {

/// Raised when an input violates a documented precondition. `field()` names
/// the offending parameter so front ends can point at it.
class ValidationError : public std::invalid_argument
{
 public:
  ValidationError(std::string field, const std::string& what)
      : std::invalid_argument(field + ": " + what), field_(std::move(field))
  {
  }

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// The integrated state left the regime the solver can represent
/// (e.g. focusing blow-up detected by the H^1 guard).
class DivergenceError : public std::runtime_error
{
 public:
  DivergenceError(double time, double norm, const std::string& what)
      : std::runtime_error(what), time_(time), norm_(norm)
  {
  }

  double time() const noexcept { return time_; }
  double norm() const noexcept { return norm_; }

 private:
  double time_;
  double norm_;
};

/// Fixed-point iteration failed to reach its tolerance.
class ConvergenceError : public std::runtime_error
{
 public:
  ConvergenceError(int iterations, double last_ratio, const std::string& what)
      : std::runtime_error(what), iterations_(iterations), last_ratio_(last_ratio)
  {
  }

  int iterations() const noexcept { return iterations_; }
  double last_ratio() const noexcept { return last_ratio_; }

 private:
  int iterations_;
  double last_ratio_;
};

/// A file could not be read or written.
class IoError : public std::runtime_error
{
 public:
  IoError(std::string path, const std::string& what)
      : std::runtime_error(path + ": " + what), path_(std::move(path))
  {
  }

  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

}  // namespace gpe

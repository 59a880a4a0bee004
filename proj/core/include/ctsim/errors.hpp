#pragma once

#include <stdexcept>
#include <string>

namespace ctsim {

// Error taxonomy mirrors the CLI exit-code contract:
//   ConfigError -> 1, SolverError -> 2, NumericalAbort -> 3.
// Soft conditions (stabilization, wraparound, degenerate fits) are carried as
// warning flags on results instead of exceptions.

class ConfigError : public std::runtime_error {
public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

class SolverError : public std::runtime_error {
public:
  explicit SolverError(const std::string& what, double best_residual = -1.0)
      : std::runtime_error(what), best_residual(best_residual) {}
  double best_residual;
};

class NumericalAbort : public std::runtime_error {
public:
  explicit NumericalAbort(const std::string& what, double t)
      : std::runtime_error(what), time(t) {}
  double time;
};

} // namespace ctsim

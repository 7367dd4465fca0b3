#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace tps {

// Error categories map onto CLI exit codes: config 2, convergence 3, io 4.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class InvalidInput : public Error {
 public:
  explicit InvalidInput(const std::string& msg) : Error(msg) {}
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& msg) : Error(msg) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& msg) : Error(msg) {}
};

// Carries the residual history of a failed limit or solver iteration.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& msg, std::vector<double> residuals = {})
      : Error(msg), residual_history(std::move(residuals)) {}
  std::vector<double> residual_history;
};

}  // namespace tps

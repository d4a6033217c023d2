#pragma once

#include <stdexcept>
#include <string>

namespace condreg {

// Root of everything the library throws on bad input or failed runs.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, long row = -1) : Error(what), row_(row) {}
  long row() const { return row_; }

 private:
  long row_;
};

class ValidationError : public Error {
 public:
  ValidationError(const std::string& what, long row = -1) : Error(what), row_(row) {}
  long row() const { return row_; }

 private:
  long row_;
};

// Bad parameter combinations: k > n, r_final >= r_init, t_est = 0, ...
class ParameterError : public Error {
 public:
  using Error::Error;
};

class GenerationError : public Error {
 public:
  using Error::Error;
};

// Every term was pruned away.
class EmptyModelError : public Error {
 public:
  using Error::Error;
};

// Box-simplex of the neighbor problem is empty (mu too large for the term sizes).
class ConfigurationError : public Error {
 public:
  using Error::Error;
};

class DegenerateInstanceError : public Error {
 public:
  using Error::Error;
};

class EvaluationError : public Error {
 public:
  using Error::Error;
};

class SelectionError : public Error {
 public:
  SelectionError(const std::string& what, double best_coverage)
      : Error(what), best_coverage_(best_coverage) {}
  double best_coverage() const { return best_coverage_; }

 private:
  double best_coverage_;
};

}  // namespace condreg

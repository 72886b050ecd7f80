#pragma once

#include <stdexcept>
#include <string>

namespace gridred {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input text; message carries the 1-based line number when known.
class ParseError : public Error {
 public:
  using Error::Error;
  ParseError(const std::string& msg, int line)
      : Error("line " + std::to_string(line) + ": " + msg), line_(line) {}
  int line() const { return line_; }

 private:
  int line_ = -1;
};

// A parsed case violates a model invariant (duplicate ids, islands, bad signs).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Singular or structurally infeasible linear system (islanded network,
// floating eliminated subnetwork).
class StructuralError : public Error {
 public:
  using Error::Error;
};

// Argument outside its documented domain (rank out of 1..N, k out of range).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Total conflict in the evidence combination (normalization denominator zero).
class ConflictError : public Error {
 public:
  using Error::Error;
};

// Usable inputs that lack the data a computation needs (e.g. no dispatch).
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace gridred

#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace warpverify {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Mismatched vector/matrix/chart dimensions.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// A quantity left its admissible region (f <= 0, gamma <= 1, point outside box).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Invalid construction parameters or unusable inputs.
class ParameterError : public Error {
 public:
  using Error::Error;
};

// Non-finite intermediate values.
class NumericError : public Error {
 public:
  using Error::Error;
};

// Direction with eps-norm >= 0 cannot be scaled to eps-norm -1.
class NotNormalizableError : public Error {
 public:
  using Error::Error;
};

// Degenerate metric or vanishing denominator; carries the offending determinant
// (or denominator value) when known.
class SingularityError : public Error {
 public:
  explicit SingularityError(const std::string& what, double determinant = 0.0)
      : Error(what), determinant_(determinant) {}
  double determinant() const { return determinant_; }

 private:
  double determinant_;
};

// Schema violations found while parsing a spec file; all issues are collected,
// not just the first.
class SpecParseError : public Error {
 public:
  explicit SpecParseError(std::vector<std::string> issues)
      : Error(join(issues)), issues_(std::move(issues)) {}
  const std::vector<std::string>& issues() const { return issues_; }

 private:
  static std::string join(const std::vector<std::string>& issues) {
    std::string out = "spec validation failed:";
    for (const auto& s : issues) {
      out += "\n  - ";
      out += s;
    }
    return out;
  }
  std::vector<std::string> issues_;
};

}  // namespace warpverify

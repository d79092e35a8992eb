#pragma once

#include <stdexcept>
#include <string>

namespace ellspin {

enum class ErrorCode {
  Pole = 1,
  Accuracy,
  Parameter,
  Contract,
  Degenerate,
  Gate,
  Size,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// x (or some argument derived from it) sits on a zero of theta.
struct PoleError : Error {
  explicit PoleError(const std::string& w) : Error(ErrorCode::Pole, w) {}
};

// product truncation did not converge within max_terms, or a value overflowed.
struct AccuracyError : Error {
  explicit AccuracyError(const std::string& w) : Error(ErrorCode::Accuracy, w) {}
};

struct ParameterError : Error {
  explicit ParameterError(const std::string& w) : Error(ErrorCode::Parameter, w) {}
};

struct ContractError : Error {
  explicit ContractError(const std::string& w) : Error(ErrorCode::Contract, w) {}
};

// V(x) = 0 in the normalisation of the exchange operator.
struct DegenerateError : Error {
  explicit DegenerateError(const std::string& w) : Error(ErrorCode::Degenerate, w) {}
};

// freezing: the weighted coefficients w_j A_j are not j-independent.
struct GateError : Error {
  explicit GateError(const std::string& w) : Error(ErrorCode::Gate, w) {}
};

struct SizeError : Error {
  explicit SizeError(const std::string& w) : Error(ErrorCode::Size, w) {}
};

}  // namespace ellspin

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace netrepro {

enum class ErrorKind {
  NonSquareMatrix,
  DimensionMismatch,
  NegativeTransmission,
  NonpositiveRecovery,
  NotStronglyConnected,
  SimplexViolation,
  RangeViolation,
  NoConvergence,
  ZeroMatrix,
  StepSizeUnstable,
  ScheduleGap,
  ZeroInfection,
  InvalidParameters,
  InsufficientHistory,
  MissingAttribution,
  ConfigError,
};

constexpr std::string_view error_name(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::NonSquareMatrix: return "NonSquareMatrix";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NegativeTransmission: return "NegativeTransmission";
    case ErrorKind::NonpositiveRecovery: return "NonpositiveRecovery";
    case ErrorKind::NotStronglyConnected: return "NotStronglyConnected";
    case ErrorKind::SimplexViolation: return "SimplexViolation";
    case ErrorKind::RangeViolation: return "RangeViolation";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::ZeroMatrix: return "ZeroMatrix";
    case ErrorKind::StepSizeUnstable: return "StepSizeUnstable";
    case ErrorKind::ScheduleGap: return "ScheduleGap";
    case ErrorKind::ZeroInfection: return "ZeroInfection";
    case ErrorKind::InvalidParameters: return "InvalidParameters";
    case ErrorKind::InsufficientHistory: return "InsufficientHistory";
    case ErrorKind::MissingAttribution: return "MissingAttribution";
    case ErrorKind::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

/// Numerical failures (as opposed to bad input) map to CLI exit code 3.
constexpr bool is_numerical(ErrorKind kind) noexcept {
  return kind == ErrorKind::NoConvergence || kind == ErrorKind::StepSizeUnstable;
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& detail)
      : std::runtime_error(std::string(error_name(kind)) + ": " + detail), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }
  std::string_view name() const noexcept { return error_name(kind_); }

 private:
  ErrorKind kind_;
};

}  // namespace netrepro

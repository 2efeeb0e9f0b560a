#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace flybot {

enum class ErrorCode {
  // raster
  BadMagic,
  TruncatedData,
  MaxvalUnsupported,
  NonPositiveDimensions,
  BadSample,
  NotGrayscale,
  NotRGB,
  // vision
  DegenerateHistogram,
  EmptyHistogram,
  NonPositiveSigma,
  BadThetaStep,
  BadRadiusRange,
  EmptyBank,
  BadGaborParams,
  ZeroVariance,
  InsufficientData,
  BadComponentCount,
  NegativeRadiance,
  NegativeTemperature,
  // neural
  BadActivation,
  BadTopology,
  DimensionMismatch,
  BadLearningRate,
  BadEpsilon,
  NearKink,
  EmptyDataset,
  NonBipolarPattern,
  LengthMismatch,
  NonConvergent,
  // sidewalk
  NoStripFound,
  ImageTooSmall,
  BadThresholds,
  // fuzzy
  BadMembership,
  BadVariable,
  UnknownVariable,
  UnknownLabel,
  MissingInput,
  NoRuleFired,
  // flight
  BadRotorCount,
  SubUnitySafetyFactor,
  NegativeMass,
  ConfigInvalid,
  ParseError,
  // serialization
  BadDocument,
};

constexpr std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::BadMagic: return "BadMagic";
    case ErrorCode::TruncatedData: return "TruncatedData";
    case ErrorCode::MaxvalUnsupported: return "MaxvalUnsupported";
    case ErrorCode::NonPositiveDimensions: return "NonPositiveDimensions";
    case ErrorCode::BadSample: return "BadSample";
    case ErrorCode::NotGrayscale: return "NotGrayscale";
    case ErrorCode::NotRGB: return "NotRGB";
    case ErrorCode::DegenerateHistogram: return "DegenerateHistogram";
    case ErrorCode::EmptyHistogram: return "EmptyHistogram";
    case ErrorCode::NonPositiveSigma: return "NonPositiveSigma";
    case ErrorCode::BadThetaStep: return "BadThetaStep";
    case ErrorCode::BadRadiusRange: return "BadRadiusRange";
    case ErrorCode::EmptyBank: return "EmptyBank";
    case ErrorCode::BadGaborParams: return "BadGaborParams";
    case ErrorCode::ZeroVariance: return "ZeroVariance";
    case ErrorCode::InsufficientData: return "InsufficientData";
    case ErrorCode::BadComponentCount: return "BadComponentCount";
    case ErrorCode::NegativeRadiance: return "NegativeRadiance";
    case ErrorCode::NegativeTemperature: return "NegativeTemperature";
    case ErrorCode::BadActivation: return "BadActivation";
    case ErrorCode::BadTopology: return "BadTopology";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::BadLearningRate: return "BadLearningRate";
    case ErrorCode::BadEpsilon: return "BadEpsilon";
    case ErrorCode::NearKink: return "NearKink";
    case ErrorCode::EmptyDataset: return "EmptyDataset";
    case ErrorCode::NonBipolarPattern: return "NonBipolarPattern";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::NonConvergent: return "NonConvergent";
    case ErrorCode::NoStripFound: return "NoStripFound";
    case ErrorCode::ImageTooSmall: return "ImageTooSmall";
    case ErrorCode::BadThresholds: return "BadThresholds";
    case ErrorCode::BadMembership: return "BadMembership";
    case ErrorCode::BadVariable: return "BadVariable";
    case ErrorCode::UnknownVariable: return "UnknownVariable";
    case ErrorCode::UnknownLabel: return "UnknownLabel";
    case ErrorCode::MissingInput: return "MissingInput";
    case ErrorCode::NoRuleFired: return "NoRuleFired";
    case ErrorCode::BadRotorCount: return "BadRotorCount";
    case ErrorCode::SubUnitySafetyFactor: return "SubUnitySafetyFactor";
    case ErrorCode::NegativeMass: return "NegativeMass";
    case ErrorCode::ConfigInvalid: return "ConfigInvalid";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::BadDocument: return "BadDocument";
  }
  return "Unknown";
}

/// True for errors that describe the data rather than malformed input:
/// the input was well-formed but the computation has no meaningful answer.
constexpr bool is_domain_error(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::DegenerateHistogram:
    case ErrorCode::ZeroVariance:
    case ErrorCode::NonConvergent:
    case ErrorCode::NoStripFound:
    case ErrorCode::NoRuleFired:
    case ErrorCode::NotGrayscale:
    case ErrorCode::NotRGB:
    case ErrorCode::ImageTooSmall:
      return true;
    default:
      return false;
  }
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace flybot

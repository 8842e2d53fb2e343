#include "strandcc/error.hpp"

namespace strandcc {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NonPositivePeriod: return "NonPositivePeriod";
    case ErrorCode::DuplicateHarmonicOrder: return "DuplicateHarmonicOrder";
    case ErrorCode::NegativeAmplitude: return "NegativeAmplitude";
    case ErrorCode::InvalidHarmonicOrder: return "InvalidHarmonicOrder";
    case ErrorCode::TooFewSamples: return "TooFewSamples";
    case ErrorCode::PeriodMismatch: return "PeriodMismatch";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::TooFewStrands: return "TooFewStrands";
    case ErrorCode::AsymmetricInductance: return "AsymmetricInductance";
    case ErrorCode::NonPositiveSelfInductance: return "NonPositiveSelfInductance";
    case ErrorCode::NonPositiveResistance: return "NonPositiveResistance";
    case ErrorCode::InvalidLayout: return "InvalidLayout";
    case ErrorCode::PlacementOutOfSlot: return "PlacementOutOfSlot";
    case ErrorCode::InvalidPermutation: return "InvalidPermutation";
    case ErrorCode::FractionsNotNormalized: return "FractionsNotNormalized";
    case ErrorCode::NetworkInvalid: return "NetworkInvalid";
    case ErrorCode::NegativeFrequency: return "NegativeFrequency";
    case ErrorCode::SingularSystem: return "SingularSystem";
    case ErrorCode::GridTooSmall: return "GridTooSmall";
    case ErrorCode::AllPointsMasked: return "AllPointsMasked";
    case ErrorCode::ReducedMatrixSingular: return "ReducedMatrixSingular";
    case ErrorCode::StepTooCoarse: return "StepTooCoarse";
    case ErrorCode::SettleTooShort: return "SettleTooShort";
    case ErrorCode::InvalidStrandCount: return "InvalidStrandCount";
    case ErrorCode::NegativeTolerance: return "NegativeTolerance";
    case ErrorCode::InconsistentInputs: return "InconsistentInputs";
    case ErrorCode::ConfigParse: return "ConfigParse";
    case ErrorCode::SolveFailed: return "SolveFailed";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message,
             std::optional<int> harmonic_order)
    : std::runtime_error(std::string(to_string(code)) + ": " + message),
      code_(code),
      harmonic_order_(harmonic_order) {}

}  // namespace strandcc

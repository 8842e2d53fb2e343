#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace strandcc {

enum class ErrorCode {
  // waveform
  NonPositivePeriod,
  DuplicateHarmonicOrder,
  NegativeAmplitude,
  InvalidHarmonicOrder,
  TooFewSamples,
  PeriodMismatch,
  // network
  DimensionMismatch,
  TooFewStrands,
  AsymmetricInductance,
  NonPositiveSelfInductance,
  NonPositiveResistance,
  InvalidLayout,
  PlacementOutOfSlot,
  InvalidPermutation,
  FractionsNotNormalized,
  // solver
  NetworkInvalid,
  NegativeFrequency,
  SingularSystem,
  GridTooSmall,
  AllPointsMasked,
  ReducedMatrixSingular,
  StepTooCoarse,
  SettleTooShort,
  // losses
  InvalidStrandCount,
  NegativeTolerance,
  InconsistentInputs,
  // cli
  ConfigParse,
  SolveFailed,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Single exception type for the library; the code identifies the failed
/// precondition so callers (and tests) can branch on it.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        std::optional<int> harmonic_order = std::nullopt);

  ErrorCode code() const noexcept { return code_; }

  /// Set when a solve failed for one specific drive component
  /// (0 denotes the DC term).
  std::optional<int> harmonic_order() const noexcept { return harmonic_order_; }

 private:
  ErrorCode code_;
  std::optional<int> harmonic_order_;
};

}  // namespace strandcc

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cogload {

// Error kinds raised by the library. Every failure surfaces as a cogload::Error
// carrying one of these codes; the CLI maps them to its machine-readable error
// record.
enum class Errc {
  InvalidArgument,
  ZeroLengthWindow,
  TooShort,
  UnknownChannel,
  MissingChannel,
  ChannelMismatch,
  NyquistViolation,
  BandOutOfRange,
  NoAlphaPeak,
  SingularNoise,
  ZeroBaseline,
  ZeroAlphaFrame,
  GeometryOverflow,
  LengthMismatch,
  EmptyAfterTrim,
  NoValidSamples,
  SingleClass,
  DimensionMismatch,
  SinglePerson,
  DegenerateFold,
  TooFewRepetitions,
  ConstantPredictor,
  TooFewPoints,
  EmptyConfusion,
  InfeasibleRate,
  BufferOverflow,
  ParseError,
  RateJitter,
  IoError,
};

std::string_view errc_name(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace cogload

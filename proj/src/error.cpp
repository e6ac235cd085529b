#include "cogload/error.hpp"

namespace cogload {

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::ZeroLengthWindow: return "ZeroLengthWindow";
    case Errc::TooShort: return "TooShort";
    case Errc::UnknownChannel: return "UnknownChannel";
    case Errc::MissingChannel: return "MissingChannel";
    case Errc::ChannelMismatch: return "ChannelMismatch";
    case Errc::NyquistViolation: return "NyquistViolation";
    case Errc::BandOutOfRange: return "BandOutOfRange";
    case Errc::NoAlphaPeak: return "NoAlphaPeak";
    case Errc::SingularNoise: return "SingularNoise";
    case Errc::ZeroBaseline: return "ZeroBaseline";
    case Errc::ZeroAlphaFrame: return "ZeroAlphaFrame";
    case Errc::GeometryOverflow: return "GeometryOverflow";
    case Errc::LengthMismatch: return "LengthMismatch";
    case Errc::EmptyAfterTrim: return "EmptyAfterTrim";
    case Errc::NoValidSamples: return "NoValidSamples";
    case Errc::SingleClass: return "SingleClass";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::SinglePerson: return "SinglePerson";
    case Errc::DegenerateFold: return "DegenerateFold";
    case Errc::TooFewRepetitions: return "TooFewRepetitions";
    case Errc::ConstantPredictor: return "ConstantPredictor";
    case Errc::TooFewPoints: return "TooFewPoints";
    case Errc::EmptyConfusion: return "EmptyConfusion";
    case Errc::InfeasibleRate: return "InfeasibleRate";
    case Errc::BufferOverflow: return "BufferOverflow";
    case Errc::ParseError: return "ParseError";
    case Errc::RateJitter: return "RateJitter";
    case Errc::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace cogload

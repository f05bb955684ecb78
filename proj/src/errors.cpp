#include "somos/errors.hpp"

namespace somos {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::InvalidParams: return "InvalidParams";
    case ErrorKind::InvalidSeed: return "InvalidSeed";
    case ErrorKind::ZeroSeed: return "ZeroSeed";
    case ErrorKind::DivisionByZeroTerm: return "DivisionByZeroTerm";
    case ErrorKind::IndexOutOfWindow: return "IndexOutOfWindow";
    case ErrorKind::NonInteger: return "NonInteger";
    case ErrorKind::ZeroDenominator: return "ZeroDenominator";
    case ErrorKind::ZeroGaugeFactor: return "ZeroGaugeFactor";
    case ErrorKind::MapSingular: return "MapSingular";
    case ErrorKind::DegenerateCurve: return "DegenerateCurve";
    case ErrorKind::PoleAtLatticePoint: return "PoleAtLatticePoint";
    case ErrorKind::PrecisionLoss: return "PrecisionLoss";
    case ErrorKind::ZeroScale: return "ZeroScale";
    case ErrorKind::SingularMu: return "SingularMu";
    case ErrorKind::ConsistencyFailure: return "ConsistencyFailure";
    case ErrorKind::Overflow: return "Overflow";
    case ErrorKind::NotApplicable: return "NotApplicable";
  }
  return "Unknown";
}

bool Error::is_degenerate() const noexcept {
  switch (kind_) {
    case ErrorKind::DivisionByZeroTerm:
    case ErrorKind::ZeroDenominator:
    case ErrorKind::MapSingular:
    case ErrorKind::DegenerateCurve:
    case ErrorKind::PoleAtLatticePoint:
    case ErrorKind::PrecisionLoss:
    case ErrorKind::SingularMu:
    case ErrorKind::ConsistencyFailure:
    case ErrorKind::Overflow:
    case ErrorKind::NotApplicable:
    case ErrorKind::ZeroSeed:
      return true;
    default:
      return false;
  }
}

}  // namespace somos

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sobolev {

enum class ErrorCode {
  InvalidInput,
  PoleHit,
  ResolutionTooCoarse,
  InvalidPolygon,
  FoldedMesh,
  NoInteriorVertices,
  InvalidExponent,
  CgStalled,
  SweepTooSparse,
  WrongExponent,
  InsufficientRegularRows,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries one of the codes above so the
/// CLI can map it to an exit status without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::PoleHit: return "PoleHit";
    case ErrorCode::ResolutionTooCoarse: return "ResolutionTooCoarse";
    case ErrorCode::InvalidPolygon: return "InvalidPolygon";
    case ErrorCode::FoldedMesh: return "FoldedMesh";
    case ErrorCode::NoInteriorVertices: return "NoInteriorVertices";
    case ErrorCode::InvalidExponent: return "InvalidExponent";
    case ErrorCode::CgStalled: return "CgStalled";
    case ErrorCode::SweepTooSparse: return "SweepTooSparse";
    case ErrorCode::WrongExponent: return "WrongExponent";
    case ErrorCode::InsufficientRegularRows: return "InsufficientRegularRows";
  }
  return "Unknown";
}

}  // namespace sobolev

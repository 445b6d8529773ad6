#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hyps {

enum class ErrorKind {
  kUnsupportedDerivativeOrder,
  kNonFinite,
  kEmptyBox,
  kInsufficientSweep,
  kBadEps,
  kGridMismatch,
  kUnsupportedRoughKind,
  kDimensionMismatch,
  kTooLarge,
  kNoConvergence,
  kBoxTooSmall,
  kUnstableStep,
  kIncompleteLedger,
  kTagMismatch,
  kInsufficientOrders,
  kNotApplicable,
  kConfigInvalid,
  kInvalidArgument,
  kIo,
};

std::string_view to_string(ErrorKind kind);

// Every failure raised by the library carries one of the kinds above so the C
// layer can map it onto a status code without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kUnsupportedDerivativeOrder: return "UnsupportedDerivativeOrder";
    case ErrorKind::kNonFinite: return "NonFinite";
    case ErrorKind::kEmptyBox: return "EmptyBox";
    case ErrorKind::kInsufficientSweep: return "InsufficientSweep";
    case ErrorKind::kBadEps: return "BadEps";
    case ErrorKind::kGridMismatch: return "GridMismatch";
    case ErrorKind::kUnsupportedRoughKind: return "UnsupportedRoughKind";
    case ErrorKind::kDimensionMismatch: return "DimensionMismatch";
    case ErrorKind::kTooLarge: return "TooLarge";
    case ErrorKind::kNoConvergence: return "NoConvergence";
    case ErrorKind::kBoxTooSmall: return "BoxTooSmall";
    case ErrorKind::kUnstableStep: return "UnstableStep";
    case ErrorKind::kIncompleteLedger: return "IncompleteLedger";
    case ErrorKind::kTagMismatch: return "TagMismatch";
    case ErrorKind::kInsufficientOrders: return "InsufficientOrders";
    case ErrorKind::kNotApplicable: return "NotApplicable";
    case ErrorKind::kConfigInvalid: return "ConfigInvalid";
    case ErrorKind::kInvalidArgument: return "InvalidArgument";
    case ErrorKind::kIo: return "Io";
  }
  return "Unknown";
}

}  // namespace hyps

#include "fdhomog/error.hpp"

namespace fdhomog {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "invalid-argument";
    case ErrorCode::InvalidRange: return "invalid-range";
    case ErrorCode::CovarianceFactorization: return "covariance-factorization-failure";
    case ErrorCode::Parse: return "parse-error";
    case ErrorCode::Shape: return "shape-error";
    case ErrorCode::Grid: return "grid-error";
    case ErrorCode::EmptyGroup: return "empty-group";
    case ErrorCode::GridMismatch: return "grid-mismatch";
    case ErrorCode::SizeLimit: return "size-limit";
    case ErrorCode::DegenerateRegressor: return "degenerate-regressor";
    case ErrorCode::DegenerateFit: return "degenerate-fit";
    case ErrorCode::InsufficientVariation: return "insufficient-variation";
    case ErrorCode::UnknownModel: return "unknown-model";
    case ErrorCode::Io: return "io-error";
  }
  return "error";
}

}  // namespace fdhomog

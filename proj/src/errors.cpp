#include "datacurv/errors.hpp"

namespace datacurv {

std::string_view to_string(PointStatus status) noexcept {
  switch (status) {
    case PointStatus::ok: return "ok";
    case PointStatus::empty_neighborhood: return "empty_neighborhood";
    case PointStatus::zero_dimension: return "zero_dimension";
    case PointStatus::no_normal_direction: return "no_normal_direction";
    case PointStatus::underdetermined_fit: return "underdetermined_fit";
    case PointStatus::singular_system: return "singular_system";
    case PointStatus::eigensolver_failure: return "eigensolver_failure";
  }
  return "unknown";
}

}  // namespace datacurv

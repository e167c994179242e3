#include "lorentz_iso/error.hpp"

namespace lorentz_iso {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::dimension: return "dimension error";
    case ErrorKind::signature: return "signature error";
    case ErrorKind::degenerate_input: return "degenerate input";
    case ErrorKind::parameter: return "parameter error";
    case ErrorKind::invalid_point: return "invalid point";
    case ErrorKind::invalid_profile: return "invalid profile";
    case ErrorKind::stencil: return "stencil error";
    case ErrorKind::conformality: return "conformality error";
    case ErrorKind::causality: return "causality error";
    case ErrorKind::frame: return "frame error";
    case ErrorKind::umbilic: return "umbilic point";
    case ErrorKind::consistency: return "consistency error";
    case ErrorKind::degenerate_surface: return "degenerate surface";
    case ErrorKind::degenerate_transform: return "degenerate transform";
    case ErrorKind::non_integrable: return "non-integrable data";
    case ErrorKind::initial_condition: return "initial-condition error";
    case ErrorKind::lift_singularity: return "lift singularity";
    case ErrorKind::jet_order: return "insufficient jet order";
    case ErrorKind::input: return "input error";
  }
  return "error";
}

bool is_hypothesis_failure(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::umbilic:
    case ErrorKind::degenerate_surface:
    case ErrorKind::degenerate_transform:
    case ErrorKind::lift_singularity:
    case ErrorKind::non_integrable:
    case ErrorKind::frame:
    case ErrorKind::conformality:
    case ErrorKind::causality:
      return true;
    default:
      return false;
  }
}

}  // namespace lorentz_iso

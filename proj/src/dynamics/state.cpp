#include "ltcam/dynamics/state.hpp"

#include <cmath>
#include <string>

namespace ltcam {

void EpochState::validate() const {
  if (!std::isfinite(epoch) || !position.allFinite() || !velocity.allFinite()) {
    throw Error("state has non-finite components");
  }
  if (position.norm() <= 0.0) throw Error("state position must be nonzero");
}

void SpacecraftParams::validate() const {
  if (!(mass > 0.0)) throw Error("spacecraft mass must be positive");
  const double values[] = {drag_area, drag_coefficient, srp_area, reflectivity, hard_body_radius};
  for (double v : values) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw Error("spacecraft parameters must be finite and nonnegative");
    }
  }
}

void ForceModelConfig::validate() const {
  if (zonal_degree != 0 && zonal_degree != 2 && zonal_degree != 3 && zonal_degree != 4) {
    throw Error("zonal_degree must be one of 0, 2, 3, 4 (got " + std::to_string(zonal_degree) +
                ")");
  }
  if (drag_enabled && !(density_ref > 0.0 && scale_height > 0.0)) {
    throw Error("exponential atmosphere needs positive density and scale height");
  }
}

}  // namespace ltcam

#include "ltcam/scp/trust_region.hpp"

#include <cmath>

namespace ltcam {

Vec9 NondimScales::input_scale() const {
  Vec9 s;
  s << length, length, length, velocity(), velocity(), velocity(), control, control, control;
  return s;
}

NondimScales NondimScales::from_orbit(double semi_major_axis, double mu, double max_control) {
  NondimScales s;
  s.length = semi_major_axis;
  s.time = std::sqrt(semi_major_axis * semi_major_axis * semi_major_axis / mu);
  s.control = max_control;
  return s;
}

SensitivityBundle nondimensionalize(const SensitivityBundle& b, const NondimScales& s) {
  const Vec9 in = s.input_scale();
  const Vec6 out = in.head<6>();
  SensitivityBundle r = b;
  r.x_ref = b.x_ref.cwiseQuotient(out);
  r.u_ref = b.u_ref / s.control;
  r.xbar = b.xbar.cwiseQuotient(out);
  for (int i = 0; i < 6; ++i) {
    for (int j = 0; j < 6; ++j) r.A(i, j) = b.A(i, j) * in[j] / out[i];
    for (int j = 0; j < 3; ++j) r.B(i, j) = b.B(i, j) * in[6 + j] / out[i];
  }
  if (b.has_tensor) {
    for (int k = 0; k < 6; ++k) {
      for (int v = 0; v < 9; ++v) {
        for (int w = 0; w < 9; ++w) r.tensor[k](v, w) = b.tensor[k](v, w) * in[v] * in[w] / out[k];
      }
    }
  }
  return r;
}

Vec9 nli_weights(const SensitivityBundle& b) {
  if (!b.has_tensor) throw Error("nli_weights: second-order tensor missing");
  const double jn = b.jacobian().squaredNorm();
  if (!(jn > 0.0)) throw Error("nli_weights: reference Jacobian is zero");
  Vec9 xi;
  for (int w = 0; w < 9; ++w) {
    double sum = 0.0;
    for (int u = 0; u < 6; ++u) sum += b.tensor[u].col(w).squaredNorm();
    xi[w] = std::sqrt(sum / jn);
  }
  return xi;
}

TrustRegion trust_region_rows(const Vec9& xi, const Vec6& x_ref, const Vec3& u_ref, double nu_bar,
                              const Vec9& scale, double max_half_width) {
  if (!(nu_bar > 0.0)) throw Error("trust region radius must be positive");
  Vec9 ref;
  ref << x_ref, u_ref;
  TrustRegion tr;
  for (int w = 0; w < 9; ++w) {
    if (!(xi[w] > 0.0)) continue;
    const double half = nu_bar / xi[w];
    if (half > max_half_width) continue;
    tr.active[w] = true;
    tr.lower[w] = ref[w] - half * scale[w];
    tr.upper[w] = ref[w] + half * scale[w];
  }
  return tr;
}

}  // namespace ltcam

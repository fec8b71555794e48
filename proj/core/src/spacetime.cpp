#include <phasefield/spacetime.hpp>

#include <cmath>
#include <stdexcept>

#include <phasefield/operators.hpp>

namespace phasefield {

double TrajectoryNorms::spacetime_norm(double p) const {
  auto it = accum.find(p);
  if (it == accum.end()) return 0.0;
  return std::pow(it->second, 1.0 / p);
}

double TrajectoryNorms::sup_norm(double p) const {
  double m = 0.0;
  for (const auto& e : steps)
    if (e.p == p) m = std::max(m, e.spatial_norm);
  return m;
}

TrajectoryNorms& accumulate_spacetime(TrajectoryNorms& tn, double t, const Field& f,
                                      double dt, double p) {
  if (!(dt >= 0.0)) throw std::invalid_argument("accumulate_spacetime: dt >= 0 required");
  const double n = norm_lp(f, p);
  tn.accum[p] += dt * std::pow(n, p);
  tn.steps.push_back({t, p, n});
  return tn;
}

}  // namespace phasefield

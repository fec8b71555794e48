#pragma once

#include <map>
#include <vector>

#include <phasefield/grid.hpp>

namespace phasefield {

/// Running space-time norms of a field sampled along a trajectory.
///
/// accumulate_spacetime adds one step's contribution dt * ||f||_p^p to the
/// accumulator for exponent p and records the spatial norm, so that
/// spacetime_norm(p) approximates the L^p norm over Omega x (0,T) by a
/// left-rectangle rule in time. Accumulators never decrease.
struct TrajectoryNorms {
  struct Entry {
    double t;
    double p;
    double spatial_norm;
  };

  std::vector<Entry> steps;
  std::map<double, double> accum;  // p -> sum of dt * ||f||_p^p

  double spacetime_norm(double p) const;
  /// Largest recorded spatial norm for exponent p (sup in time).
  double sup_norm(double p) const;
};

TrajectoryNorms& accumulate_spacetime(TrajectoryNorms& tn, double t, const Field& f,
                                      double dt, double p);

}  // namespace phasefield

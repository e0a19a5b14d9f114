#pragma once

#include <string>

#include "lraz/reduced_system.hpp"

namespace lraz {

struct TrackerConfig {
  double initial_step = 0.05;
  double min_step = 1e-10;
  double max_step = 0.1;
  double corrector_tolerance = 1e-11;  // relative to 1 + ||y||
  int max_corrector_iterations = 4;
  double expansion = 2.0;
  double contraction = 0.5;
  int successes_before_expansion = 3;
  int max_steps = 20000;
  double endgame_radius = 0.02;  // no step expansion once 1 - t falls below this
  double divergence_bound = 1e8;  // relative to 1 + ||start||
  double max_first_correction = 1e-2;  // relative; larger first Newton updates are treated as path jumps

  void validate() const;
};

enum class PathStatus { Success, Singular, StepUnderflow, MaxSteps, CorrectorDivergence, PathToInfinity };

std::string to_string(PathStatus s);

struct PathResult {
  PathStatus status = PathStatus::Success;
  CVec y;  // coordinates in the chart the path ended in
  CMat X;
  double t = 0.0;
  int steps = 0;
  int rejected = 0;
  double residual = 0.0;
  double contraction = 0.0;  // last Newton contraction factor at the endpoint
  double condition = 0.0;
  bool ok() const { return status == PathStatus::Success; }
};

// Parameter path p(t) = pa + w(t) (pb - pa) with w(t) = gamma t / (1 - t + gamma t).
struct ParameterPath {
  CVec pa, pb;
  cplx gamma{1.0, 0.0};
  CVec at(double t) const;
  CVec derivative(double t) const;
};

// Random unit gamma with phase in (-pi/2, pi/2); keeps |w(t)| below sqrt(2).
cplx random_gamma(Rng& rng);

// Tracks the critical point X_start of the parameters path.pa to path.pb. The
// bordered-minor chart is re-centred on the current point whenever its leading
// block degenerates; multipliers are re-lifted by least squares.
PathResult track(const ReducedSystem& sys, const CMat& X_start, const ParameterPath& path, const TrackerConfig& cfg);

// Newton refinement at fixed parameters in the chart of sys. Fills residual,
// contraction and condition; status becomes Singular for ill-conditioned Jacobians.
PathResult refine(const ReducedSystem& sys, const CVec& y, const CVec& p, int max_iterations = 6);

// Refinement of a matrix point, with the chart centred on X.
PathResult refine_point(const ReducedSystem& sys, const CMat& X, const CVec& p, int max_iterations = 6);

}  // namespace lraz

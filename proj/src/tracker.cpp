#include "lraz/tracker.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lraz/errors.hpp"

namespace lraz {

void TrackerConfig::validate() const {
  if (!(min_step > 0 && min_step <= initial_step && initial_step <= max_step))
    throw ContractViolation("tracker config: need 0 < min_step <= initial_step <= max_step");
  if (!(corrector_tolerance > 0) || max_corrector_iterations < 1 || max_steps < 1)
    throw ContractViolation("tracker config: tolerances and iteration limits must be positive");
  if (!(expansion > 1.0) || !(contraction > 0.0 && contraction < 1.0))
    throw ContractViolation("tracker config: expansion must exceed 1 and contraction lie in (0, 1)");
}

std::string to_string(PathStatus s) {
  switch (s) {
    case PathStatus::Success:
      return "success";
    case PathStatus::Singular:
      return "singular";
    case PathStatus::StepUnderflow:
      return "step_underflow";
    case PathStatus::MaxSteps:
      return "max_steps";
    case PathStatus::CorrectorDivergence:
      return "corrector_divergence";
    case PathStatus::PathToInfinity:
      return "path_to_infinity";
  }
  return "unknown";
}

CVec ParameterPath::at(double t) const {
  if (t <= 0.0) return pa;
  if (t >= 1.0) return pb;
  const cplx w = gamma * t / ((1.0 - t) + gamma * t);
  return pa + w * (pb - pa);
}

CVec ParameterPath::derivative(double t) const {
  const cplx den = (1.0 - t) + gamma * t;
  const cplx dw = gamma / (den * den);
  return dw * (pb - pa);
}

cplx random_gamma(Rng& rng) {
  std::uniform_real_distribution<double> phase(-0.5 * M_PI, 0.5 * M_PI);
  return std::polar(1.0, phase(rng));
}

namespace {

struct Workspace {
  CVec F;
  CMat J;
  Eigen::PartialPivLU<CMat> lu;
};

constexpr double kEps = std::numeric_limits<double>::epsilon();

bool finite(const CVec& v) { return v.allFinite(); }

// dy/dt = -J^{-1} dF/dt with dF/dt = (0, p'(t)).
bool velocity(const ReducedSystem& sys, const ParameterPath& path, double t, const CVec& y, Workspace& ws,
              CVec& out) {
  sys.evaluate(y, path.at(t), ws.F, ws.J);
  ws.lu.compute(ws.J);
  CVec rhs = CVec::Zero(sys.size());
  rhs.tail(sys.d()) = -path.derivative(t);
  out = ws.lu.solve(rhs);
  return finite(out);
}

enum class CorrectorOutcome { Converged, Jump, Diverged, NotConverged };

CorrectorOutcome correct(const ReducedSystem& sys, const CVec& p, CVec& y, const TrackerConfig& cfg,
                         Workspace& ws) {
  double previous = 0.0;
  for (int it = 0; it < cfg.max_corrector_iterations; ++it) {
    sys.evaluate(y, p, ws.F, ws.J);
    ws.lu.compute(ws.J);
    const CVec delta = ws.lu.solve(ws.F);
    if (!finite(delta)) return CorrectorOutcome::Diverged;
    const double norm = delta.norm();
    const double scale = 1.0 + y.norm();
    // attainable accuracy degrades with the conditioning of J
    const double floor = std::clamp(10.0 * kEps / ws.lu.rcond(), 1e-9, 1e-6) * scale;
    if (it == 0 && norm > cfg.max_first_correction * scale) return CorrectorOutcome::Jump;
    if (it > 0 && norm > previous) {
      // growth below the roundoff floor is stagnation, not divergence
      if (previous <= floor) return CorrectorOutcome::Converged;
      return CorrectorOutcome::Diverged;
    }
    y -= delta;
    if (norm <= cfg.corrector_tolerance * scale) return CorrectorOutcome::Converged;
    if (it > 0 && norm > 0.5 * previous && norm <= floor) return CorrectorOutcome::Converged;
    previous = norm;
  }
  return CorrectorOutcome::NotConverged;
}

}  // namespace

PathResult refine(const ReducedSystem& sys, const CVec& y0, const CVec& p, int max_iterations) {
  PathResult res;
  res.y = y0;
  Workspace ws;
  double previous = -1.0;
  double last_ratio = 0.0;
  for (int it = 0; it < max_iterations; ++it) {
    sys.evaluate(res.y, p, ws.F, ws.J);
    ws.lu.compute(ws.J);
    const CVec delta = ws.lu.solve(ws.F);
    if (!finite(delta)) break;
    const double norm = delta.norm();
    const double scale = 1.0 + res.y.norm();
    if (previous >= 0.0 && norm > previous && previous <= 1e-9 * scale) break;
    res.y -= delta;
    if (previous > 1e-13 * scale) last_ratio = norm / previous;
    else if (previous >= 0.0) last_ratio = 0.0;
    previous = norm;
    if (norm <= 1e-15 * scale) break;
  }
  sys.evaluate(res.y, p, ws.F, ws.J);
  res.residual = ws.F.norm();
  res.contraction = last_ratio;
  // equilibrate rows and columns so the condition number ignores the
  // different scalings of minors, coordinates and multipliers
  Vec rs = ws.J.rowwise().norm(), cs;
  for (Eigen::Index i = 0; i < rs.size(); ++i) rs(i) = rs(i) > 0.0 ? 1.0 / rs(i) : 1.0;
  CMat Jq = rs.cast<cplx>().asDiagonal() * ws.J;
  cs = Jq.colwise().norm().transpose();
  for (Eigen::Index j = 0; j < cs.size(); ++j) cs(j) = cs(j) > 0.0 ? 1.0 / cs(j) : 1.0;
  Jq = Jq * cs.cast<cplx>().asDiagonal();
  Eigen::JacobiSVD<CMat> svd(Jq);
  const auto& s = svd.singularValues();
  res.condition = s(s.size() - 1) > 0.0 ? s(0) / s(s.size() - 1) : INFINITY;
  res.status = (std::isfinite(res.condition) && res.condition < 1e12 && res.y.allFinite()) ? PathStatus::Success
                                                                                          : PathStatus::Singular;
  res.t = 1.0;
  res.X = sys.matrix(res.y);
  return res;
}

PathResult refine_point(const ReducedSystem& proto, const CMat& X, const CVec& p, int max_iterations) {
  ReducedSystem sys = proto;
  sys.adapt_chart(X);
  return refine(sys, sys.lift(X, p), p, max_iterations);
}

PathResult track(const ReducedSystem& proto, const CMat& X_start, const ParameterPath& path, const TrackerConfig& cfg) {
  constexpr double kChartFloor = 0.05;
  ReducedSystem sys = proto;
  sys.adapt_chart(X_start);
  PathResult res;
  CVec y = sys.lift(X_start, path.pa);
  if ((path.pb - path.pa).norm() == 0.0) {
    res.t = 1.0;
    res.y = y;
    res.X = X_start;
    CVec F;
    sys.evaluate(y, path.pb, F);
    res.residual = F.norm();
    return res;
  }
  Workspace ws;
  const double bound = cfg.divergence_bound * (1.0 + y.norm());
  double t = 0.0;
  double h = cfg.initial_step;
  int successes = 0;
  CorrectorOutcome last_failure = CorrectorOutcome::NotConverged;
  CVec k1, k2, k3, k4;
  auto stop = [&](PathStatus status) {
    res.status = status;
    res.y = y;
    res.X = sys.matrix(y);
    res.t = t;
    return res;
  };
  while (t < 1.0) {
    if (res.steps + res.rejected >= cfg.max_steps) return stop(PathStatus::MaxSteps);
    h = std::min({h, cfg.max_step, 1.0 - t});
    if (1.0 - t - h < 1e-14) h = 1.0 - t;
    const double t1 = (h == 1.0 - t) ? 1.0 : t + h;

    bool ok = velocity(sys, path, t, y, ws, k1) && velocity(sys, path, t + 0.5 * h, y + 0.5 * h * k1, ws, k2) &&
              velocity(sys, path, t + 0.5 * h, y + 0.5 * h * k2, ws, k3) && velocity(sys, path, t1, y + h * k3, ws, k4);
    CVec candidate;
    CorrectorOutcome outcome = CorrectorOutcome::Diverged;
    if (ok) {
      candidate = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      outcome = correct(sys, path.at(t1), candidate, cfg, ws);
    }
    if (outcome == CorrectorOutcome::Converged) {
      t = t1;
      y = candidate;
      ++res.steps;
      if (y.norm() > bound) return stop(PathStatus::PathToInfinity);
      if (!sys.identity_chart()) {
        const CMat X = sys.matrix(y);
        if (sys.chart_quality(X) < kChartFloor) {
          sys.adapt_chart(X);
          y = sys.lift(X, path.at(t));
        }
      }
      // no step growth inside the endgame zone
      if (1.0 - t > cfg.endgame_radius && ++successes >= cfg.successes_before_expansion) {
        h *= cfg.expansion;
        successes = 0;
      }
    } else {
      last_failure = outcome;
      ++res.rejected;
      successes = 0;
      h *= cfg.contraction;
      if (h < cfg.min_step) {
        PathStatus status =
            last_failure == CorrectorOutcome::Diverged ? PathStatus::CorrectorDivergence : PathStatus::StepUnderflow;
        if (y.norm() > 1e-2 * bound) status = PathStatus::PathToInfinity;
        return stop(status);
      }
    }
  }
  const int steps = res.steps, rejected = res.rejected;
  const CMat X_end = sys.matrix(y);
  sys.adapt_chart(X_end);
  res = refine(sys, sys.lift(X_end, path.pb), path.pb);
  res.steps = steps;
  res.rejected = rejected;
  return res;
}

}  // namespace lraz

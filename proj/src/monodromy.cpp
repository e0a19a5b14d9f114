#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "lraz/errors.hpp"
#include "lraz/homotopy.hpp"
#include "lraz/minors.hpp"
#include "lraz/parallel.hpp"

namespace lraz {

std::optional<ZeroPattern> as_zero_pattern(const CriticalSystem& system) {
  std::vector<Index2> entries;
  for (const auto& V : system.constraints()) {
    int hits = 0;
    Index2 at{-1, -1};
    for (Eigen::Index i = 0; i < V.rows(); ++i)
      for (Eigen::Index j = 0; j < V.cols(); ++j) {
        if (V(i, j) == 0.0) continue;
        if (V(i, j) != 1.0) return std::nullopt;
        ++hits;
        at = {static_cast<int>(i), static_cast<int>(j)};
      }
    if (hits != 1) return std::nullopt;
    entries.push_back(at);
  }
  return ZeroPattern(system.m(), system.n(), entries);
}

namespace {

bool genuine_rank(const CMat& X, int r, double tol) {
  Eigen::JacobiSVD<CMat> svd(X);
  const auto& s = svd.singularValues();
  if (!(s(0) > 0.0) || !std::isfinite(s(0))) return false;
  return s(r) <= tol * s(0) && s(r - 1) > tol * s(0);
}

bool same_point(const CMat& a, const CMat& b, double tol) { return (a - b).norm() <= tol * (1.0 + a.norm()); }

// Vector in C^r bilinearly orthogonal to the given rows (zero if none exists).
CVec orthogonal_vector(const std::vector<CVec>& against, int r, Rng& rng, int& freedom) {
  if (against.empty()) {
    freedom = r;
    return random_complex_vector(r, rng);
  }
  CMat W(against.size(), r);
  for (std::size_t k = 0; k < against.size(); ++k) W.row(k) = against[k].transpose();
  Eigen::FullPivLU<CMat> lu(W);
  lu.setThreshold(1e-9);
  const CMat kernel = lu.kernel();
  if (lu.rank() == r) {
    freedom = 0;
    return CVec::Zero(r);
  }
  freedom = static_cast<int>(kernel.cols());
  return kernel * random_complex_vector(kernel.cols(), rng);
}

}  // namespace

std::vector<CMat> component_seeds(const CriticalSystem& system, Rng& rng, int orders) {
  const int m = system.m(), n = system.n(), r = system.r();
  std::vector<CMat> seeds;
  const auto pattern = as_zero_pattern(system);
  if (!pattern) {
    for (int k = 0; k < 3; ++k) {
      CMat X;
      if (random_constrained_point(m, n, r, system.constraints(), rng, X)) seeds.push_back(X);
    }
    return seeds;
  }
  const BipartiteGraph g = bipartite_graph(*pattern);
  std::vector<std::vector<int>> col_adj(n);
  for (int i = 0; i < m; ++i)
    for (int j : g.adjacency[i]) col_adj[j].push_back(i);

  std::set<std::vector<int>> signatures;
  std::vector<int> order(m + n);
  std::iota(order.begin(), order.end(), 0);
  for (int trial = 0; trial < std::max(1, orders); ++trial) {
    if (trial > 0) std::shuffle(order.begin(), order.end(), rng);
    std::vector<CVec> vec(m + n);
    std::vector<bool> assigned(m + n, false);
    std::vector<int> signature(m + n, 0);
    for (int v : order) {
      std::vector<CVec> against;
      if (v < m) {
        for (int j : g.adjacency[v])
          if (assigned[m + j]) against.push_back(vec[m + j]);
      } else {
        for (int i : col_adj[v - m])
          if (assigned[i]) against.push_back(vec[i]);
      }
      vec[v] = orthogonal_vector(against, r, rng, signature[v]);
      assigned[v] = true;
    }
    if (signatures.count(signature)) continue;
    CMat A(m, r), B(n, r);
    for (int i = 0; i < m; ++i) A.row(i) = vec[i].transpose();
    for (int j = 0; j < n; ++j) B.row(j) = vec[m + j].transpose();
    const CMat X = A * B.transpose();
    signatures.insert(signature);
    if (numerical_rank(X, 1e-8) != r) continue;
    seeds.push_back(X);
  }
  return seeds;
}

namespace {

struct Transport {
  bool ok = false;
  CMat X;
  int failures = 0;
  int paths = 0;
};

Transport transport(const ReducedSystem& sys, const CMat& X0, const std::vector<ParameterPath>& legs,
                    const TrackerConfig& cfg) {
  Transport t;
  CMat X = X0;
  for (const auto& leg : legs) {
    ++t.paths;
    const PathResult res = track(sys, X, leg, cfg);
    if (!res.ok()) {
      ++t.failures;
      return t;
    }
    X = res.X;
  }
  t.ok = true;
  t.X = X;
  return t;
}

CriticalSolution make_solution(const CriticalSystem* literal, int component,
                               const CMat& U, const PathResult& refined, bool lift, const Tolerances& tol) {
  CriticalSolution s;
  s.component = component;
  s.X = refined.X;
  s.contraction = refined.contraction;
  s.condition = refined.condition;
  s.residual = refined.residual;
  const CMat D = U - s.X;
  s.distance_sq = frobenius_pairing(D, D);
  s.is_real = s.X.imag().cwiseAbs().maxCoeff() <= tol.real * (1.0 + s.X.norm());
  if (lift && literal) {
    const SystemPoint p = literal->lift_multipliers(vectorize(s.X), vectorize(U));
    s.lambda = p.lambda;
    s.mu = p.mu;
    s.residual = literal->evaluate(p, vectorize(U)).norm();
  }
  return s;
}

std::vector<ParameterPath> random_loop(const CVec& base, Rng& rng) {
  const CVec p1 = random_complex_vector(base.size(), rng) * std::max(1.0, base.norm() / std::sqrt(double(base.size())));
  const CVec p2 = random_complex_vector(base.size(), rng) * std::max(1.0, base.norm() / std::sqrt(double(base.size())));
  return {ParameterPath{base, p1, random_gamma(rng)}, ParameterPath{p1, p2, random_gamma(rng)},
          ParameterPath{p2, base, random_gamma(rng)}};
}

}  // namespace

SolutionSet monodromy_solve(const CriticalSystem& system, const TrackerConfig& cfg, const MonodromyOptions& opts,
                            Rng& rng, const Tolerances& tol) {
  cfg.validate();
  auto ctx = std::make_shared<SolverContext>();
  ctx->m = system.m();
  ctx->n = system.n();
  ctx->r = system.r();
  ctx->constraints = system.constraints();
  ctx->basis = constraint_basis(ctx->m, ctx->n, ctx->constraints);

  SolutionSet set;
  const ReducedSystem plain(ctx->m, ctx->n, ctx->r, ctx->basis, CMat::Identity(ctx->m, ctx->m),
                            CMat::Identity(ctx->n, ctx->n));
  // Project the base so U itself lies in the constraint space; only the projection matters.
  auto draw_base = [&](CMat& U) {
    const CVec p = plain.params(random_complex(ctx->m, ctx->n, rng));
    U = plain.matrix(p);
    return p;
  };
  CVec base = draw_base(set.U);

  std::vector<CMat> found_x;
  std::vector<std::pair<int, CMat>> found;  // (component, X)
  auto is_new = [&](const CMat& X) {
    return std::none_of(found_x.begin(), found_x.end(), [&](const CMat& Y) { return same_point(Y, X, tol.dedup); });
  };

  const auto seeds = component_seeds(system, rng, opts.seed_orders);
  if (seeds.empty()) throw ContractViolation("monodromy_solve: no rank-r points on the constraint space");
  for (const CMat& X0 : seeds) {
    ++set.stats.seeds_tried;
    ReducedSystem sys = ReducedSystem::with_random_chart(ctx->m, ctx->n, ctx->r, ctx->basis, rng);
    sys.adapt_to_component(X0, rng);
    CVec y0;
    const CVec p0 = sys.seed_params(X0, random_complex_vector(sys.c_reduced(), rng), y0);
    const PathResult start = refine(sys, y0, p0);
    if (!start.ok()) {
      set.warnings.push_back("seed Jacobian singular; seed skipped");
      continue;
    }
    const PathResult res = track(sys, start.X, ParameterPath{p0, base, random_gamma(rng)}, cfg);
    ++set.stats.paths_tracked;
    if (!res.ok()) {
      ++set.stats.path_failures;
      continue;
    }
    const CMat& X = res.X;
    if (!genuine_rank(X, ctx->r, tol.rank) || !is_new(X)) continue;

    const int comp = static_cast<int>(ctx->components.size());
    ctx->components.push_back(sys);
    found_x.push_back(X);
    found.emplace_back(comp, X);
  }

  // Every loop transports the whole known set, so the stopping rule applies to
  // the set rather than to one component at a time.
  // A base near a degenerate parameter can hold a critical point far out
  // towards infinity that no loop reaches in double precision. Halfway
  // through a stable streak the set moves to a fresh base, and the move
  // is kept only if every point arrives intact.
  TrackerConfig careful = cfg;
  careful.initial_step = std::max(cfg.min_step, 0.25 * cfg.initial_step);
  careful.max_step = std::max(careful.initial_step, 0.25 * cfg.max_step);
  int move_attempts = 0;
  auto try_move = [&] {
    ++move_attempts;
    CMat U_next;
    const CVec next = draw_base(U_next);
    const cplx gamma = random_gamma(rng);
    std::vector<PathResult> moved(found.size());
    parallel_for(found.size(), opts.threads, [&](std::size_t k) {
      const ReducedSystem& sys = ctx->components[found[k].first];
      moved[k] = track(sys, found[k].second, ParameterPath{base, next, gamma}, cfg);
      if (!moved[k].ok()) moved[k] = track(sys, found[k].second, ParameterPath{base, next, gamma}, careful);
    });
    std::vector<CMat> xs;
    for (const auto& res : moved) {
      ++set.stats.paths_tracked;
      if (!res.ok()) ++set.stats.path_failures;
      if (!res.ok() || !genuine_rank(res.X, ctx->r, tol.rank) ||
          std::any_of(xs.begin(), xs.end(), [&](const CMat& Y) { return same_point(Y, res.X, tol.dedup); }))
        return false;
      xs.push_back(res.X);
    }
    for (std::size_t k = 0; k < found.size(); ++k) found[k].second = xs[k];
    found_x = std::move(xs);
    base = next;
    set.U = U_next;
    ++set.stats.base_moves;
    return true;
  };

  int stable = 0, retries = 0, loops = 0;
  while (!found.empty() && stable < opts.stable_loops && loops < opts.max_loops) {
    if (set.stats.base_moves < opts.base_moves && move_attempts < 3 * opts.base_moves &&
        stable >= opts.stable_loops / 2)
      try_move();
    const auto legs = random_loop(base, rng);
    std::vector<Transport> out(found.size());
    parallel_for(found.size(), opts.threads, [&](std::size_t k) {
      out[k] = transport(ctx->components[found[k].first], found[k].second, legs, cfg);
    });
    ++loops;
    ++set.stats.loops;
    bool any_ok = false, added = false;
    for (std::size_t k = 0; k < out.size(); ++k) {
      const auto& t = out[k];
      set.stats.paths_tracked += t.paths;
      set.stats.path_failures += t.failures;
      if (!t.ok) continue;
      any_ok = true;
      if (!genuine_rank(t.X, ctx->r, tol.rank) || !is_new(t.X)) continue;
      const int comp = found[k].first;
      found_x.push_back(t.X);
      found.emplace_back(comp, t.X);
      added = true;
    }
    if (!any_ok) {
      if (++retries > opts.retry_cap) {
        set.warnings.push_back("monodromy loop failed on every path; retry cap reached");
        break;
      }
      continue;
    }
    stable = added ? 0 : stable + 1;
  }
  set.stats.loops_since_new = stable;
  set.stats.components = static_cast<int>(ctx->components.size());

  const CriticalSystem* literal = opts.lift_multipliers ? &system : nullptr;
  for (const auto& [comp, X] : found) {
    const PathResult refined = refine_point(ctx->components[comp], X, base);
    set.solutions.push_back(make_solution(literal, comp, set.U, refined, opts.lift_multipliers, tol));
  }
  set.context = ctx;
  return set;
}

SolutionSet solve_for_target(const SolutionSet& base, const CMat& U_target, const TrackerConfig& cfg,
                             const MonodromyOptions& opts, Rng& rng, const Tolerances& tol) {
  cfg.validate();
  if (!base.context) throw ContractViolation("solve_for_target: base set has no solver context");
  const SolverContext& ctx = *base.context;
  if (U_target.rows() != ctx.m || U_target.cols() != ctx.n) throw ContractViolation("solve_for_target: shape mismatch");
  SolutionSet out;
  out.context = base.context;
  out.U = U_target;
  out.stats.components = base.stats.components;
  if (ctx.components.empty()) return out;
  const CVec p_from = ctx.components.front().params(base.U);
  // Critical points scale with the data, so track to a target of the base's
  // norm and rescale the endpoints; this keeps the conditioning uniform.
  const double scale = base.U.norm() > 0.0 && U_target.norm() > 0.0 ? U_target.norm() / base.U.norm() : 1.0;
  const CVec p_to = ctx.components.front().params(U_target / scale);
  TrackerConfig careful = cfg;
  careful.initial_step = std::max(cfg.min_step, 0.25 * cfg.initial_step);
  careful.max_step = std::max(careful.initial_step, 0.25 * cfg.max_step);
  careful.max_first_correction = 0.1 * cfg.max_first_correction;
  const std::size_t count = base.solutions.size();

  auto distinct_endpoints = [&](const std::vector<PathResult>& results) {
    std::vector<CMat> seen;
    for (const auto& res : results)
      if (res.ok() && std::none_of(seen.begin(), seen.end(), [&](const CMat& Y) { return same_point(Y, res.X, tol.dedup); }))
        seen.push_back(res.X);
    return seen.size();
  };

  // One sweep with a common gamma; failed paths are retried with smaller
  // steps and then with a second gamma, and paths ending at the same point
  // (a jump) are retracked with smaller steps.
  auto sweep = [&](cplx gamma, cplx fallback_gamma) {
    auto run = [&](std::size_t k, bool tight) {
      const auto& s = base.solutions[k];
      const ReducedSystem& sys = ctx.components[s.component];
      PathResult res = track(sys, s.X, ParameterPath{p_from, p_to, gamma}, tight ? careful : cfg);
      if (!res.ok() && !tight) res = track(sys, s.X, ParameterPath{p_from, p_to, gamma}, careful);
      if (!res.ok()) res = track(sys, s.X, ParameterPath{p_from, p_to, fallback_gamma}, careful);
      return res;
    };
    std::vector<PathResult> results(count);
    parallel_for(count, opts.threads, [&](std::size_t k) { results[k] = run(k, false); });
    std::vector<std::size_t> hit;
    for (std::size_t a = 0; a < count; ++a) {
      if (!results[a].ok()) continue;
      for (std::size_t b = 0; b < count; ++b)
        if (a != b && results[b].ok() && same_point(results[a].X, results[b].X, tol.dedup)) {
          hit.push_back(a);
          break;
        }
    }
    if (!hit.empty()) parallel_for(hit.size(), opts.threads, [&](std::size_t t) { results[hit[t]] = run(hit[t], true); });
    return results;
  };

  std::vector<PathResult> results;
  std::size_t found = 0;
  for (int attempt = 0; attempt <= opts.retry_cap && found < count; ++attempt) {
    const cplx gamma = random_gamma(rng);
    const cplx fallback_gamma = random_gamma(rng);
    auto trial = sweep(gamma, fallback_gamma);
    const std::size_t d = distinct_endpoints(trial);
    if (attempt == 0 || d > found) {
      results = std::move(trial);
      found = d;
    }
    if (attempt > 0) ++out.stats.loops;  // counts full re-sweeps
  }

  for (auto& res : results) res.X *= scale;

  std::unique_ptr<CriticalSystem> literal;
  if (opts.lift_multipliers) literal = std::make_unique<CriticalSystem>(ctx.m, ctx.n, ctx.r, ctx.constraints);
  std::vector<CMat> endpoints;
  for (std::size_t k = 0; k < count; ++k) {
    out.stats.paths_tracked += 1;
    const auto& res = results[k];
    if (!res.ok()) {
      ++out.stats.path_failures;
      out.warnings.push_back("path " + std::to_string(k) + " failed: " + to_string(res.status));
      continue;
    }
    const int comp = base.solutions[k].component;
    const CMat& X = res.X;
    const bool collision = std::any_of(endpoints.begin(), endpoints.end(),
                                       [&](const CMat& Y) { return same_point(Y, X, tol.dedup); });
    if (collision) {
      out.warnings.push_back("endpoint collision at path " + std::to_string(k) + ": target is not generic");
      continue;
    }
    endpoints.push_back(X);
    out.solutions.push_back(make_solution(literal.get(), comp, U_target, res, opts.lift_multipliers, tol));
  }
  return out;
}

bool in_validated_envelope(int m, int n, int r, const ZeroPattern& S) {
  return std::min(m, n) <= 4 && r <= 3 && S.size() <= 4 && is_diagonal_type(S);
}

EdDegreeReport ed_degree(int m, int n, int r, const ZeroPattern& S, const TrackerConfig& cfg, int repeats,
                         std::uint64_t seed, const MonodromyOptions& opts) {
  if (repeats < 1) throw ContractViolation("ed_degree: repeats must be positive");
  const CriticalSystem system = CriticalSystem::from_pattern(m, n, r, S);
  EdDegreeReport report;
  report.beyond_envelope = !in_validated_envelope(m, n, r, S);
  if (report.beyond_envelope) report.warnings.push_back("beyond validated envelope");
  MonodromyOptions o = opts;
  o.lift_multipliers = false;
  for (int k = 0; k < repeats; ++k) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(k)));
    const SolutionSet set = monodromy_solve(system, cfg, o, rng);
    report.run_counts.push_back(set.count());
    for (const auto& w : set.warnings) report.warnings.push_back(w);
  }
  report.count = *std::max_element(report.run_counts.begin(), report.run_counts.end());
  report.unstable = std::any_of(report.run_counts.begin(), report.run_counts.end(),
                                [&](int c) { return c != report.count; });
  if (report.unstable) report.warnings.push_back("unstable count across repeats");
  return report;
}

RealClassification classify_real(const SolutionSet& solutions, const Mat& U, const Tolerances& tol) {
  if (!solutions.context) throw ContractViolation("classify_real: solution set has no context");
  const SolverContext& ctx = *solutions.context;
  const CriticalSystem literal(ctx.m, ctx.n, ctx.r, ctx.constraints);
  const CVec u = vectorize(CMat(U.cast<cplx>()));
  RealClassification out;
  for (std::size_t k = 0; k < solutions.solutions.size(); ++k) {
    const auto& s = solutions.solutions[k];
    if (s.X.imag().cwiseAbs().maxCoeff() > tol.real * (1.0 + s.X.norm())) continue;
    SystemPoint p = literal.lift_multipliers(vectorize(CMat(s.X.real().cast<cplx>())), u);
    p.lambda = p.lambda.real().cast<cplx>();
    p.mu = p.mu.real().cast<cplx>();
    const double residual = literal.polish(p, u, 4);
    RealPoint rp;
    rp.X = unvectorize(p.x, ctx.m, ctx.n).real();
    for (std::size_t c = 0; c < ctx.constraints.size(); ++c) {
      // coordinate constraints hold exactly after truncation
      const Mat& V = ctx.constraints[c];
      if ((V.array() != 0.0).count() == 1) rp.X = rp.X.cwiseProduct((V.array() == 0.0).cast<double>().matrix());
    }
    rp.distance_sq = (U - rp.X).squaredNorm();
    rp.residual = residual;
    rp.source = static_cast<int>(k);
    out.points.push_back(rp);
  }
  if (out.points.empty()) throw std::runtime_error("classify_real: no real solutions");
  std::stable_sort(out.points.begin(), out.points.end(),
                   [](const RealPoint& a, const RealPoint& b) { return a.distance_sq < b.distance_sq; });
  out.minimizer = out.points.front();
  return out;
}

int unmatched_conjugates(const SolutionSet& solutions, const Tolerances& tol) {
  const auto& sols = solutions.solutions;
  std::vector<bool> used(sols.size(), false);
  int unmatched = 0;
  for (std::size_t a = 0; a < sols.size(); ++a) {
    if (sols[a].is_real || used[a]) continue;
    bool matched = false;
    const CMat conj = sols[a].X.conjugate();
    for (std::size_t b = 0; b < sols.size() && !matched; ++b) {
      if (b == a || used[b] || sols[b].is_real) continue;
      if (same_point(conj, sols[b].X, tol.dedup)) {
        used[a] = used[b] = true;
        matched = true;
      }
    }
    if (!matched) ++unmatched;
  }
  return unmatched;
}

PathOutcome track_path(const CriticalSystem& system, const SystemPoint& start, const CVec& U_from, const CVec& U_to,
                       const TrackerConfig& cfg, Rng& rng) {
  cfg.validate();
  const int m = system.m(), n = system.n();
  const Mat N = constraint_basis(m, n, system.constraints());
  ReducedSystem sys = ReducedSystem::with_random_chart(m, n, system.r(), N, rng);
  const CMat X0 = unvectorize(start.x, m, n);
  sys.adapt_to_component(X0, rng);
  const CVec p_from = sys.params(unvectorize(U_from, m, n));
  const CVec p_to = sys.params(unvectorize(U_to, m, n));
  PathOutcome out;
  const PathResult res = track(sys, X0, ParameterPath{p_from, p_to, random_gamma(rng)}, cfg);
  out.status = res.status;
  out.point = system.lift_multipliers(vectorize(res.X), U_to);
  out.residual = system.evaluate(out.point, U_to).norm();
  return out;
}

}  // namespace lraz

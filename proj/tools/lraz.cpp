#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "lraz/homotopy.hpp"
#include "lraz/io.hpp"
#include "lraz/nnrank2.hpp"
#include "lraz/parallel.hpp"
#include "lraz/patterns.hpp"
#include "lraz/relations.hpp"
#include "lraz/spectral.hpp"

using namespace lraz;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitRuntime = 3;

std::uint64_t default_seed() {
  if (const char* env = std::getenv("LRAZ_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw ParseError(std::string("LRAZ_SEED is not an unsigned integer: ") + env);
    }
  }
  return 20240601;
}

std::string utc_now() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream out;
  out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return out.str();
}

struct Globals {
  std::uint64_t seed = 0;
  int threads = 1;
  std::string output;
  std::vector<std::string> argv;
};

struct Session {
  Globals& g;
  RunManifest manifest;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

  Session(Globals& globals, std::string command) : g(globals) {
    manifest.command = std::move(command);
    manifest.arguments = globals.argv;
    manifest.seed = globals.seed;
    manifest.started = utc_now();
  }

  void emit(json body) {
    manifest.wall_clock_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    body["manifest"] = manifest_to_json(manifest);
    const std::string text = body.dump(2) + "\n";
    if (g.output.empty() || g.output == "-") {
      std::cout << text;
    } else {
      std::ofstream out(g.output);
      if (!out) throw std::runtime_error("cannot write " + g.output);
      out << text;
    }
  }
};

json tracker_tolerances(const TrackerConfig& cfg, const Tolerances& tol) {
  return {{"corrector_tolerance", cfg.corrector_tolerance},
          {"min_step", cfg.min_step},
          {"max_step", cfg.max_step},
          {"max_first_correction", cfg.max_first_correction},
          {"dedup", tol.dedup},
          {"real", tol.real},
          {"rank", tol.rank},
          {"residual", tol.residual}};
}

// Inline matrices may use ';' between rows.
Mat read_matrix(const std::string& arg) {
  std::string text = read_text_argument(arg);
  if (text == arg) std::replace(text.begin(), text.end(), ';', '\n');
  return parse_matrix_csv(text);
}

// Either a full pattern ("m n; i j; ...", JSON) or bare entries for a known shape.
ZeroPattern read_pattern(const std::string& arg, std::optional<std::pair<int, int>> shape) {
  const std::string text = read_text_argument(arg);
  if (shape) {
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') {
      ZeroPattern S = parse_pattern(text);
      if (S.rows() != shape->first || S.cols() != shape->second)
        throw ParseError("pattern shape does not match the matrix");
      return S;
    }
    return parse_entries(text, shape->first, shape->second);
  }
  return parse_pattern(text);
}

json real_point_json(const RealCriticalPoint& p) {
  return {{"X", matrix_to_json(p.X)}, {"distance_sq", p.distance_sq}, {"provenance", p.provenance}};
}

long long binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  long long c = 1;
  for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return c;
}

// ---- covers ---------------------------------------------------------------

int run_covers(Globals& g, const std::string& pattern_arg) {
  Session s(g, "covers");
  const ZeroPattern S = read_pattern(pattern_arg, std::nullopt);
  const auto covers = minimal_covers(S);
  json body = covers_to_json(S, covers);
  body["rank1_ed_degree"] = rank1_ed_degree(S);
  s.emit(body);
  return kExitOk;
}

// ---- approx ---------------------------------------------------------------

struct ApproxArgs {
  std::string matrix;
  std::string pattern;
  int rank = 1;
  std::string method = "auto";
  std::string solutions_path;
};

json homotopy_approx(const Mat& U, const ZeroPattern& S, int r, Globals& g, Session& s,
                     const std::string& solutions_path) {
  TrackerConfig cfg;
  MonodromyOptions opts;
  opts.threads = g.threads;
  Tolerances tol;
  s.manifest.tolerances = tracker_tolerances(cfg, tol);
  Rng rng(g.seed);
  const CriticalSystem system = CriticalSystem::from_pattern(S.rows(), S.cols(), r, S);
  const SolutionSet base = monodromy_solve(system, cfg, opts, rng, tol);
  const SolutionSet target = solve_for_target(base, U.cast<cplx>(), cfg, opts, rng, tol);
  if (!solutions_path.empty()) {
    std::ofstream out(solutions_path);
    if (!out) throw std::runtime_error("cannot write " + solutions_path);
    out << solution_set_to_json(target, S, r).dump(2) << "\n";
  }
  const RealClassification real = classify_real(target, U, tol);
  json warnings = target.warnings;
  if (target.count() != base.count())
    warnings.push_back("target solved " + std::to_string(target.count()) + " of " +
                       std::to_string(base.count()) + " critical points");
  if (!in_validated_envelope(S.rows(), S.cols(), r, S)) warnings.push_back("beyond validated envelope");
  json points = json::array();
  for (const auto& p : real.points)
    points.push_back({{"X", matrix_to_json(p.X)}, {"distance_sq", p.distance_sq}, {"residual", p.residual}});
  bool tie = real.points.size() > 1 &&
             real.points[1].distance_sq - real.points[0].distance_sq <= 1e-12 * std::max(1.0, real.points[0].distance_sq);
  return {{"method", "homotopy"},
          {"best", {{"X", matrix_to_json(real.minimizer.X)}, {"distance_sq", real.minimizer.distance_sq}}},
          {"tie", tie},
          {"critical_points", target.count()},
          {"base_count", base.count()},
          {"real_critical_points", real.points.size()},
          {"real_points", points},
          {"warnings", warnings}};
}

int run_approx(Globals& g, const ApproxArgs& a) {
  Session s(g, "approx");
  const Mat U = read_matrix(a.matrix);
  const ZeroPattern S = read_pattern(a.pattern, std::make_pair(int(U.rows()), int(U.cols())));
  const int minmn = static_cast<int>(std::min(U.rows(), U.cols()));
  if (a.rank < 1 || a.rank >= minmn) throw ParseError("rank must satisfy 1 <= r < min(m, n)");

  json body = {{"m", U.rows()}, {"n", U.cols()}, {"r", a.rank}, {"pattern", pattern_to_json(S)}};
  SpectralTolerances stol;
  auto spectral = [&]() -> std::optional<SelectionResult> {
    if (a.rank == 1) return best_rank1_structured(U, S, stol);
    Block block;
    if (rectangular_complement(S, block)) return select_best(rectangular_rank_r(U, S, a.rank, stol));
    std::vector<Block> blocks;
    if (block_diagonal_complement(S, blocks)) return select_best(block_diagonal_rank_r(U, blocks, a.rank, stol));
    return std::nullopt;
  };

  std::optional<SelectionResult> sel;
  if (a.method != "homotopy") sel = spectral();
  if (a.method == "svd" && !sel)
    throw std::runtime_error("no spectral procedure applies to this pattern and rank; use --method homotopy");

  if (sel) {
    s.manifest.tolerances = {{"separation", stol.separation}, {"rank", stol.rank}, {"tie", 1e-12}};
    json all = json::array();
    for (const auto& p : sel->all) all.push_back(real_point_json(p));
    body["method"] = "svd";
    body["best"] = real_point_json(sel->best);
    body["tie"] = sel->tie;
    body["candidates"] = all;
    if (!a.solutions_path.empty()) body["warnings"] = {"--solutions is only written by the homotopy method"};
  } else {
    body.update(homotopy_approx(U, S, a.rank, g, s, a.solutions_path));
  }
  s.emit(body);
  return kExitOk;
}

// ---- eddeg ----------------------------------------------------------------

int run_eddeg(Globals& g, int m, int n, int r, const std::string& pattern_arg, int repeats) {
  Session s(g, "eddeg");
  if (m < 1 || n < 1) throw ParseError("shape must be positive");
  if (r < 1 || r >= std::min(m, n)) throw ParseError("rank must satisfy 1 <= r < min(m, n)");
  if (repeats < 1) throw ParseError("repeats must be positive");
  const ZeroPattern S = read_pattern(pattern_arg, std::make_pair(m, n));
  json body = {{"m", m}, {"n", n}, {"r", r}, {"pattern", pattern_to_json(S)}};
  if (S.empty()) {
    body["ed_degree"] = binomial(std::min(m, n), r);
    body["method"] = "closed_form";
    s.emit(body);
    return kExitOk;
  }
  TrackerConfig cfg;
  MonodromyOptions opts;
  opts.threads = g.threads;
  s.manifest.tolerances = tracker_tolerances(cfg, Tolerances{});
  const EdDegreeReport rep = ed_degree(m, n, r, S, cfg, repeats, g.seed, opts);
  body["ed_degree"] = rep.count;
  body["method"] = "monodromy";
  body["run_counts"] = rep.run_counts;
  body["unstable"] = rep.unstable;
  body["beyond_envelope"] = rep.beyond_envelope;
  body["warnings"] = rep.warnings;
  s.emit(body);
  return kExitOk;
}

// ---- verify ---------------------------------------------------------------

int run_verify(Globals& g, const std::string& path, bool conjectures) {
  Session s(g, "verify");
  json j;
  try {
    j = json::parse(read_text_argument(path));
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  const SolvedInstance inst = solved_instance_from_json(j);
  if (inst.r < 1 || inst.r >= std::min(inst.m, inst.n)) throw ParseError("rank must satisfy 1 <= r < min(m, n)");
  s.manifest.tolerances = {{"rank", 1e-7}, {"linear", "1e-7 (1 + |U|)(1 + |X|)"}, {"det", 1e-8}};
  const VerificationReport report = verify_instance(inst.set, inst.pattern, inst.r);
  json body = verification_to_json(report);
  if (!conjectures) body.erase("conjecture_observations");
  s.emit(body);
  return report.pass() ? kExitOk : kExitCheckFailed;
}

// ---- nnr2 -----------------------------------------------------------------

int run_nnr2_solve(Globals& g, const std::string& matrix, bool short_circuit) {
  Session s(g, "nnr2 solve");
  const Mat U = read_matrix(matrix);
  if (U.rows() != 3 || U.cols() != 3) throw ParseError("nnr2 expects a 3 x 3 matrix");
  if ((U.array() < 0.0).any()) throw ParseError("nnr2 expects a nonnegative matrix");
  NnOptions opts;
  opts.short_circuit = short_circuit;
  s.manifest.tolerances = {{"tau_nn", opts.tau_nn}, {"tie", opts.tie}};
  MonodromyOptions mopts;
  mopts.threads = g.threads;
  const NonnegRank2Solver solver(g.seed, TrackerConfig{}, mopts);
  Rng rng(derive_seed(g.seed, 1));
  const NnApproxResult res = solver.best_nonneg_rank2(U, rng, opts);
  json body = nn_result_to_json(res);
  body["U"] = matrix_to_json(U);
  s.emit(body);
  return kExitOk;
}

int run_nnr2_experiment(Globals& g, int count, const std::string& csv_path) {
  Session s(g, "nnr2 experiment");
  if (count < 1) throw ParseError("count must be positive");
  NnOptions opts;
  s.manifest.tolerances = {{"tau_nn", opts.tau_nn}, {"tie", opts.tie}};
  MonodromyOptions mopts;
  mopts.threads = 1;
  const NonnegRank2Solver solver(g.seed, TrackerConfig{}, mopts);
  const ExperimentSummary summary = sampling_experiment(solver, count, g.seed, g.threads, opts);
  std::ofstream out(csv_path);
  if (!out) throw std::runtime_error("cannot write " + csv_path);
  out << experiment_csv(summary);
  json body = experiment_summary_to_json(summary);
  body["csv"] = csv_path;
  s.emit(body);
  return kExitOk;
}

// ---- tables ---------------------------------------------------------------

// Reference rank-2 counts for diagonal patterns, keyed by (m, n, s) with m <= n.
const std::map<std::tuple<int, int, int>, long long>& r2_diagonal_table() {
  static const std::map<std::tuple<int, int, int>, long long> t = {
      {{3, 3, 1}, 8},    {{3, 4, 1}, 8},    {{3, 5, 1}, 8},    {{4, 4, 1}, 21},  {{4, 5, 1}, 21},
      {{5, 5, 1}, 40},   {{3, 3, 2}, 25},   {{3, 4, 2}, 29},   {{3, 5, 2}, 29},  {{4, 4, 2}, 85},
      {{4, 5, 2}, 93},   {{5, 5, 2}, 181},  {{3, 3, 3}, 30},   {{3, 4, 3}, 62},  {{3, 5, 3}, 66},
      {{4, 4, 3}, 282},  {{4, 5, 3}, 358},  {{5, 5, 3}, 750},  {{4, 4, 4}, 488}, {{4, 5, 4}, 968}};
  return t;
}

ZeroPattern diagonal_pattern(int m, int n, int s) {
  std::vector<Index2> e;
  for (int k = 0; k < s; ++k) e.emplace_back(k, k);
  return ZeroPattern(m, n, e);
}

int run_tables(Globals& g, const std::string& name, int max_size, int repeats) {
  Session s(g, "tables");
  if (max_size < 1) throw ParseError("max-size must be positive");
  json rows = json::array();
  bool mismatch = false;
  TrackerConfig cfg;
  MonodromyOptions opts;
  opts.threads = g.threads;

  auto record = [&](int m, int n, int r, int sz, long long expected, long long computed, bool in_envelope,
                    const std::string& source) {
    const bool match = expected == computed;
    if (!match && in_envelope) mismatch = true;
    rows.push_back({{"m", m},
                    {"n", n},
                    {"r", r},
                    {"s", sz},
                    {"expected", expected},
                    {"computed", computed},
                    {"match", match},
                    {"in_envelope", in_envelope},
                    {"source", source}});
  };

  if (name == "rank1-diagonal") {
    for (int m = 1; m <= max_size; ++m)
      for (int n = 1; n <= max_size; ++n)
        for (int sz = 0; sz <= std::min(m, n); ++sz) {
          const ZeroPattern S = diagonal_pattern(m, n, sz);
          record(m, n, 1, sz, rank1_ed_degree_closed_form(PatternKind::Diagonal, sz, m, n), rank1_ed_degree(S), true,
                 "closed_form_vs_covers");
        }
    if (max_size >= 3) record(3, 3, 1, 1, 4, rank1_ed_degree(diagonal_pattern(3, 3, 1)), true, "reference");
  } else if (name == "r2-diagonal") {
    s.manifest.tolerances = tracker_tolerances(cfg, Tolerances{});
    for (const auto& [key, expected] : r2_diagonal_table()) {
      const auto [m, n, sz] = key;
      if (n > max_size) continue;
      const ZeroPattern S = diagonal_pattern(m, n, sz);
      const EdDegreeReport rep = ed_degree(m, n, 2, S, cfg, repeats, g.seed, opts);
      record(m, n, 2, sz, expected, rep.count, in_validated_envelope(m, n, 2, S), "reference");
    }
  } else if (name == "eddeg-corank1") {
    s.manifest.tolerances = tracker_tolerances(cfg, Tolerances{});
    for (int n = 3; n <= max_size; ++n) {
      const ZeroPattern S = diagonal_pattern(n, n, 1);
      const EdDegreeReport rep = ed_degree(n, n, n - 1, S, cfg, repeats, g.seed, opts);
      record(n, n, n - 1, 1, 5LL * n - 7, rep.count, in_validated_envelope(n, n, n - 1, S), "reference");
    }
  } else {
    throw ParseError("unknown table '" + name + "'");
  }
  s.emit({{"table", name}, {"max_size", max_size}, {"rows", rows}, {"all_match_in_envelope", !mismatch}});
  return mismatch ? kExitCheckFailed : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  Globals g;
  for (int i = 1; i < argc; ++i) g.argv.emplace_back(argv[i]);

  CLI::App app{"Structured low-rank approximation with zero patterns"};
  app.require_subcommand(1);
  std::optional<std::uint64_t> seed;
  app.add_option("--seed", seed, "master seed (default: $LRAZ_SEED or 20240601)");
  g.threads = default_thread_count();
  app.add_option("--threads", g.threads, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("-o,--output", g.output, "write the JSON result here instead of stdout");

  std::string pattern_arg;
  auto* covers = app.add_subcommand("covers", "minimal covers of a zero pattern");
  covers->add_option("pattern", pattern_arg, "pattern text, JSON or file")->required();

  ApproxArgs aa;
  auto* approx = app.add_subcommand("approx", "best structured rank-r approximation");
  approx->add_option("--matrix,-U", aa.matrix, "CSV file or inline rows separated by ';'")->required();
  approx->add_option("--pattern,-S", aa.pattern, "zero entries 'i j; i j' (1-based), JSON or file")
      ->default_val("");
  approx->add_option("--rank,-r", aa.rank)->default_val(1);
  approx->add_option("--method", aa.method)->check(CLI::IsMember({"auto", "svd", "homotopy"}))->default_val("auto");
  approx->add_option("--solutions", aa.solutions_path, "write all complex critical points here (homotopy)");

  int m = 0, n = 0, r = 0, repeats = 3;
  std::string ed_pattern;
  auto* eddeg = app.add_subcommand("eddeg", "ED degree by monodromy");
  eddeg->add_option("--m", m)->required();
  eddeg->add_option("--n", n)->required();
  eddeg->add_option("--rank,-r", r)->required();
  eddeg->add_option("--pattern,-S", ed_pattern)->default_val("");
  eddeg->add_option("--repeats", repeats)->default_val(3);

  std::string verify_path;
  bool conjectures = false;
  auto* verify = app.add_subcommand("verify", "check a solved instance against the proved relations");
  verify->add_option("instance", verify_path, "solved instance JSON (as written by approx --solutions)")->required();
  verify->add_flag("--conjectures", conjectures, "also report conjectural observations");

  auto* nnr2 = app.add_subcommand("nnr2", "nonnegative rank-2 approximation of 3 x 3 matrices");
  nnr2->require_subcommand(1);
  std::string nn_matrix;
  bool short_circuit = false;
  auto* nn_solve = nnr2->add_subcommand("solve", "best nonnegative rank-2 approximation");
  nn_solve->add_option("--matrix,-U", nn_matrix)->required();
  nn_solve->add_flag("--short-circuit", short_circuit, "skip enumeration when the SVD truncation is nonnegative");
  int count = 1000;
  std::string csv_path = "nnr2_experiment.csv";
  auto* nn_exp = nnr2->add_subcommand("experiment", "sampling experiment on the scaled simplex");
  nn_exp->add_option("--count", count)->default_val(1000);
  nn_exp->add_option("--csv", csv_path)->default_val("nnr2_experiment.csv");

  std::string table_name;
  int max_size = 3;
  auto* tables = app.add_subcommand("tables", "recompute reference count tables");
  tables->add_option("--name", table_name)
      ->required()
      ->check(CLI::IsMember({"rank1-diagonal", "r2-diagonal", "eddeg-corank1"}));
  tables->add_option("--max-size", max_size)->default_val(3);
  tables->add_option("--repeats", repeats)->default_val(3);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    g.seed = seed ? *seed : default_seed();
    if (covers->parsed()) return run_covers(g, pattern_arg);
    if (approx->parsed()) return run_approx(g, aa);
    if (eddeg->parsed()) return run_eddeg(g, m, n, r, ed_pattern, repeats);
    if (verify->parsed()) return run_verify(g, verify_path, conjectures);
    if (nn_solve->parsed()) return run_nnr2_solve(g, nn_matrix, short_circuit);
    if (nn_exp->parsed()) return run_nnr2_experiment(g, count, csv_path);
    if (tables->parsed()) return run_tables(g, table_name, max_size, repeats);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitUsage;
}

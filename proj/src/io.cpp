#include "lraz/io.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

namespace lraz {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<long long> integers(const std::string& text) {
  std::vector<long long> out;
  std::string token;
  std::string cleaned = text;
  for (char& c : cleaned)
    if (c == ';' || c == ',' || c == '\n' || c == '\t' || c == '\r') c = ' ';
  std::istringstream tokens(cleaned);
  while (tokens >> token) {
    std::size_t used = 0;
    long long v = 0;
    try {
      v = std::stoll(token, &used);
    } catch (const std::exception&) {
      throw ParseError("not an integer: '" + token + "'");
    }
    if (used != token.size()) throw ParseError("not an integer: '" + token + "'");
    out.push_back(v);
  }
  return out;
}

ZeroPattern pattern_from_pairs(int m, int n, const std::vector<long long>& v, std::size_t offset) {
  if ((v.size() - offset) % 2 != 0) throw ParseError("pattern entries must come in (i, j) pairs");
  std::vector<Index2> entries;
  for (std::size_t k = offset; k < v.size(); k += 2) {
    if (v[k] < 1 || v[k] > m || v[k + 1] < 1 || v[k + 1] > n) {
      std::ostringstream msg;
      msg << "pattern index (" << v[k] << ", " << v[k + 1] << ") outside a " << m << " x " << n << " matrix";
      throw ParseError(msg.str());
    }
    entries.emplace_back(static_cast<int>(v[k]) - 1, static_cast<int>(v[k + 1]) - 1);
  }
  return ZeroPattern(m, n, std::move(entries));
}

}  // namespace

std::string read_text_argument(const std::string& arg) {
  std::error_code ec;
  if (!arg.empty() && std::filesystem::is_regular_file(arg, ec)) {
    std::ifstream in(arg);
    if (!in) throw ParseError("cannot read " + arg);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
  }
  return arg;
}

ZeroPattern parse_pattern(const std::string& raw) {
  const std::string text = trim(raw);
  if (!text.empty() && text.front() == '{') {
    json j;
    try {
      j = json::parse(text);
    } catch (const json::exception& e) {
      throw ParseError(std::string("invalid pattern JSON: ") + e.what());
    }
    return pattern_from_json(j);
  }
  const auto v = integers(text);
  if (v.size() < 2) throw ParseError("pattern must start with its shape 'm n'");
  if (v[0] < 1 || v[1] < 1 || v[0] > 64 || v[1] > 64) throw ParseError("pattern shape out of range");
  return pattern_from_pairs(static_cast<int>(v[0]), static_cast<int>(v[1]), v, 2);
}

ZeroPattern parse_entries(const std::string& text, int m, int n) {
  return pattern_from_pairs(m, n, integers(trim(text)), 0);
}

json pattern_to_json(const ZeroPattern& S) {
  json zeros = json::array();
  for (const auto& [i, j] : S.entries()) zeros.push_back({i + 1, j + 1});
  return {{"m", S.rows()}, {"n", S.cols()}, {"zeros", zeros}};
}

ZeroPattern pattern_from_json(const json& j) {
  try {
    const int m = j.at("m").get<int>(), n = j.at("n").get<int>();
    if (m < 1 || n < 1) throw ParseError("pattern shape out of range");
    std::vector<long long> v;
    for (const auto& e : j.at("zeros")) {
      if (!e.is_array() || e.size() != 2) throw ParseError("pattern zeros must be [i, j] pairs");
      v.push_back(e[0].get<long long>());
      v.push_back(e[1].get<long long>());
    }
    return pattern_from_pairs(m, n, v, 0);
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid pattern JSON: ") + e.what());
  }
}

Mat parse_matrix_csv(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    std::vector<double> row;
    std::istringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) {
      cell = trim(cell);
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(cell, &used);
      } catch (const std::exception&) {
        throw ParseError("invalid matrix entry '" + cell + "'");
      }
      if (used != cell.size()) throw ParseError("invalid matrix entry '" + cell + "'");
      row.push_back(v);
    }
    if (!rows.empty() && row.size() != rows.front().size()) throw ParseError("ragged matrix rows");
    rows.push_back(std::move(row));
  }
  if (rows.empty() || rows.front().empty()) throw ParseError("empty matrix");
  Mat M(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j) M(i, j) = rows[i][j];
  return M;
}

std::string matrix_to_csv(const Mat& M) {
  std::ostringstream out;
  out.precision(17);
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    for (Eigen::Index j = 0; j < M.cols(); ++j) out << (j ? "," : "") << M(i, j);
    out << "\n";
  }
  return out.str();
}

json complex_to_json(cplx z) { return json::array({z.real(), z.imag()}); }

cplx complex_from_json(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2) throw ParseError("complex numbers are [re, im] pairs");
  return {j[0].get<double>(), j[1].get<double>()};
}

json matrix_to_json(const Mat& M) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < M.cols(); ++j) row.push_back(M(i, j));
    rows.push_back(row);
  }
  return rows;
}

json matrix_to_json(const CMat& M) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < M.cols(); ++j) row.push_back(complex_to_json(M(i, j)));
    rows.push_back(row);
  }
  return rows;
}

CMat complex_matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty() || !j[0].is_array()) throw ParseError("matrices are arrays of rows");
  CMat M(j.size(), j[0].size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (j[i].size() != j[0].size()) throw ParseError("ragged matrix rows");
    for (std::size_t k = 0; k < j[i].size(); ++k) M(i, k) = complex_from_json(j[i][k]);
  }
  return M;
}

json covers_to_json(const ZeroPattern& S, const std::vector<MinimalCover>& covers) {
  json list = json::array();
  for (const auto& c : covers) {
    json rows = json::array(), cols = json::array();
    for (int i : c.rows) rows.push_back(i + 1);
    for (int j : c.cols) cols.push_back(j + 1);
    list.push_back({{"rows", rows}, {"cols", cols}});
  }
  return {{"pattern", pattern_to_json(S)}, {"count", covers.size()}, {"covers", list}};
}

json manifest_to_json(const RunManifest& m) {
  return {{"command", m.command},
          {"arguments", m.arguments},
          {"seed", m.seed},
          {"tolerances", m.tolerances},
          {"wall_clock_seconds", m.wall_clock_seconds},
          {"started", m.started},
          {"versions", {{"lraz", "0.1.0"}, {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." +
                                                       std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                                       std::to_string(EIGEN_MINOR_VERSION)}}}};
}

json solution_set_to_json(const SolutionSet& set, const ZeroPattern& S, int r) {
  json sols = json::array();
  for (const auto& s : set.solutions) {
    sols.push_back({{"X", matrix_to_json(s.X)},
                    {"residual", s.residual},
                    {"is_real", s.is_real},
                    {"distance_sq", complex_to_json(s.distance_sq)},
                    {"condition", s.condition},
                    {"component", s.component}});
  }
  return {{"m", S.rows()},
          {"n", S.cols()},
          {"r", r},
          {"pattern", pattern_to_json(S)},
          {"U", matrix_to_json(set.U)},
          {"count", set.count()},
          {"trace_test_run", set.trace_test_run},
          {"stats",
           {{"loops", set.stats.loops},
            {"paths_tracked", set.stats.paths_tracked},
            {"path_failures", set.stats.path_failures},
            {"components", set.stats.components}}},
          {"warnings", set.warnings},
          {"solutions", sols}};
}

SolvedInstance solved_instance_from_json(const json& j) {
  try {
    SolvedInstance inst;
    inst.m = j.at("m").get<int>();
    inst.n = j.at("n").get<int>();
    inst.r = j.at("r").get<int>();
    inst.pattern = pattern_from_json(j.at("pattern"));
    if (inst.pattern.rows() != inst.m || inst.pattern.cols() != inst.n) throw ParseError("pattern shape mismatch");
    inst.set.U = complex_matrix_from_json(j.at("U"));
    if (inst.set.U.rows() != inst.m || inst.set.U.cols() != inst.n) throw ParseError("U has the wrong shape");
    for (const auto& s : j.at("solutions")) {
      CriticalSolution sol;
      sol.X = complex_matrix_from_json(s.at("X"));
      if (sol.X.rows() != inst.m || sol.X.cols() != inst.n) throw ParseError("solution has the wrong shape");
      sol.residual = s.value("residual", 0.0);
      sol.is_real = s.value("is_real", false);
      inst.set.solutions.push_back(std::move(sol));
    }
    return inst;
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid solved instance: ") + e.what());
  }
}

json verification_to_json(const VerificationReport& report) {
  json checks = json::array(), obs = json::array();
  for (const auto& c : report.theorem_checks)
    checks.push_back({{"name", c.name}, {"status", c.pass ? "PASS" : "FAIL"}, {"max_residual", c.max_residual}});
  for (const auto& o : report.conjecture_observations)
    obs.push_back({{"name", o.name}, {"holds", o.holds}, {"detail", o.detail}});
  return {{"instance", report.instance}, {"theorem_checks", checks}, {"conjecture_observations", obs}};
}

json nn_result_to_json(const NnApproxResult& result) {
  json census = json::object();
  for (int k = 0; k < kNnFamilies; ++k) {
    const auto& c = result.census[k];
    census[to_string(static_cast<NnFamily>(k))] = {{"expected", c.expected},   {"generated", c.generated},
                                                   {"real", c.real},           {"nonnegative", c.nonnegative},
                                                   {"discarded", c.discarded}, {"complete", c.complete},
                                                   {"skipped", c.skipped}};
  }
  return {{"best", matrix_to_json(result.best)},
          {"distance_sq", result.distance_sq},
          {"zero_pattern", pattern_to_json(result.zero_pattern)},
          {"family", to_string(result.family)},
          {"interior", result.interior},
          {"incomplete", result.incomplete},
          {"tie", result.tie},
          {"census", census},
          {"warnings", result.warnings}};
}

json experiment_summary_to_json(const ExperimentSummary& s) {
  json hist = json::object();
  for (std::size_t z = 0; z < s.zero_histogram.size(); ++z)
    if (s.zero_histogram[z] > 0) hist[std::to_string(z)] = s.zero_histogram[z];
  return {{"count", s.count},
          {"failures", s.failures},
          {"incomplete", s.incomplete},
          {"interior", s.interior},
          {"zero_histogram", hist},
          {"proportions", {{"0", s.proportion(0)}, {"1", s.proportion(1)}, {"2", s.proportion(2)}}},
          {"observations",
           {{"a_violations", s.obs_a_violations}, {"b_holds", s.obs_b_holds}, {"b_fails", s.obs_b_fails}}}};
}

std::string experiment_csv(const ExperimentSummary& s) {
  std::ostringstream out;
  out << "sample_id,zeros_count,pattern,obs_b_status\n";
  for (const auto& r : s.records) {
    std::string pattern;
    for (const auto& [i, j] : r.pattern.entries())
      pattern += (pattern.empty() ? "" : " ") + std::to_string(i + 1) + ":" + std::to_string(j + 1);
    out << r.id << "," << (r.failed ? -1 : r.zeros) << "," << pattern << "," << (r.failed ? "failed" : r.obs_b) << "\n";
  }
  return out.str();
}

}  // namespace lraz

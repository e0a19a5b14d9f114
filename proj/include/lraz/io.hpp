#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "lraz/homotopy.hpp"
#include "lraz/nnrank2.hpp"
#include "lraz/patterns.hpp"
#include "lraz/relations.hpp"
#include "lraz/types.hpp"

namespace lraz {

using json = nlohmann::json;

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Pattern text: "m n; i j; i j; ..." with 1-based indices, or JSON
// {"m": 3, "n": 3, "zeros": [[1, 1], ...]}.
ZeroPattern parse_pattern(const std::string& text);
// Entries only ("i j; i j" or "i j i j"), for a known shape; empty means no zeros.
ZeroPattern parse_entries(const std::string& text, int m, int n);
// A file path if it names a readable file, otherwise inline text.
std::string read_text_argument(const std::string& arg);

json pattern_to_json(const ZeroPattern& S);
ZeroPattern pattern_from_json(const json& j);

Mat parse_matrix_csv(const std::string& text);
std::string matrix_to_csv(const Mat& M);

json complex_to_json(cplx z);
cplx complex_from_json(const json& j);
json matrix_to_json(const Mat& M);
json matrix_to_json(const CMat& M);  // entries as [re, im]
CMat complex_matrix_from_json(const json& j);

json covers_to_json(const ZeroPattern& S, const std::vector<MinimalCover>& covers);

struct RunManifest {
  std::string command;
  std::vector<std::string> arguments;
  std::uint64_t seed = 0;
  json tolerances = json::object();
  double wall_clock_seconds = 0.0;
  std::string started;  // ISO-8601 UTC
};
json manifest_to_json(const RunManifest& m);

// Solved instance: shape, rank, pattern, U and every solution X.
json solution_set_to_json(const SolutionSet& set, const ZeroPattern& S, int r);

struct SolvedInstance {
  int m = 0, n = 0, r = 0;
  ZeroPattern pattern;
  SolutionSet set;  // without a solver context
};
SolvedInstance solved_instance_from_json(const json& j);

json verification_to_json(const VerificationReport& report);
json nn_result_to_json(const NnApproxResult& result);
json experiment_summary_to_json(const ExperimentSummary& summary);
std::string experiment_csv(const ExperimentSummary& summary);

}  // namespace lraz

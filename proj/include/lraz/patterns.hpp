#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace lraz {

using Index2 = std::pair<int, int>;

// Positions of forced zeros in an m x n matrix. Indices are 0-based here;
// external formats are 1-based (see from_one_based and io.hpp).
class ZeroPattern {
 public:
  ZeroPattern() = default;
  ZeroPattern(int m, int n, std::vector<Index2> entries = {});
  static ZeroPattern from_one_based(int m, int n, const std::vector<Index2>& entries);

  int rows() const { return m_; }
  int cols() const { return n_; }
  const std::vector<Index2>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  bool contains(int i, int j) const;

  ZeroPattern transposed() const;
  // Image under row permutation rp and column permutation cp (i -> rp[i], j -> cp[j]).
  ZeroPattern permuted(const std::vector<int>& rp, const std::vector<int>& cp) const;

  std::string to_string() const;  // "m n; i j; ..." with 1-based indices

  bool operator==(const ZeroPattern&) const = default;
  auto operator<=>(const ZeroPattern&) const = default;

 private:
  int m_ = 0;
  int n_ = 0;
  std::vector<Index2> entries_;
};

struct MaskMatrix {
  int m = 0;
  int n = 0;
  std::vector<std::uint8_t> bits;  // row-major
  int bit(int i, int j) const { return bits[static_cast<std::size_t>(i) * n + j]; }
};

MaskMatrix mask_matrix(const ZeroPattern& pattern);

// A rectangular pattern (rows x [n]) u ([m] x cols), stored 0-based and sorted.
struct MinimalCover {
  std::vector<int> rows;
  std::vector<int> cols;
  bool operator==(const MinimalCover&) const = default;
  auto operator<=>(const MinimalCover&) const = default;
};

struct BipartiteGraph {
  int left = 0;
  int right = 0;
  std::vector<std::vector<int>> adjacency;  // left vertex -> right neighbours
};

BipartiteGraph bipartite_graph(const ZeroPattern& pattern);

bool is_cover(const ZeroPattern& pattern, const MinimalCover& cover);

// Minimal covers via the branching recursion on the first left vertex,
// memoised on the induced subgraph. Sorted output.
std::vector<MinimalCover> minimal_covers(const ZeroPattern& pattern);

// Exhaustive oracle over all row/column subsets; requires m * n <= 30.
std::vector<MinimalCover> covers_bruteforce(const ZeroPattern& pattern);

long long rank1_ed_degree(const ZeroPattern& pattern);

enum class PatternKind { Row, Column, Diagonal };

long long rank1_ed_degree_closed_form(PatternKind kind, int s, int m, int n);

// Patterns whose zeros lie in a single row / single column / distinct rows and columns.
bool is_row_type(const ZeroPattern& pattern);
bool is_column_type(const ZeroPattern& pattern);
bool is_diagonal_type(const ZeroPattern& pattern);

// Orbit under row x column permutations, plus transposition when m == n.
// The canonical representative is the member whose sorted entry list is
// lexicographically smallest, so a single zero canonicalises to (0, 0).
ZeroPattern canonical_form(const ZeroPattern& pattern);
std::vector<ZeroPattern> orbit(const ZeroPattern& pattern);  // requires m * n <= 16
long long orbit_size(const ZeroPattern& pattern);

// Permutations (row, column, transposed) carrying `from` onto `to`, if any.
struct PatternMap {
  bool transpose = false;
  std::vector<int> row_perm;
  std::vector<int> col_perm;
};
bool find_pattern_map(const ZeroPattern& from, const ZeroPattern& to, PatternMap& out);

}  // namespace lraz

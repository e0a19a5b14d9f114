#include "lraz/patterns.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "lraz/errors.hpp"

namespace lraz {

ZeroPattern::ZeroPattern(int m, int n, std::vector<Index2> entries)
    : m_(m), n_(n), entries_(std::move(entries)) {
  if (m <= 0 || n <= 0) throw ContractViolation("pattern dimensions must be positive");
  for (const auto& [i, j] : entries_) {
    if (i < 0 || i >= m || j < 0 || j >= n) {
      std::ostringstream msg;
      msg << "pattern entry (" << i + 1 << "," << j + 1 << ") outside " << m << "x" << n;
      throw ContractViolation(msg.str());
    }
  }
  std::sort(entries_.begin(), entries_.end());
  entries_.erase(std::unique(entries_.begin(), entries_.end()), entries_.end());
}

ZeroPattern ZeroPattern::from_one_based(int m, int n, const std::vector<Index2>& entries) {
  std::vector<Index2> shifted;
  shifted.reserve(entries.size());
  for (const auto& [i, j] : entries) shifted.emplace_back(i - 1, j - 1);
  return ZeroPattern(m, n, std::move(shifted));
}

bool ZeroPattern::contains(int i, int j) const {
  return std::binary_search(entries_.begin(), entries_.end(), Index2{i, j});
}

ZeroPattern ZeroPattern::transposed() const {
  std::vector<Index2> t;
  t.reserve(entries_.size());
  for (const auto& [i, j] : entries_) t.emplace_back(j, i);
  return ZeroPattern(n_, m_, std::move(t));
}

ZeroPattern ZeroPattern::permuted(const std::vector<int>& rp, const std::vector<int>& cp) const {
  std::vector<Index2> p;
  p.reserve(entries_.size());
  for (const auto& [i, j] : entries_) p.emplace_back(rp[i], cp[j]);
  return ZeroPattern(m_, n_, std::move(p));
}

std::string ZeroPattern::to_string() const {
  std::ostringstream out;
  out << m_ << " " << n_;
  for (const auto& [i, j] : entries_) out << "; " << i + 1 << " " << j + 1;
  return out.str();
}

MaskMatrix mask_matrix(const ZeroPattern& pattern) {
  MaskMatrix mask{pattern.rows(), pattern.cols(),
                  std::vector<std::uint8_t>(static_cast<std::size_t>(pattern.rows()) * pattern.cols(), 0)};
  for (const auto& [i, j] : pattern.entries()) mask.bits[static_cast<std::size_t>(i) * mask.n + j] = 1;
  return mask;
}

BipartiteGraph bipartite_graph(const ZeroPattern& pattern) {
  BipartiteGraph g{pattern.rows(), pattern.cols(), std::vector<std::vector<int>>(pattern.rows())};
  for (const auto& [i, j] : pattern.entries()) g.adjacency[i].push_back(j);
  return g;
}

bool is_cover(const ZeroPattern& pattern, const MinimalCover& cover) {
  std::vector<bool> r(pattern.rows(), false), c(pattern.cols(), false);
  for (int i : cover.rows) r[i] = true;
  for (int j : cover.cols) c[j] = true;
  for (const auto& [i, j] : pattern.entries())
    if (!r[i] && !c[j]) return false;
  return true;
}

namespace {

using Mask = std::uint64_t;
using CoverBits = std::pair<Mask, Mask>;  // (rows, cols)

void check_bitmask_size(const ZeroPattern& p) {
  if (p.rows() > 64 || p.cols() > 64) throw ContractViolation("patterns are limited to 64 rows and columns");
}

std::vector<Mask> row_adjacency(const ZeroPattern& p) {
  std::vector<Mask> adj(p.rows(), 0);
  for (const auto& [i, j] : p.entries()) adj[i] |= Mask{1} << j;
  return adj;
}

MinimalCover to_cover(const CoverBits& bits) {
  MinimalCover c;
  for (int i = 0; i < 64; ++i)
    if (bits.first >> i & 1) c.rows.push_back(i);
  for (int j = 0; j < 64; ++j)
    if (bits.second >> j & 1) c.cols.push_back(j);
  return c;
}

bool subset_of(const CoverBits& a, const CoverBits& b) {
  return (a.first & ~b.first) == 0 && (a.second & ~b.second) == 0;
}

// Keep only inclusion-minimal members (duplicates collapse to one).
std::vector<CoverBits> keep_minimal(std::vector<CoverBits> covers) {
  std::sort(covers.begin(), covers.end());
  covers.erase(std::unique(covers.begin(), covers.end()), covers.end());
  std::vector<CoverBits> out;
  for (std::size_t a = 0; a < covers.size(); ++a) {
    bool minimal = true;
    for (std::size_t b = 0; b < covers.size() && minimal; ++b)
      if (a != b && subset_of(covers[b], covers[a])) minimal = false;
    if (minimal) out.push_back(covers[a]);
  }
  return out;
}

class CoverSolver {
 public:
  explicit CoverSolver(std::vector<Mask> adj) : adj_(std::move(adj)) {}

  const std::vector<CoverBits>& solve(Mask left, Mask right) {
    // Drop left vertices with no neighbours in the current right set.
    Mask active = 0;
    for (Mask rest = left; rest; rest &= rest - 1) {
      const int u = std::countr_zero(rest);
      if (adj_[u] & right) active |= Mask{1} << u;
    }
    const CoverBits key{active, right};
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;

    std::vector<CoverBits> result;
    if (active == 0) {
      result.push_back({0, 0});
    } else {
      const int u = std::countr_zero(active);
      const Mask rest = active & ~(Mask{1} << u);
      // u in the cover
      for (const auto& c : solve(rest, right)) result.push_back({c.first | Mask{1} << u, c.second});
      // u outside the cover: all its neighbours must be in it
      const Mask nbrs = adj_[u] & right;
      for (const auto& c : solve(rest, right & ~nbrs)) result.push_back({c.first, c.second | nbrs});
      result = keep_minimal(std::move(result));
    }
    return memo_.emplace(key, std::move(result)).first->second;
  }

 private:
  std::vector<Mask> adj_;
  std::map<CoverBits, std::vector<CoverBits>> memo_;
};

std::vector<MinimalCover> to_sorted_covers(const std::vector<CoverBits>& bits) {
  std::vector<MinimalCover> out;
  out.reserve(bits.size());
  for (const auto& b : bits) out.push_back(to_cover(b));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

std::vector<MinimalCover> minimal_covers(const ZeroPattern& pattern) {
  check_bitmask_size(pattern);
  const Mask all_left = pattern.rows() == 64 ? ~Mask{0} : (Mask{1} << pattern.rows()) - 1;
  const Mask all_right = pattern.cols() == 64 ? ~Mask{0} : (Mask{1} << pattern.cols()) - 1;
  CoverSolver solver(row_adjacency(pattern));
  // Final pairwise filter guards minimality of the merged branches.
  return to_sorted_covers(keep_minimal(solver.solve(all_left, all_right)));
}

std::vector<MinimalCover> covers_bruteforce(const ZeroPattern& pattern) {
  const int m = pattern.rows(), n = pattern.cols();
  if (m * n > 30) throw OracleTooLarge("oracle too large: covers_bruteforce requires m*n <= 30");
  const auto adj = row_adjacency(pattern);
  auto covers = [&](Mask rows, Mask cols) {
    for (int i = 0; i < m; ++i)
      if (!(rows >> i & 1) && (adj[i] & ~cols)) return false;
    return true;
  };
  std::vector<CoverBits> out;
  for (Mask rows = 0; rows < (Mask{1} << m); ++rows) {
    for (Mask cols = 0; cols < (Mask{1} << n); ++cols) {
      if (!covers(rows, cols)) continue;
      bool minimal = true;
      for (int i = 0; i < m && minimal; ++i)
        if ((rows >> i & 1) && covers(rows & ~(Mask{1} << i), cols)) minimal = false;
      for (int j = 0; j < n && minimal; ++j)
        if ((cols >> j & 1) && covers(rows, cols & ~(Mask{1} << j))) minimal = false;
      if (minimal) out.push_back({rows, cols});
    }
  }
  return to_sorted_covers(out);
}

long long rank1_ed_degree(const ZeroPattern& pattern) {
  long long total = 0;
  for (const auto& c : minimal_covers(pattern)) {
    const int a = pattern.rows() - static_cast<int>(c.rows.size());
    const int b = pattern.cols() - static_cast<int>(c.cols.size());
    total += std::min(a, b);
  }
  return total;
}

namespace {

long long binom(int n, int k) {
  if (k < 0 || k > n) return 0;
  long long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

long long rank1_ed_degree_closed_form(PatternKind kind, int s, int m, int n) {
  if (m <= 0 || n <= 0) throw ContractViolation("matrix dimensions must be positive");
  switch (kind) {
    case PatternKind::Row:
      if (s < 1 || s > n) throw ContractViolation("row pattern size must satisfy 1 <= s <= n");
      return std::min(m, n - s) + std::min(m - 1, n);
    case PatternKind::Column:
      if (s < 1 || s > m) throw ContractViolation("column pattern size must satisfy 1 <= s <= m");
      return std::min(m, n - 1) + std::min(m - s, n);
    case PatternKind::Diagonal: {
      if (s < 0 || s > std::min(m, n))
        throw ContractViolation("diagonal pattern size must satisfy 0 <= s <= min(m, n)");
      long long total = 0;
      for (int j = 0; j <= s; ++j) total += binom(s, j) * std::min(m - j, n - s + j);
      return total;
    }
  }
  return 0;
}

bool is_row_type(const ZeroPattern& p) {
  if (p.empty()) return false;
  const int row = p.entries().front().first;
  return std::all_of(p.entries().begin(), p.entries().end(), [&](const Index2& e) { return e.first == row; });
}

bool is_column_type(const ZeroPattern& p) {
  if (p.empty()) return false;
  const int col = p.entries().front().second;
  return std::all_of(p.entries().begin(), p.entries().end(), [&](const Index2& e) { return e.second == col; });
}

bool is_diagonal_type(const ZeroPattern& p) {
  std::set<int> rows, cols;
  for (const auto& [i, j] : p.entries()) {
    if (!rows.insert(i).second || !cols.insert(j).second) return false;
  }
  return true;
}

namespace {

long long factorial(int k) {
  long long f = 1;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

// Calls visit(image, transposed, row_perm, col_perm) for every group element.
template <typename Visit>
void for_each_group_element(const ZeroPattern& pattern, Visit&& visit) {
  const int m = pattern.rows(), n = pattern.cols();
  const int variants = (m == n) ? 2 : 1;
  for (int t = 0; t < variants; ++t) {
    const ZeroPattern base = t ? pattern.transposed() : pattern;
    std::vector<int> rp(m);
    std::iota(rp.begin(), rp.end(), 0);
    do {
      std::vector<int> cp(n);
      std::iota(cp.begin(), cp.end(), 0);
      do {
        if (!visit(base.permuted(rp, cp), t == 1, rp, cp)) return;
      } while (std::next_permutation(cp.begin(), cp.end()));
    } while (std::next_permutation(rp.begin(), rp.end()));
  }
}

void check_group_size(const ZeroPattern& pattern) {
  if (pattern.rows() > 8 || pattern.cols() > 8 ||
      factorial(pattern.rows()) * factorial(pattern.cols()) > 5'000'000)
    throw OracleTooLarge("permutation group too large for exhaustive orbit expansion");
}

}  // namespace

ZeroPattern canonical_form(const ZeroPattern& pattern) {
  check_group_size(pattern);
  ZeroPattern best = pattern;
  for_each_group_element(pattern, [&](const ZeroPattern& image, bool, const auto&, const auto&) {
    if (image.entries() < best.entries()) best = image;
    return true;
  });
  return best;
}

std::vector<ZeroPattern> orbit(const ZeroPattern& pattern) {
  if (pattern.rows() * pattern.cols() > 16) throw OracleTooLarge("orbit expansion requires m*n <= 16");
  std::set<ZeroPattern> members;
  for_each_group_element(pattern, [&](const ZeroPattern& image, bool, const auto&, const auto&) {
    members.insert(image);
    return true;
  });
  return {members.begin(), members.end()};
}

long long orbit_size(const ZeroPattern& pattern) { return static_cast<long long>(orbit(pattern).size()); }

bool find_pattern_map(const ZeroPattern& from, const ZeroPattern& to, PatternMap& out) {
  if (from.size() != to.size()) return false;
  const bool same_shape = from.rows() == to.rows() && from.cols() == to.cols();
  const bool transposed_shape = from.rows() == to.cols() && from.cols() == to.rows();
  if (!same_shape && !transposed_shape) return false;
  check_group_size(from);
  bool found = false;
  if (same_shape) {
    for_each_group_element(from, [&](const ZeroPattern& image, bool t, const auto& rp, const auto& cp) {
      if (image == to) {
        out = {t, rp, cp};
        found = true;
        return false;
      }
      return true;
    });
    if (found) return true;
  }
  if (transposed_shape && from.rows() != from.cols()) {
    for_each_group_element(from.transposed(), [&](const ZeroPattern& image, bool, const auto& rp, const auto& cp) {
      if (image == to) {
        out = {true, rp, cp};
        found = true;
        return false;
      }
      return true;
    });
  }
  return found;
}

}  // namespace lraz

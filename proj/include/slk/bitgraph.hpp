#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "slk/bitstring.hpp"

namespace slk {

/// Finite bipartite graph with bit-string nodes. Left nodes are stored in a
/// fixed order, each with an ordered, duplicate-free neighbor list; every
/// right node has length right_len(). Both orders are part of the graph's
/// identity: the greedy matcher and approximator lists depend on them.
///
/// Immutable after construction.
class BitGraph {
 public:
  BitGraph() = default;

  /// Validates the invariants; throws kDuplicateNeighbor,
  /// kInconsistentRightLength or kInvalidArgument (duplicate left node).
  BitGraph(int right_len, std::vector<BitString> left,
           std::vector<std::vector<BitString>> adjacency);

  int right_len() const { return right_len_; }
  std::size_t left_count() const { return left_.size(); }
  const std::vector<BitString>& left_nodes() const { return left_; }

  bool contains(const BitString& x) const { return index_.contains(x); }
  std::optional<std::size_t> index_of(const BitString& x) const;

  /// Throws kUnknownLeftNode.
  std::span<const BitString> neighbors(const BitString& x) const;
  std::span<const BitString> neighbors_at(std::size_t i) const { return adjacency_[i]; }

  std::size_t max_degree() const;
  std::size_t edge_count() const;

  friend bool operator==(const BitGraph& a, const BitGraph& b) {
    return a.right_len_ == b.right_len_ && a.left_ == b.left_ &&
           a.adjacency_ == b.adjacency_;
  }

 private:
  int right_len_ = 0;
  std::vector<BitString> left_;
  std::vector<std::vector<BitString>> adjacency_;
  std::unordered_map<BitString, std::size_t, BitStringHash> index_;
};

/// Length of x's neighbor list; throws kUnknownLeftNode.
std::size_t degree(const BitGraph& g, const BitString& x);

/// Text format:
///   bigraph v1 right_len=<m>
///   <left> : <nbr1> <nbr2> ...
/// one line per left node in order, "-" for the empty string.
BitGraph read_graph(std::string_view text);
std::string write_graph(const BitGraph& g);

BitGraph read_graph_file(const std::string& path);
void write_graph_file(const BitGraph& g, const std::string& path);

/// Union of graphs over the same ordered left set with right nodes made
/// disjoint by prefixing graph i's nodes with tags[i]. Neighbor order is
/// graph order, then original order. Tags must be distinct and of equal
/// length.
BitGraph disjoint_union(std::span<const BitGraph> graphs, std::span<const BitString> tags);

/// Distinct equal-width tags 0..count-1 in ceil(log2(count)) bits.
std::vector<BitString> copy_tags(std::size_t count);

/// A set of graphs G_{n,k} plus the tabulated overhead c(n).
struct GraphFamily {
  std::map<std::pair<int, int>, BitGraph> members;  // (n, k) -> graph
  std::map<int, int> overhead;                      // n -> c(n)
  int slack = 0;
  bool variable_length = false;

  /// Loads every file named G_n<n>_k<k>.bg from `dir`.
  static GraphFamily load_dir(const std::string& dir);
  void save_dir(const std::string& dir) const;

  /// Checks left lengths and right_len <= k + c(n) + slack; throws
  /// kInvalidArgument naming the first offending member.
  void validate() const;
};

}  // namespace slk

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "slk/bitgraph.hpp"
#include "slk/error.hpp"

namespace slk {

/// Parameters of a random bipartite graph with fixed-length left side.
struct ExpanderSpec {
  int n = 0;          ///< left bit-length
  int k = 0;          ///< capacity exponent
  int right_len = 0;  ///< m
  int degree = 1;     ///< distinct neighbors per left node
  std::uint64_t seed = 0;

  /// L = {0,1}^n, R = {0,1}^{k+2}, degree n+1.
  static ExpanderSpec standard(int n, int k, std::uint64_t seed);

  /// As standard(), but degree min(n+1, 2^{k+2}) so small k stays generable
  /// (a complete graph is a (t,t)-expander for every t <= |R|).
  static ExpanderSpec standard_capped(int n, int k, std::uint64_t seed);

  void validate() const;
};

/// Resampling rounds allowed per neighbor slot before giving up.
inline constexpr int kResampleCap = 64;

/// `degree` distinct uniform right nodes for x, drawn from x's own substream.
/// Throws kGenerationFailure if 2^right_len < degree or a slot exhausts the
/// resampling cap.
std::vector<BitString> sample_neighbors(const BitString& x, int right_len, int degree,
                                        std::uint64_t seed);

BitGraph gen_random_expander(const ExpanderSpec& spec);

inline constexpr std::uint64_t kDefaultNodeCap = 1'000'000;

/// Left nodes: all strings of length k..max_len. Nodes of length up to
/// 2^{k+3} get min(|x|+3, 2^{k+3}) random neighbors in {0,1}^{k+3}; longer
/// nodes are joined to the whole right side.
BitGraph gen_variable_length_expander(int k, int max_len, std::uint64_t seed,
                                      std::uint64_t node_cap = kDefaultNodeCap);

struct Verdict {
  enum class Kind { kPass, kFail, kUnknown };
  Kind kind = Kind::kPass;
  std::vector<BitString> witness;  ///< violating left set when kFail
  std::uint64_t trials = 0;        ///< sampled verifier only

  bool passed() const { return kind == Kind::kPass; }
  bool failed() const { return kind == Kind::kFail; }

  /// "PASS", "FAIL witness=a,b,..." or "UNKNOWN trials=<n>".
  std::string render() const;
};

/// Exact check that every K-subset of left nodes has >= K_prime neighbors.
/// Enumerates right sets B (|B| <= K_prime-1) reachable as unions of left
/// neighborhoods and counts left nodes whose neighborhood lies inside B.
/// Throws kWorkBudgetExceeded.
Verdict verify_expansion_exact(const BitGraph& g, std::size_t K, std::size_t K_prime,
                               WorkBudget& budget);

/// Exact (t,t)-expansion for every t <= K; by Hall's theorem a pass
/// certifies off-line matching up to K.
Verdict verify_expansion_all_t(const BitGraph& g, std::size_t K, WorkBudget& budget);

/// Monte Carlo falsifier: random K-subsets plus greedily collapsed ones.
/// Never returns kPass; kUnknown means no violation was found.
Verdict verify_expansion_sampled(const BitGraph& g, std::size_t K, std::size_t K_prime,
                                 std::uint64_t trials, std::uint64_t seed);

/// Distinct neighbors of a left set.
std::size_t neighborhood_size(const BitGraph& g, const std::vector<BitString>& S);

struct DisperserSpec {
  std::uint64_t K = 1;
  double delta = 0.5;
  std::uint64_t degree = 1;
  double alpha = 1.0;
  int n = 1;
  std::uint64_t copies = 1;

  /// t = max{1, ceil(2 n^3 / (alpha D))}.
  static std::uint64_t copies_for(int n, double alpha, std::uint64_t degree);
  void validate() const;
};

struct AmplifiedGraph {
  BitGraph graph;
  std::uint64_t copies = 1;
  int tag_width = 0;
  bool base_verified = false;  ///< provenance flag, never inferred
};

/// Disjoint union of `spec.copies` tagged copies of `base`.
AmplifiedGraph amplify(const BitGraph& base, const DisperserSpec& spec, bool base_verified);

struct FoundExpander {
  BitGraph graph;
  std::uint64_t seed = 0;
  bool verified = false;  ///< exact all-t pass; false means only sampled
  int attempts = 0;
};

/// Draws standard_capped graphs for seeds seed, seed+1, ... until the exact
/// all-t verifier passes for t <= 2^k. If the exact check exceeds
/// `per_graph_budget`, falls back to the sampled verifier and returns the
/// graph unverified. Throws kGenerationFailure after max_attempts failures.
FoundExpander find_verified_expander(int n, int k, std::uint64_t seed, int max_attempts,
                                   std::uint64_t per_graph_budget);

}  // namespace slk

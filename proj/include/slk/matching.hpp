#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "slk/bitgraph.hpp"
#include "slk/expanders.hpp"

namespace slk {

/// One on-line request: match left node x with a hash of length about k.
struct MatchRequest {
  BitString x;
  int k = 0;
  friend bool operator==(const MatchRequest&, const MatchRequest&) = default;
};

enum class MatchStatus {
  kMatched,
  kBudgetViolation,  ///< request exceeded its class budget (hash may still be set)
  kRejected,         ///< unmatched after an earlier budget violation
  kGuaranteeBreach,  ///< unmatched on a compliant stream; impossible for verified families
};

const char* to_string(MatchStatus s);

struct TranscriptEntry {
  MatchRequest request;
  MatchStatus status = MatchStatus::kMatched;
  std::optional<BitString> hash;
  std::vector<int> levels_tried;  ///< cascade levels offered, in order; -1 is the self node
  bool repeat = false;            ///< served from an earlier identical request
};

using Transcript = std::vector<TranscriptEntry>;

/// First-unused-neighbor matcher on a single graph. Assignments are never
/// revoked.
class GreedyMatcher {
 public:
  explicit GreedyMatcher(const BitGraph& g) : g_(&g) {}

  /// Throws kUnknownLeftNode.
  std::optional<BitString> offer(const BitString& x);

  std::size_t rejections() const { return rejections_; }
  std::size_t used() const { return used_.size(); }

 private:
  const BitGraph* g_;
  std::unordered_set<BitString, BitStringHash> used_;
  std::size_t rejections_ = 0;
};

std::vector<std::optional<BitString>> greedy_match(const BitGraph& g,
                                                   std::span<const BitString> stream);

/// Neighbor lists of a base expander G_k, either stored or regenerated on
/// demand from an ExpanderSpec (per-node substreams make both identical).
class NeighborSource {
 public:
  static NeighborSource stored(BitGraph g, bool verified);
  static NeighborSource implicit(const ExpanderSpec& spec);

  std::vector<BitString> neighbors(const BitString& x) const;
  bool contains(const BitString& x) const;
  int right_len() const { return right_len_; }
  bool verified() const { return verified_; }
  const BitGraph* graph() const { return graph_.get(); }

 private:
  std::shared_ptr<const BitGraph> graph_;
  std::optional<ExpanderSpec> spec_;
  int right_len_ = 0;
  bool verified_ = false;
};

/// Common surface of the on-line matchers consumed by the approximator.
class OnlineMatcher {
 public:
  virtual ~OnlineMatcher() = default;

  virtual TranscriptEntry request(const MatchRequest& r) = 0;
  /// All hash values x can ever receive, in the order they are tried.
  virtual std::vector<BitString> neighbors(const BitString& x) const = 0;
  virtual bool covers(const BitString& x) const = 0;
  /// Recorded c(n): every hash for a class-k request has length <= k + c(n).
  virtual int overhead(std::size_t n) const = 0;
  virtual const Transcript& transcript() const = 0;
  /// Same graphs, empty state.
  virtual std::unique_ptr<OnlineMatcher> fresh() const = 0;
};

/// Fixed-n cascade. Level j >= 1 is four tagged copies of G_{j-1}; level 0
/// is four copies of G_0. A class-k request (k < n) is offered to level k,
/// then k-1, ... down to 0, each greedy. Requests with k >= n take the
/// reserved node "1"+x.
///
/// Hash layout: "1" x                      (self node)
///              "0" <level w bits> <copy 2 bits> <base node>
class CascadeMatcher final : public OnlineMatcher {
 public:
  /// family[k] = G_k for k = 0..top-1 (contiguous), all with left set
  /// {0,1}^n. Levels 0..min(n-1, top) are built. `c_slack` bounds base
  /// right lengths: right_len(G_k) <= k + c_slack.
  static CascadeMatcher build(std::map<int, NeighborSource> family, int n, int c_slack);

  TranscriptEntry request(const MatchRequest& r) override;
  std::vector<BitString> neighbors(const BitString& x) const override;
  bool covers(const BitString& x) const override { return x.size() == static_cast<std::size_t>(n_); }
  int overhead(std::size_t) const override { return overhead_; }
  const Transcript& transcript() const override { return transcript_; }
  std::unique_ptr<OnlineMatcher> fresh() const override;

  int n() const { return n_; }
  int overhead_const() const { return overhead_; }
  /// Highest built level, or -1 when n == 0.
  int top_level() const { return static_cast<int>(levels_.size()) - 1; }
  int level_width() const { return level_width_; }
  bool all_levels_verified() const;

  /// Level j's graph with full hash names (the 4-copy tagged union).
  BitGraph level_graph(int level) const;

 private:
  struct Level {
    NeighborSource base;
    BitString prefix;  // "0" + level field
  };

  std::vector<BitString> level_neighbors(int level, const BitString& x) const;

  int n_ = 0;
  int level_width_ = 0;
  int overhead_ = 1;
  std::vector<Level> levels_;

  std::unordered_map<BitString, BitString, BitStringHash> owner_;  // hash -> x
  std::map<std::pair<BitString, int>, std::size_t> served_;        // (x,k) -> transcript index
  std::map<int, std::uint64_t> class_count_;
  bool violated_ = false;
  Transcript transcript_;
};

/// Serves several fixed-n cascades at once; hashes are prefixed by
/// prefix_code(n) so namespaces of different n never collide.
class MultiLengthMatcher final : public OnlineMatcher {
 public:
  explicit MultiLengthMatcher(std::map<std::size_t, CascadeMatcher> by_length);

  TranscriptEntry request(const MatchRequest& r) override;
  std::vector<BitString> neighbors(const BitString& x) const override;
  bool covers(const BitString& x) const override { return by_length_.contains(x.size()); }
  int overhead(std::size_t n) const override;
  const Transcript& transcript() const override { return transcript_; }
  std::unique_ptr<OnlineMatcher> fresh() const override;

  const std::map<std::size_t, CascadeMatcher>& cascades() const { return by_length_; }

 private:
  std::map<std::size_t, CascadeMatcher> by_length_;
  Transcript transcript_;
};

/// Random-expander cascade for one n: G_k = standard_capped(n, k) for k < n-1.
/// Stored graphs are verified by find_verified_expander; implicit ones are
/// regenerated per node and left unverified.
struct CascadeOptions {
  std::uint64_t seed = 0;
  bool implicit = false;
  int max_attempts = 32;
  std::uint64_t per_graph_budget = 20'000'000;
};
CascadeMatcher build_random_cascade(int n, const CascadeOptions& options);

/// Cascades for every length in [0, max_len], glued by prefix codes.
MultiLengthMatcher build_random_universe(int max_len, const CascadeOptions& options);

/// Cascade from G_n<n>_k<k> members of a family.
CascadeMatcher cascade_from_family(const GraphFamily& family, int n);

struct AuditReport {
  bool injective = true;
  /// (x1, x2, p) for the first hash shared by two distinct left nodes.
  std::optional<std::tuple<BitString, BitString, BitString>> collision;
  std::map<std::size_t, long> max_overhead;  ///< n -> max(|p| - k)
  bool length_ok = true;
  std::vector<std::size_t> length_violations;  ///< transcript indices
  std::size_t unmatched = 0;

  bool passed() const { return injective && length_ok; }
};

/// Recomputes both matching conditions from the raw transcript: every hash
/// maps back to one left node, and |p| - k <= bound(|x|) when a bound is
/// given.
AuditReport overhead_audit(const Transcript& transcript,
                           const std::function<long(std::size_t)>& bound = {});

/// Number of (non-repeat) requests offered to each cascade level.
std::map<int, std::size_t> level_inflow(const Transcript& transcript);

/// Exhaustive solver of the finite on-line matching game on one graph:
/// Requester picks an unused (x, k) with class budget left; Matcher answers
/// with a neighbor p of x, |p| <= k + overhead, not owned by another left
/// node, or loses.
class OnlineGame {
 public:
  struct Position {
    std::vector<int> owner;        ///< per right node index, -1 when free
    std::vector<char> requested;   ///< per (left, class) pair
    std::string key() const;
  };

  OnlineGame(const BitGraph& g, int overhead, std::map<int, int> class_budgets);

  Position initial() const;
  std::vector<MatchRequest> legal_requests(const Position& pos) const;
  std::vector<BitString> legal_answers(const Position& pos, const MatchRequest& r) const;
  Position play(const Position& pos, const MatchRequest& r, const BitString& answer) const;

  const BitGraph& graph() const { return *g_; }
  const BitString& right_node(int i) const { return right_[static_cast<std::size_t>(i)]; }
  int right_node_index(const BitString& p) const { return right_index_.at(p); }
  std::size_t request_index(const MatchRequest& r) const;

 private:
  friend struct GameSolver;

  const BitGraph* g_;
  int overhead_;
  std::vector<int> classes_;
  std::vector<int> budgets_;
  std::vector<BitString> right_;
  std::unordered_map<BitString, int, BitStringHash> right_index_;
};

struct GameDecision {
  enum class Winner { kMatcher, kRequester };
  Winner winner = Winner::kMatcher;
  std::vector<std::string> trace;  ///< one principal line of play
  std::uint64_t positions = 0;

  /// Matcher's stored winning answer; set for every Matcher-won position.
  std::optional<BitString> matcher_answer(const OnlineGame::Position& pos,
                                          const MatchRequest& r) const;
  /// Requester's stored winning request in a Requester-won position.
  std::optional<MatchRequest> requester_move(const OnlineGame::Position& pos) const;

  struct Table;
  std::shared_ptr<const Table> table;
  std::shared_ptr<const OnlineGame> game;
};

/// Throws kWorkBudgetExceeded (one unit per position expanded).
GameDecision decide_online_matching(const BitGraph& g, int overhead,
                                    const std::map<int, int>& class_budgets,
                                    WorkBudget& budget);

}  // namespace slk

#include "slk/matching.hpp"

#include <algorithm>

#include "slk/error.hpp"

namespace slk {

const char* to_string(MatchStatus s) {
  switch (s) {
    case MatchStatus::kMatched: return "matched";
    case MatchStatus::kBudgetViolation: return "budget-violation";
    case MatchStatus::kRejected: return "rejected";
    case MatchStatus::kGuaranteeBreach: return "guarantee-breach";
  }
  return "unknown";
}

std::optional<BitString> GreedyMatcher::offer(const BitString& x) {
  for (const auto& p : g_->neighbors(x)) {
    if (used_.insert(p).second) return p;
  }
  ++rejections_;
  return std::nullopt;
}

std::vector<std::optional<BitString>> greedy_match(const BitGraph& g,
                                                   std::span<const BitString> stream) {
  GreedyMatcher m(g);
  std::vector<std::optional<BitString>> out;
  out.reserve(stream.size());
  for (const auto& x : stream) out.push_back(m.offer(x));
  return out;
}

NeighborSource NeighborSource::stored(BitGraph g, bool verified) {
  NeighborSource s;
  s.right_len_ = g.right_len();
  s.graph_ = std::make_shared<const BitGraph>(std::move(g));
  s.verified_ = verified;
  return s;
}

NeighborSource NeighborSource::implicit(const ExpanderSpec& spec) {
  spec.validate();
  NeighborSource s;
  s.spec_ = spec;
  s.right_len_ = spec.right_len;
  return s;
}

std::vector<BitString> NeighborSource::neighbors(const BitString& x) const {
  if (graph_) {
    auto span = graph_->neighbors(x);
    return {span.begin(), span.end()};
  }
  if (!contains(x)) throw Error(ErrorKind::kUnknownLeftNode, "unknown left node " + x.render());
  return sample_neighbors(x, spec_->right_len, spec_->degree, spec_->seed);
}

bool NeighborSource::contains(const BitString& x) const {
  if (graph_) return graph_->contains(x);
  return spec_ && x.size() == static_cast<std::size_t>(spec_->n);
}

// ---------------------------------------------------------------------------

CascadeMatcher CascadeMatcher::build(std::map<int, NeighborSource> family, int n, int c_slack) {
  if (n < 0) throw Error(ErrorKind::kInvalidArgument, "n must be non-negative");
  CascadeMatcher m;
  m.n_ = n;
  if (n == 0) return m;
  if (family.empty() || family.begin()->first != 0) {
    throw Error(ErrorKind::kInvalidArgument, "cascade family must start at k=0");
  }
  int top = 0;
  while (family.contains(top)) ++top;  // G_0..G_{top-1} contiguous
  const int levels = std::min(n - 1, top) + 1;
  m.level_width_ = field_width(static_cast<std::uint64_t>(levels - 1));

  const BitString probe = BitString::repeat(false, static_cast<std::size_t>(n));
  const std::vector<BitString>* left = nullptr;
  for (int k = 0; k < top; ++k) {
    const auto& src = family.at(k);
    if (src.right_len() > k + c_slack) {
      throw Error(ErrorKind::kInvalidArgument,
                  "G_" + std::to_string(k) + " right_len " + std::to_string(src.right_len()) +
                      " exceeds k + c_slack = " + std::to_string(k + c_slack));
    }
    if (!src.contains(probe)) {
      throw Error(ErrorKind::kInvalidArgument,
                  "G_" + std::to_string(k) + " does not have left set {0,1}^" + std::to_string(n));
    }
    if (const BitGraph* g = src.graph()) {
      if (g->left_count() != (std::size_t{1} << n)) {
        throw Error(ErrorKind::kInvalidArgument, "G_" + std::to_string(k) +
                                                     " left set is not {0,1}^" + std::to_string(n));
      }
      if (left && *left != g->left_nodes()) {
        throw Error(ErrorKind::kInvalidArgument, "inconsistent left sets across levels");
      }
      left = &g->left_nodes();
    }
  }

  int overhead = 1;  // self node: |1x| = n + 1 <= k + 1 for k >= n
  for (int j = 0; j < levels; ++j) {
    const int base_k = j == 0 ? 0 : j - 1;
    Level level{family.at(base_k),
                BitString::parse("0") +
                    BitString::from_uint(static_cast<std::uint64_t>(j), m.level_width_)};
    const int hash_len = static_cast<int>(level.prefix.size()) + 2 + level.base.right_len();
    overhead = std::max(overhead, hash_len - j);
    m.levels_.push_back(std::move(level));
  }
  m.overhead_ = overhead;
  return m;
}

bool CascadeMatcher::all_levels_verified() const {
  return std::all_of(levels_.begin(), levels_.end(),
                     [](const Level& l) { return l.base.verified(); });
}

std::vector<BitString> CascadeMatcher::level_neighbors(int level, const BitString& x) const {
  const Level& l = levels_[static_cast<std::size_t>(level)];
  const auto base = l.base.neighbors(x);
  std::vector<BitString> out;
  out.reserve(base.size() * 4);
  for (std::uint64_t copy = 0; copy < 4; ++copy) {
    const BitString tag = l.prefix + BitString::from_uint(copy, 2);
    for (const auto& p : base) out.push_back(tag + p);
  }
  return out;
}

std::vector<BitString> CascadeMatcher::neighbors(const BitString& x) const {
  if (!covers(x)) throw Error(ErrorKind::kUnknownLeftNode, "unknown left node " + x.render());
  std::vector<BitString> out;
  for (int j = top_level(); j >= 0; --j) {
    auto level = level_neighbors(j, x);
    out.insert(out.end(), level.begin(), level.end());
  }
  out.push_back(BitString::parse("1") + x);
  return out;
}

BitGraph CascadeMatcher::level_graph(int level) const {
  if (level < 0 || level > top_level()) {
    throw Error(ErrorKind::kIndexOutOfRange, "no level " + std::to_string(level));
  }
  auto left = all_strings(n_);
  std::vector<std::vector<BitString>> adjacency;
  for (const auto& x : left) adjacency.push_back(level_neighbors(level, x));
  const Level& l = levels_[static_cast<std::size_t>(level)];
  return BitGraph(static_cast<int>(l.prefix.size()) + 2 + l.base.right_len(), std::move(left),
                  std::move(adjacency));
}

TranscriptEntry CascadeMatcher::request(const MatchRequest& r) {
  if (!covers(r.x)) {
    throw Error(ErrorKind::kUnknownLeftNode,
                "request " + r.x.render() + " has length " + std::to_string(r.x.size()) +
                    ", cascade serves n=" + std::to_string(n_));
  }
  if (r.k < 0) throw Error(ErrorKind::kInvalidArgument, "negative class k");
  if (r.k < n_ && r.k > top_level()) {
    throw Error(ErrorKind::kInvalidArgument,
                "class k=" + std::to_string(r.k) + " is not covered by levels 0.." +
                    std::to_string(top_level()));
  }
  if (auto it = served_.find({r.x, r.k}); it != served_.end()) {
    TranscriptEntry e = transcript_[it->second];
    e.repeat = true;
    e.levels_tried.clear();
    transcript_.push_back(e);
    return e;
  }

  TranscriptEntry e;
  e.request = r;
  const std::uint64_t count = ++class_count_[r.k];
  const bool over = r.k < 63 && count > (std::uint64_t{1} << r.k);

  if (r.k >= n_) {
    e.levels_tried.push_back(-1);
    e.hash = BitString::parse("1") + r.x;
    owner_.emplace(*e.hash, r.x);
  } else {
    for (int j = r.k; j >= 0 && !e.hash; --j) {
      e.levels_tried.push_back(j);
      for (auto& h : level_neighbors(j, r.x)) {
        if (!owner_.contains(h)) {
          owner_.emplace(h, r.x);
          e.hash = std::move(h);
          break;
        }
      }
    }
  }

  if (over) {
    e.status = MatchStatus::kBudgetViolation;
  } else if (e.hash) {
    e.status = MatchStatus::kMatched;
  } else {
    e.status = violated_ ? MatchStatus::kRejected : MatchStatus::kGuaranteeBreach;
  }
  violated_ = violated_ || over;
  served_.emplace(std::make_pair(r.x, r.k), transcript_.size());
  transcript_.push_back(e);
  return e;
}

std::unique_ptr<OnlineMatcher> CascadeMatcher::fresh() const {
  auto m = std::make_unique<CascadeMatcher>();
  m->n_ = n_;
  m->level_width_ = level_width_;
  m->overhead_ = overhead_;
  m->levels_ = levels_;
  return m;
}

// ---------------------------------------------------------------------------

MultiLengthMatcher::MultiLengthMatcher(std::map<std::size_t, CascadeMatcher> by_length)
    : by_length_(std::move(by_length)) {
  for (const auto& [n, m] : by_length_) {
    if (static_cast<std::size_t>(m.n()) != n) {
      throw Error(ErrorKind::kInvalidArgument, "cascade keyed by wrong length");
    }
  }
}

TranscriptEntry MultiLengthMatcher::request(const MatchRequest& r) {
  auto it = by_length_.find(r.x.size());
  if (it == by_length_.end()) {
    throw Error(ErrorKind::kLeftUniverseMiss,
                "no cascade for length " + std::to_string(r.x.size()) + " (x=" +
                    r.x.render() + ")");
  }
  TranscriptEntry e = it->second.request(r);
  if (e.hash) e.hash = prefix_code(r.x.size()) + *e.hash;
  transcript_.push_back(e);
  return e;
}

std::vector<BitString> MultiLengthMatcher::neighbors(const BitString& x) const {
  auto it = by_length_.find(x.size());
  if (it == by_length_.end()) {
    throw Error(ErrorKind::kLeftUniverseMiss, "no cascade for length " + std::to_string(x.size()));
  }
  auto inner = it->second.neighbors(x);
  const BitString code = prefix_code(x.size());
  for (auto& p : inner) p = code + p;
  return inner;
}

int MultiLengthMatcher::overhead(std::size_t n) const {
  auto it = by_length_.find(n);
  if (it == by_length_.end()) {
    throw Error(ErrorKind::kLeftUniverseMiss, "no cascade for length " + std::to_string(n));
  }
  return static_cast<int>(prefix_code(n).size()) + it->second.overhead_const();
}

std::unique_ptr<OnlineMatcher> MultiLengthMatcher::fresh() const {
  std::map<std::size_t, CascadeMatcher> copies;
  for (const auto& [n, m] : by_length_) {
    auto f = m.fresh();
    copies.emplace(n, std::move(static_cast<CascadeMatcher&>(*f)));
  }
  return std::make_unique<MultiLengthMatcher>(std::move(copies));
}

// ---------------------------------------------------------------------------

CascadeMatcher build_random_cascade(int n, const CascadeOptions& options) {
  std::map<int, NeighborSource> family;
  // Levels 0..n-1 use G_0..G_{n-2}; G_0 is needed whenever any level exists.
  const int top = std::max(1, n - 1);
  for (int k = 0; n > 0 && k < top; ++k) {
    const std::uint64_t seed = options.seed + 1000003ull * static_cast<std::uint64_t>(n) +
                               7919ull * static_cast<std::uint64_t>(k);
    if (options.implicit) {
      family.emplace(k, NeighborSource::implicit(ExpanderSpec::standard_capped(n, k, seed)));
    } else {
      auto found = find_verified_expander(n, k, seed, options.max_attempts,
                                        options.per_graph_budget);
      family.emplace(k, NeighborSource::stored(std::move(found.graph), found.verified));
    }
  }
  return CascadeMatcher::build(std::move(family), n, 2);
}

MultiLengthMatcher build_random_universe(int max_len, const CascadeOptions& options) {
  std::map<std::size_t, CascadeMatcher> by_length;
  for (int n = 0; n <= max_len; ++n) {
    by_length.emplace(static_cast<std::size_t>(n), build_random_cascade(n, options));
  }
  return MultiLengthMatcher(std::move(by_length));
}

CascadeMatcher cascade_from_family(const GraphFamily& family, int n) {
  std::map<int, NeighborSource> members;
  int slack = 0;
  for (const auto& [key, g] : family.members) {
    if (key.first != n) continue;
    slack = std::max(slack, g.right_len() - key.second);
    members.emplace(key.second, NeighborSource::stored(g, false));
  }
  if (members.empty() && n > 0) {
    throw Error(ErrorKind::kInvalidArgument, "family has no members for n=" + std::to_string(n));
  }
  return CascadeMatcher::build(std::move(members), n, slack);
}

// ---------------------------------------------------------------------------

AuditReport overhead_audit(const Transcript& transcript,
                           const std::function<long(std::size_t)>& bound) {
  AuditReport report;
  std::unordered_map<BitString, BitString, BitStringHash> owner;
  for (std::size_t i = 0; i < transcript.size(); ++i) {
    const auto& e = transcript[i];
    if (!e.hash) {
      ++report.unmatched;
      continue;
    }
    const std::size_t n = e.request.x.size();
    const long over = static_cast<long>(e.hash->size()) - e.request.k;
    auto [it, inserted] = report.max_overhead.emplace(n, over);
    if (!inserted) it->second = std::max(it->second, over);
    if (bound && over > bound(n)) {
      report.length_ok = false;
      report.length_violations.push_back(i);
    }
    auto [oit, fresh] = owner.emplace(*e.hash, e.request.x);
    if (!fresh && oit->second != e.request.x && report.injective) {
      report.injective = false;
      report.collision = std::make_tuple(oit->second, e.request.x, *e.hash);
    }
  }
  return report;
}

std::map<int, std::size_t> level_inflow(const Transcript& transcript) {
  std::map<int, std::size_t> inflow;
  for (const auto& e : transcript) {
    if (e.repeat) continue;
    for (int level : e.levels_tried) {
      if (level >= 0) ++inflow[level];
    }
  }
  return inflow;
}

}  // namespace slk

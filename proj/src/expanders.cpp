#include "slk/expanders.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <unordered_set>

#include "slk/detail/mask.hpp"
#include "slk/rng.hpp"

namespace slk {

using detail::IndexedGraph;
using detail::Mask;
using detail::MaskHash;

ExpanderSpec ExpanderSpec::standard(int n, int k, std::uint64_t seed) {
  return ExpanderSpec{n, k, k + 2, n + 1, seed};
}

ExpanderSpec ExpanderSpec::standard_capped(int n, int k, std::uint64_t seed) {
  ExpanderSpec spec = standard(n, k, seed);
  if (spec.right_len < 31) spec.degree = std::min(spec.degree, 1 << spec.right_len);
  return spec;
}

void ExpanderSpec::validate() const {
  if (n < 0 || n > 24) throw Error(ErrorKind::kInvalidArgument, "n must be in [0, 24]");
  if (k < 0) throw Error(ErrorKind::kInvalidArgument, "k must be non-negative");
  if (right_len < 0 || right_len > 62) {
    throw Error(ErrorKind::kInvalidArgument, "right_len must be in [0, 62]");
  }
  if (degree < 1) throw Error(ErrorKind::kInvalidArgument, "degree must be >= 1");
}

std::vector<BitString> sample_neighbors(const BitString& x, int right_len, int degree,
                                        std::uint64_t seed) {
  if (right_len < 62 && (std::uint64_t{1} << right_len) < static_cast<std::uint64_t>(degree)) {
    throw Error(ErrorKind::kGenerationFailure,
                "cannot pick " + std::to_string(degree) + " distinct neighbors among 2^" +
                    std::to_string(right_len) + " right nodes");
  }
  const std::uint64_t universe = std::uint64_t{1} << right_len;
  SplitMix64 rng = node_stream(seed, x);
  std::vector<std::uint64_t> picked;
  picked.reserve(static_cast<std::size_t>(degree));
  for (int slot = 0; slot < degree; ++slot) {
    bool placed = false;
    for (int round = 0; round < kResampleCap; ++round) {
      const std::uint64_t v = rng.below(universe);
      if (std::find(picked.begin(), picked.end(), v) == picked.end()) {
        picked.push_back(v);
        placed = true;
        break;
      }
    }
    if (!placed) {
      throw Error(ErrorKind::kGenerationFailure,
                  "resampling cap reached for node " + x.render());
    }
  }
  std::vector<BitString> out;
  out.reserve(picked.size());
  for (auto v : picked) out.push_back(BitString::from_uint(v, right_len));
  return out;
}

BitGraph gen_random_expander(const ExpanderSpec& spec) {
  spec.validate();
  auto left = all_strings(spec.n);
  std::vector<std::vector<BitString>> adjacency;
  adjacency.reserve(left.size());
  for (const auto& x : left) {
    adjacency.push_back(sample_neighbors(x, spec.right_len, spec.degree, spec.seed));
  }
  return BitGraph(spec.right_len, std::move(left), std::move(adjacency));
}

BitGraph gen_variable_length_expander(int k, int max_len, std::uint64_t seed,
                                      std::uint64_t node_cap) {
  if (k < 0 || k > 20) throw Error(ErrorKind::kInvalidArgument, "k must be in [0, 20]");
  if (max_len < k) throw Error(ErrorKind::kInvalidArgument, "max_len must be >= k");
  std::uint64_t total = 0;
  for (int len = k; len <= max_len; ++len) {
    if (len >= 63 || total + (std::uint64_t{1} << len) > node_cap) {
      throw Error(ErrorKind::kResourceLimit,
                  "left universe of lengths " + std::to_string(k) + ".." +
                      std::to_string(max_len) + " exceeds node cap " +
                      std::to_string(node_cap));
    }
    total += std::uint64_t{1} << len;
  }
  const int right_len = k + 3;
  const int right_count = 1 << right_len;
  std::vector<BitString> left;
  std::vector<std::vector<BitString>> adjacency;
  left.reserve(total);
  adjacency.reserve(total);
  const auto everything = all_strings(right_len);
  for (int len = k; len <= max_len; ++len) {
    for (auto& x : all_strings(len)) {
      if (len > right_count) {
        adjacency.push_back(everything);
      } else {
        adjacency.push_back(
            sample_neighbors(x, right_len, std::min(len + 3, right_count), seed));
      }
      left.push_back(std::move(x));
    }
  }
  return BitGraph(right_len, std::move(left), std::move(adjacency));
}

std::string Verdict::render() const {
  switch (kind) {
    case Kind::kPass:
      return "PASS";
    case Kind::kUnknown:
      return "UNKNOWN trials=" + std::to_string(trials);
    case Kind::kFail: {
      std::string s = "FAIL witness=";
      for (std::size_t i = 0; i < witness.size(); ++i) {
        if (i) s += ',';
        s += witness[i].render();
      }
      return s;
    }
  }
  return "UNKNOWN";
}

namespace {

// Walks the distinct unions U (|U| <= max_union) of neighborhoods of left
// nodes with degree <= max_union, breadth-first from the empty set. Any left
// set S with |N(S)| <= max_union has N(S) among them, reached by adding S's
// members one at a time. `violates(|U|, covered)` decides a hit; on a hit
// the first `take(|U|)` covered nodes are the witness.
template <typename Violates, typename Take>
Verdict union_search(const BitGraph& g, std::size_t max_union, WorkBudget& budget,
                     Violates violates, Take take) {
  const IndexedGraph ig = detail::index_used_right(g);
  std::vector<std::size_t> small;
  for (std::size_t i = 0; i < g.left_count(); ++i) {
    if (ig.degrees[i] <= max_union) small.push_back(i);
  }
  if (small.empty()) return Verdict{};

  std::unordered_set<Mask, MaskHash> seen;
  std::deque<Mask> frontier;
  Mask empty(ig.right_names.size());
  seen.insert(empty);
  frontier.push_back(std::move(empty));
  std::vector<std::size_t> covered;
  while (!frontier.empty()) {
    Mask u = std::move(frontier.front());
    frontier.pop_front();
    budget.charge(2 * small.size() + 1, "expansion verifier");
    const std::size_t u_size = u.count();
    covered.clear();
    for (auto i : small) {
      if (ig.neighborhoods[i].is_subset_of(u)) covered.push_back(i);
    }
    if (violates(u_size, covered.size())) {
      Verdict v;
      v.kind = Verdict::Kind::kFail;
      const std::size_t want = take(u_size);
      for (std::size_t j = 0; j < want; ++j) v.witness.push_back(g.left_nodes()[covered[j]]);
      return v;
    }
    for (auto i : small) {
      if (ig.neighborhoods[i].is_subset_of(u)) continue;
      Mask next = u | ig.neighborhoods[i];
      if (next.count() > max_union) continue;
      if (seen.insert(next).second) frontier.push_back(std::move(next));
    }
  }
  return Verdict{};
}

}  // namespace

Verdict verify_expansion_exact(const BitGraph& g, std::size_t K, std::size_t K_prime,
                               WorkBudget& budget) {
  if (K == 0) throw Error(ErrorKind::kInvalidArgument, "K must be >= 1");
  if (K_prime == 0 || K > g.left_count()) return Verdict{};
  return union_search(
      g, K_prime - 1, budget,
      [K](std::size_t, std::size_t covered) { return covered >= K; },
      [K](std::size_t) { return K; });
}

Verdict verify_expansion_all_t(const BitGraph& g, std::size_t K, WorkBudget& budget) {
  if (K == 0) return Verdict{};
  return union_search(
      g, K - 1, budget,
      [](std::size_t u_size, std::size_t covered) { return covered > u_size; },
      [](std::size_t u_size) { return u_size + 1; });
}

std::size_t neighborhood_size(const BitGraph& g, const std::vector<BitString>& S) {
  std::unordered_set<BitString, BitStringHash> seen;
  for (const auto& x : S) {
    for (const auto& p : g.neighbors(x)) seen.insert(p);
  }
  return seen.size();
}

Verdict verify_expansion_sampled(const BitGraph& g, std::size_t K, std::size_t K_prime,
                                 std::uint64_t trials, std::uint64_t seed) {
  if (trials == 0) throw Error(ErrorKind::kInvalidArgument, "trials must be >= 1");
  if (K == 0) throw Error(ErrorKind::kInvalidArgument, "K must be >= 1");
  Verdict verdict;
  verdict.kind = Verdict::Kind::kUnknown;
  verdict.trials = trials;
  const std::size_t L = g.left_count();
  if (K > L || K_prime == 0) return verdict;

  const IndexedGraph ig = detail::index_used_right(g);
  SplitMix64 rng(seed);
  std::vector<std::size_t> order(L);

  auto report = [&](std::vector<std::size_t> chosen) {
    std::sort(chosen.begin(), chosen.end());
    verdict.kind = Verdict::Kind::kFail;
    for (auto i : chosen) verdict.witness.push_back(g.left_nodes()[i]);
    return verdict;
  };

  for (std::uint64_t t = 0; t < trials; ++t) {
    // Uniform K-subset: partial Fisher-Yates.
    for (std::size_t i = 0; i < L; ++i) order[i] = i;
    Mask u(ig.right_names.size());
    for (std::size_t i = 0; i < K; ++i) {
      const std::size_t j = i + static_cast<std::size_t>(rng.below(L - i));
      std::swap(order[i], order[j]);
      u |= ig.neighborhoods[order[i]];
    }
    if (u.count() < K_prime) {
      return report(std::vector<std::size_t>(order.begin(), order.begin() + K));
    }

    // Every 16th trial also grows a set greedily from a random seed node,
    // always adding the node that enlarges the neighborhood least.
    if (t % 16 != 0) continue;
    std::vector<char> in(L, 0);
    std::vector<std::size_t> chosen{static_cast<std::size_t>(rng.below(L))};
    in[chosen[0]] = 1;
    Mask acc = ig.neighborhoods[chosen[0]];
    while (chosen.size() < K) {
      std::size_t best = L;
      std::size_t best_size = SIZE_MAX;
      for (std::size_t i = 0; i < L; ++i) {
        if (in[i]) continue;
        const std::size_t s = (acc | ig.neighborhoods[i]).count();
        if (s < best_size) {
          best_size = s;
          best = i;
        }
      }
      in[best] = 1;
      chosen.push_back(best);
      acc |= ig.neighborhoods[best];
    }
    if (acc.count() < K_prime) return report(chosen);
  }
  return verdict;
}

std::uint64_t DisperserSpec::copies_for(int n, double alpha, std::uint64_t degree) {
  if (alpha <= 0 || degree == 0) {
    throw Error(ErrorKind::kInvalidArgument, "alpha and degree must be positive");
  }
  const double raw = 2.0 * std::pow(static_cast<double>(n), 3) /
                     (alpha * static_cast<double>(degree));
  return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::ceil(raw)));
}

void DisperserSpec::validate() const {
  if (!(delta > 0 && delta < 1)) throw Error(ErrorKind::kInvalidArgument, "delta must be in (0,1)");
  if (copies < 1 || copies > (std::uint64_t{1} << 20)) {
    throw Error(ErrorKind::kInvalidArgument, "invalid copy count t=" + std::to_string(copies));
  }
}

AmplifiedGraph amplify(const BitGraph& base, const DisperserSpec& spec, bool base_verified) {
  spec.validate();
  std::vector<BitGraph> copies(spec.copies, base);
  auto tags = copy_tags(spec.copies);
  AmplifiedGraph out{disjoint_union(copies, tags), spec.copies,
                     static_cast<int>(tags[0].size()), base_verified};
  return out;
}

FoundExpander find_verified_expander(int n, int k, std::uint64_t seed, int max_attempts,
                                   std::uint64_t per_graph_budget) {
  const std::size_t K = std::size_t{1} << k;
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    const std::uint64_t s = seed + static_cast<std::uint64_t>(attempt);
    BitGraph g = gen_random_expander(ExpanderSpec::standard_capped(n, k, s));
    WorkBudget budget(per_graph_budget);
    try {
      if (verify_expansion_all_t(g, K, budget).passed()) {
        return FoundExpander{std::move(g), s, true, attempt + 1};
      }
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::kWorkBudgetExceeded) throw;
      bool clean = true;
      for (std::size_t t = 1; t <= K && clean; t *= 2) {
        clean = !verify_expansion_sampled(g, t, t, 2000, s).failed();
      }
      if (clean) return FoundExpander{std::move(g), s, false, attempt + 1};
    }
  }
  throw Error(ErrorKind::kGenerationFailure,
              "no expander found for n=" + std::to_string(n) + " k=" + std::to_string(k) +
                  " within " + std::to_string(max_attempts) + " seeds");
}

}  // namespace slk

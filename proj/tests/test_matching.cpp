#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "slk/matching.hpp"
#include "slk/rng.hpp"

using namespace slk;

namespace {

BitString B(const char* s) { return BitString::parse(s); }

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error thrown");
  return ErrorKind::kInvalidArgument;
}

template <class T>
void shuffle(std::vector<T>& v, SplitMix64& rng) {
  for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[rng.below(i)]);
}

// Level graphs for the n = 6 cascade, found once per process.
const CascadeMatcher& cascade6() {
  static const CascadeMatcher m = build_random_cascade(6, {});
  return m;
}

}  // namespace

TEST_CASE("greedy matching") {
  const BitGraph g(1, {B("0"), B("1")}, {{B("0"), B("1")}, {B("0")}});
  const auto out = greedy_match(g, std::vector{B("0"), B("1")});
  CHECK(out[0] == B("0"));
  CHECK_FALSE(out[1].has_value());

  GreedyMatcher m(g);
  CHECK(m.offer(B("1")) == B("0"));
  CHECK(m.offer(B("0")) == B("1"));
  CHECK(m.rejections() == 0);
  CHECK(kind_of([&] { m.offer(B("11")); }) == ErrorKind::kUnknownLeftNode);
}

TEST_CASE("greedy rejections stay within 2^{k-1} on verified expanders") {
  SplitMix64 rng(5);
  for (int k = 1; k <= 3; ++k) {
    int graphs = 0;
    for (std::uint64_t seed = 0; graphs < 5; ++seed) {
      const auto g = gen_random_expander({6, k, k + 1, 3, seed});
      const std::size_t half = std::size_t{1} << (k - 1);
      WorkBudget budget;
      if (!verify_expansion_exact(g, half, half, budget).passed()) continue;
      ++graphs;
      for (int s = 0; s < 100; ++s) {
        auto left = g.left_nodes();
        shuffle(left, rng);
        left.resize(std::size_t{1} << k);
        GreedyMatcher gm(g);
        for (const auto& x : left) gm.offer(x);
        CHECK(gm.rejections() <= half);
      }
    }
  }
}

TEST_CASE("one-level cascade is greedy on the four-copy union") {
  const auto g0 = gen_random_expander(ExpanderSpec::standard_capped(2, 0, 3));
  std::map<int, NeighborSource> fam;
  fam.emplace(0, NeighborSource::stored(g0, true));
  const auto proto = CascadeMatcher::build(std::move(fam), 2, 2);
  REQUIRE(proto.top_level() == 1);
  const auto level1 = proto.level_graph(1);
  for (const auto& x : level1.left_nodes()) CHECK(level1.neighbors(x).size() == 4 * g0.neighbors(x).size());

  auto m = proto.fresh();
  const std::vector stream{B("10"), B("01")};
  const auto greedy = greedy_match(level1, stream);
  for (std::size_t i = 0; i < stream.size(); ++i) {
    const auto e = m->request({stream[i], 1});
    CHECK(e.levels_tried == std::vector{1});
    CHECK(e.hash == greedy[i]);
  }
}

TEST_CASE("cascade fixtures") {
  auto m = cascade6().fresh();
  const auto self = m->request({B("010101"), 6});
  CHECK(self.hash == B("1010101"));
  CHECK(self.levels_tried == std::vector{-1});

  // a repeat is served from the transcript
  const auto first = m->request({B("000111"), 2});
  const auto again = m->request({B("000111"), 2});
  CHECK(again.repeat);
  CHECK(again.hash == first.hash);

  // class budget: 2^k + 1 requests in class k
  auto v = cascade6().fresh();
  const auto xs = all_strings(6);
  for (int i = 0; i < 4; ++i) CHECK(v->request({xs[static_cast<std::size_t>(i)], 2}).status == MatchStatus::kMatched);
  CHECK(v->request({xs[4], 2}).status == MatchStatus::kBudgetViolation);

  CHECK(kind_of([&] { m->request({B("0101"), 1}); }) == ErrorKind::kUnknownLeftNode);
}

TEST_CASE("cascade flood: every request served, lengths and inflow bounded") {
  const auto& proto = cascade6();
  CHECK(proto.all_levels_verified());
  const int n = 6;
  SplitMix64 rng(9);
  for (int seed = 0; seed < 20; ++seed) {
    std::vector<MatchRequest> stream;
    for (int k = 0; k <= n; ++k) {
      auto xs = all_strings(n);
      shuffle(xs, rng);
      for (std::size_t i = 0; i < (std::size_t{1} << std::min(k, n)); ++i) stream.push_back({xs[i], k});
    }
    shuffle(stream, rng);
    auto m = proto.fresh();
    for (const auto& r : stream) {
      const auto e = m->request(r);
      REQUIRE(e.status == MatchStatus::kMatched);
      CHECK(static_cast<int>(e.hash->size()) <= r.k + proto.overhead_const());
    }
    const auto report = overhead_audit(m->transcript(), [&](std::size_t) { return long{proto.overhead_const()}; });
    CHECK(report.passed());
    CHECK(report.unmatched == 0);
    for (const auto& [level, count] : level_inflow(m->transcript())) {
      if (level >= 0) CHECK(count <= (std::size_t{1} << (level + 1)));
    }
  }
}

TEST_CASE("overhead audit") {
  CHECK(overhead_audit({}).passed());
  Transcript t;
  t.push_back({{B("00"), 1}, MatchStatus::kMatched, B("111"), {1}, false});
  t.push_back({{B("01"), 1}, MatchStatus::kMatched, B("111"), {1}, false});
  const auto r = overhead_audit(t);
  CHECK_FALSE(r.injective);
  REQUIRE(r.collision);
  CHECK(std::get<0>(*r.collision) == B("00"));
  CHECK(std::get<1>(*r.collision) == B("01"));
  CHECK(std::get<2>(*r.collision) == B("111"));
  const auto tight = overhead_audit(t, [](std::size_t) { return 1L; });
  CHECK_FALSE(tight.length_ok);
  CHECK(tight.max_overhead.at(2) == 2);
}

TEST_CASE("multi-length matcher prefixes the code of n") {
  CascadeOptions opts;
  auto u = build_random_universe(3, opts);
  const auto e = u.request({B("101"), 1});
  REQUIRE(e.hash);
  CHECK(e.hash->starts_with(prefix_code(3)));
  CHECK(u.overhead(3) == static_cast<int>(prefix_code(3).size()) + u.cascades().at(3).overhead_const());
  CHECK(kind_of([&] { u.request({B("1010"), 1}); }) == ErrorKind::kLeftUniverseMiss);
  const auto empty = u.request({B("-"), 0});
  CHECK(empty.hash == prefix_code(0) + B("1"));
}

TEST_CASE("implicit and stored neighbor sources agree") {
  const auto spec = ExpanderSpec::standard_capped(6, 2, 42);
  const auto stored = NeighborSource::stored(gen_random_expander(spec), false);
  const auto implicit = NeighborSource::implicit(spec);
  for (const auto& x : all_strings(6)) CHECK(stored.neighbors(x) == implicit.neighbors(x));
  CHECK_FALSE(implicit.verified());
}

TEST_CASE("online game decider") {
  WorkBudget budget;
  const BitGraph perfect(2, {B("00"), B("01"), B("10")}, {{B("00")}, {B("01")}, {B("10")}});
  CHECK(decide_online_matching(perfect, 0, {{2, 4}}, budget).winner ==
        GameDecision::Winner::kMatcher);

  const BitGraph pigeon(1, {B("0"), B("1")}, {{B("0")}, {B("0")}});
  const auto pg = decide_online_matching(pigeon, 0, {{1, 2}}, budget);
  CHECK(pg.winner == GameDecision::Winner::kRequester);
  CHECK(pg.trace.back() == "M stuck");

  // crown graph on three nodes: x_i -> every p_j with j != i
  const std::vector<BitString> p{B("00"), B("01"), B("10")};
  const BitGraph crown(2, p, {{p[1], p[2]}, {p[0], p[2]}, {p[0], p[1]}});
  const auto c2 = decide_online_matching(crown, 0, {{2, 2}}, budget);
  const auto c3 = decide_online_matching(crown, 0, {{2, 3}}, budget);
  const auto c1 = decide_online_matching(crown, 0, {{1, 2}, {2, 2}}, budget);
  CHECK(c2.winner == GameDecision::Winner::kMatcher);
  CHECK(c3.winner == GameDecision::Winner::kMatcher);
  CHECK(c1.winner == GameDecision::Winner::kRequester);
  CHECK(oracle::GameOracle{crown, 0, {{2, 2}}}.matcher_wins());
  CHECK(oracle::GameOracle{crown, 0, {{2, 3}}}.matcher_wins());
  CHECK_FALSE(oracle::GameOracle{crown, 0, {{1, 2}, {2, 2}}}.matcher_wins());
}

TEST_CASE("decider agrees with brute force on random micro games") {
  SplitMix64 rng(77);
  WorkBudget budget;
  int matcher_wins = 0, requester_wins = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const auto left = all_strings(2);
    std::vector<std::vector<BitString>> adj;
    for (std::size_t i = 0; i < left.size(); ++i) {
      std::vector<BitString> nb;
      for (const auto& q : all_strings(0, 2)) {
        if (q.size() == 2 && rng.chance(1, 3)) nb.push_back(q);
      }
      adj.push_back(nb);
    }
    const BitGraph g(2, left, adj);
    const std::map<int, int> budgets{{1, static_cast<int>(1 + rng.below(2))},
                                     {2, static_cast<int>(1 + rng.below(3))}};
    const int c = static_cast<int>(rng.below(2));
    const auto d = decide_online_matching(g, c, budgets, budget);
    const bool expect = oracle::GameOracle{g, c, budgets}.matcher_wins();
    CHECK((d.winner == GameDecision::Winner::kMatcher) == expect);
    (expect ? matcher_wins : requester_wins)++;
  }
  CHECK(matcher_wins > 0);
  CHECK(requester_wins > 0);
}

TEST_CASE("declared matcher strategy survives random requesters") {
  WorkBudget budget;
  const std::vector<BitString> p{B("00"), B("01"), B("10"), B("11")};
  const BitGraph g(2, {B("00"), B("01"), B("10")},
                   {{p[0], p[1]}, {p[1], p[2]}, {p[2], p[3], p[0]}});
  const auto d = decide_online_matching(g, 0, {{2, 3}}, budget);
  REQUIRE(d.winner == GameDecision::Winner::kMatcher);
  SplitMix64 rng(1);
  for (int play = 0; play < 1000; ++play) {
    auto pos = d.game->initial();
    while (true) {
      const auto reqs = d.game->legal_requests(pos);
      if (reqs.empty() || rng.chance(1, 8)) break;
      const auto r = reqs[rng.below(reqs.size())];
      const auto a = d.matcher_answer(pos, r);
      REQUIRE(a);
      const auto legal = d.game->legal_answers(pos, r);
      REQUIRE(std::find(legal.begin(), legal.end(), *a) != legal.end());
      pos = d.game->play(pos, r, *a);
    }
  }
}

TEST_CASE("decider respects the work budget") {
  const auto g = gen_random_expander({3, 1, 3, 2, 1});
  WorkBudget tiny(10);
  CHECK(kind_of([&] { decide_online_matching(g, 2, {{1, 2}, {2, 4}}, tiny); }) ==
        ErrorKind::kWorkBudgetExceeded);
}

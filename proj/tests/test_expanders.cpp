#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "slk/expanders.hpp"
#include "slk/rng.hpp"

using namespace slk;

namespace {

BitString B(const char* s) { return BitString::parse(s); }

BitGraph complete(int left_len, int right_len) {
  auto left = all_strings(left_len);
  std::vector<std::vector<BitString>> adj(left.size(), all_strings(right_len));
  return BitGraph(right_len, left, adj);
}

BitGraph random_small(SplitMix64& rng) {
  const int left_len = 2 + static_cast<int>(rng.below(2));
  const int right_len = 2 + static_cast<int>(rng.below(2));
  auto left = all_strings(left_len);
  std::vector<std::vector<BitString>> adj;
  for (std::size_t i = 0; i < left.size(); ++i) {
    std::vector<BitString> nb;
    for (const auto& p : all_strings(right_len)) {
      if (rng.chance(1, 3)) nb.push_back(p);
    }
    adj.push_back(nb);
  }
  return BitGraph(right_len, left, adj);
}

bool is_violation(const BitGraph& g, const std::vector<BitString>& S, std::size_t Kp) {
  return neighborhood_size(g, S) < Kp;
}

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error thrown");
  return ErrorKind::kInvalidArgument;
}

}  // namespace

TEST_CASE("random expander generation") {
  const auto spec = ExpanderSpec::standard(6, 2, 7);
  CHECK(spec.right_len == 4);
  CHECK(spec.degree == 7);
  const auto g = gen_random_expander(spec);
  CHECK(g.left_count() == 64);
  CHECK(g.right_len() == 4);
  for (const auto& x : g.left_nodes()) CHECK(g.neighbors(x).size() == 7);
  CHECK(gen_random_expander(spec) == g);
  CHECK(gen_random_expander(ExpanderSpec::standard(6, 2, 8)) != g);
  CHECK(kind_of([] { gen_random_expander({6, 0, 2, 7, 1}); }) == ErrorKind::kGenerationFailure);

  // the capped spec falls back to the complete graph when n+1 > 2^{k+2}
  const auto capped = ExpanderSpec::standard_capped(6, 0, 1);
  CHECK(capped.degree == 4);
  CHECK(ExpanderSpec::standard_capped(6, 2, 1).degree == 7);
}

TEST_CASE("per-node substreams") {
  const auto g = gen_random_expander(ExpanderSpec::standard(6, 2, 7));
  for (const auto& x : g.left_nodes()) {
    const auto nb = sample_neighbors(x, 4, 7, 7);
    CHECK(std::equal(nb.begin(), nb.end(), g.neighbors(x).begin(), g.neighbors(x).end()));
  }
}

TEST_CASE("variable-length expanders") {
  const auto g = gen_variable_length_expander(2, 4, 5);
  CHECK(g.right_len() == 5);
  CHECK(g.left_count() == 4 + 8 + 16);
  for (const auto& x : g.left_nodes()) CHECK(g.neighbors(x).size() == x.size() + 3);

  const auto tiny = gen_variable_length_expander(1, 1, 0);
  CHECK(tiny.left_nodes() == std::vector{B("0"), B("1")});
  CHECK(tiny.right_len() == 4);
  for (const auto& x : tiny.left_nodes()) CHECK(tiny.neighbors(x).size() == 4);

  CHECK(kind_of([] { gen_variable_length_expander(2, 40, 0); }) == ErrorKind::kResourceLimit);

  // k = 0: nodes longer than 2^{k+3} = 8 see the whole right side
  const auto wide = gen_variable_length_expander(0, 10, 1, 4000);
  for (const auto& x : wide.left_nodes()) {
    if (x.size() > 8) CHECK(wide.neighbors(x).size() == 8);
    if (x.size() <= 5) CHECK(wide.neighbors(x).size() == x.size() + 3);
  }
}

TEST_CASE("exact verifier fixtures") {
  WorkBudget budget;
  CHECK(verify_expansion_exact(complete(3, 3), 4, 4, budget).passed());

  const BitGraph pair(1, {B("0"), B("1")}, {{B("0")}, {B("0")}});
  const auto v = verify_expansion_exact(pair, 2, 2, budget);
  REQUIRE(v.failed());
  CHECK(v.witness == std::vector{B("0"), B("1")});
  CHECK(v.render() == "FAIL witness=0,1");

  const auto g = gen_random_expander(ExpanderSpec::standard(6, 2, 7));
  CHECK(verify_expansion_exact(g, 4, 4, budget).passed());
  CHECK(verify_expansion_all_t(g, 4, budget).passed());
}

TEST_CASE("all-t verifier fixtures") {
  WorkBudget budget;
  CHECK(verify_expansion_all_t(complete(3, 3), 8, budget).passed());

  auto left = all_strings(3);
  const BitGraph star(2, left, std::vector<std::vector<BitString>>(8, {B("00")}));
  const auto v = verify_expansion_all_t(star, 2, budget);
  REQUIRE(v.failed());
  CHECK(v.witness.size() == 2);

  // variable-length graph, k = 2, lengths 2..5; seed 0 passes
  const auto g6 = gen_variable_length_expander(2, 5, 0);
  CHECK(verify_expansion_all_t(g6, 4, budget).passed());
}

TEST_CASE("exact verifier agrees with left-side enumeration") {
  SplitMix64 rng(2024);
  WorkBudget budget;
  for (int trial = 0; trial < 150; ++trial) {
    const auto g = random_small(rng);
    const std::size_t K = 1 + rng.below(4);
    const std::size_t Kp = 1 + rng.below(5);
    const auto v = verify_expansion_exact(g, K, Kp, budget);
    CHECK(v.passed() == oracle::expands(g, K, Kp));
    if (v.failed()) {
      CHECK(v.witness.size() == K);
      CHECK(is_violation(g, v.witness, Kp));
    }
    const auto all = verify_expansion_all_t(g, K, budget);
    CHECK(all.passed() == oracle::expands_all_t(g, K));
    if (all.failed()) {
      CHECK(is_violation(g, all.witness, all.witness.size()));
      CHECK(all.witness.size() <= K);
    }
    // sampled never contradicts a definite answer
    const auto s = verify_expansion_sampled(g, K, Kp, 50, trial);
    CHECK_FALSE(s.passed());
    if (s.failed()) {
      CHECK_FALSE(v.passed());
      CHECK(is_violation(g, s.witness, Kp));
    }
  }
}

TEST_CASE("sampled verifier") {
  CHECK(verify_expansion_sampled(complete(3, 3), 4, 4, 100, 1).render() == "UNKNOWN trials=100");

  std::vector<BitString> left = all_strings(3);
  std::vector<std::vector<BitString>> adj;
  for (std::size_t i = 0; i < left.size(); ++i) {
    adj.push_back(i < 2 ? std::vector{B("000")} : all_strings(3));
  }
  const BitGraph forced(3, left, adj);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto v = verify_expansion_sampled(forced, 2, 2, 100, seed);
    REQUIRE(v.failed());
    CHECK(v.witness == std::vector{B("000"), B("001")});
  }

  const auto big = gen_random_expander(ExpanderSpec::standard(10, 4, 3));
  CHECK(verify_expansion_sampled(big, 16, 16, 10'000, 1).kind == Verdict::Kind::kUnknown);
}

TEST_CASE("work budget") {
  // degree 3 < K, so every node takes part in the union search
  const auto g = gen_random_expander({8, 3, 5, 3, 1});
  WorkBudget tiny(100);
  CHECK(kind_of([&] { verify_expansion_all_t(g, 8, tiny); }) == ErrorKind::kWorkBudgetExceeded);
}

TEST_CASE("amplification") {
  CHECK(DisperserSpec::copies_for(2, 1.0, 16) == 1);
  CHECK(DisperserSpec::copies_for(4, 1.0, 16) == 8);
  CHECK(DisperserSpec::copies_for(4, 2.0, 10) == 7);

  const auto base = gen_random_expander(ExpanderSpec::standard(6, 2, 7));
  DisperserSpec one;
  one.copies = 1;
  const auto a1 = amplify(base, one, true);
  CHECK(a1.graph == base);
  CHECK(a1.tag_width == 0);
  CHECK(a1.base_verified);

  DisperserSpec four;
  four.copies = 4;
  const auto a4 = amplify(base, four, false);
  CHECK(a4.graph.right_len() == 6);
  for (const auto& x : base.left_nodes()) CHECK(a4.graph.neighbors(x).size() == 28);
  CHECK_FALSE(a4.base_verified);

  WorkBudget budget;
  REQUIRE(verify_expansion_exact(base, 4, 8, budget).passed());
  CHECK(verify_expansion_exact(amplify(base, one, true).graph, 4, 4, budget).passed());

  DisperserSpec bad;
  bad.copies = 0;
  CHECK(kind_of([&] { amplify(base, bad, false); }) == ErrorKind::kInvalidArgument);
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>

#include "slk/bitgraph.hpp"
#include "slk/error.hpp"
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

template <class F>
ErrorKind kind_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error thrown");
  return ErrorKind::kInvalidArgument;
}

}  // namespace

TEST_CASE("bit strings") {
  CHECK(B("0") != B("00"));
  CHECK(B("-").empty());
  CHECK(B("-").render() == "-");
  CHECK(B("0101").to_uint() == 5);
  CHECK(BitString::from_uint(5, 4) == B("0101"));
  CHECK(kind_of([] { BitString::from_uint(16, 4); }) == ErrorKind::kWidthOverflow);
  CHECK(kind_of([] { BitString::parse("012"); }) == ErrorKind::kInvalidArgument);
  CHECK(B("1").starts_with(B("-")));
  CHECK_FALSE(B("1").starts_with(B("10")));
  CHECK(B("11") < B("000"));
  CHECK(B("01") < B("10"));
  CHECK(shortlex_next(B("-")) == B("0"));
  CHECK(shortlex_next(B("1")) == B("00"));
  CHECK(shortlex_next(B("0111")) == B("1000"));
  CHECK(all_strings(3).size() == 8);
  CHECK(all_strings(1, 3).size() == 14);
  // 2^68 - 1, and 2^3 = 1 (mod 7)
  CHECK(BitString::repeat(true, 68).mod(7) == 3);
  CHECK(BitString::repeat(true, 68).mod(1000003) == 610976);
}

TEST_CASE("prefix code of n doubles each bit and ends with 01") {
  CHECK(prefix_code(6) == B("11110001"));
  CHECK(prefix_code(1) == B("1101"));
  CHECK(prefix_code(0) == B("0001"));
  for (std::uint64_t n = 0; n < 300; ++n) {
    const auto code = prefix_code(n) + B("1011");
    auto [v, used] = decode_prefix_code(code);
    CHECK(v == n);
    CHECK(used == prefix_code(n).size());
  }
  // no code is a prefix of another
  for (std::uint64_t a = 0; a < 64; ++a) {
    for (std::uint64_t b = 0; b < 64; ++b) {
      if (a != b) CHECK_FALSE(prefix_code(b).starts_with(prefix_code(a)));
    }
  }
}

TEST_CASE("degree") {
  const auto g = complete(1, 2);
  CHECK(degree(g, B("0")) == 4);
  const BitGraph iso(2, {B("0")}, {{}});
  CHECK(degree(iso, B("0")) == 0);
  CHECK(kind_of([&] { degree(g, B("11")); }) == ErrorKind::kUnknownLeftNode);
  const auto r = gen_random_expander(ExpanderSpec::standard(6, 2, 7));
  for (const auto& x : r.left_nodes()) CHECK(degree(r, x) == 7);
}

TEST_CASE("serialization round trip") {
  const auto g = complete(1, 2);
  const auto text = write_graph(g);
  CHECK(text == "bigraph v1 right_len=2\n0 : 00 01 10 11\n1 : 00 01 10 11\n");
  CHECK(write_graph(read_graph(text)) == text);

  const auto r = gen_random_expander(ExpanderSpec::standard(6, 2, 7));
  CHECK(read_graph(write_graph(r)) == r);

  const auto v = gen_variable_length_expander(2, 4, 3);
  CHECK(read_graph(write_graph(v)) == v);

  const BitGraph e(0, {B("-"), B("0")}, {{B("-")}, {}});
  CHECK(write_graph(e) == "bigraph v1 right_len=0\n- : -\n0 :\n");
  CHECK(read_graph(write_graph(e)) == e);
}

TEST_CASE("parse errors carry a kind and line number") {
  CHECK(kind_of([] { read_graph("bigraph v1 right_len=2\n0 : 00 1\n"); }) ==
        ErrorKind::kInconsistentRightLength);
  CHECK(kind_of([] { read_graph("bigraph v1 right_len=2\n0 : 00 00\n"); }) ==
        ErrorKind::kDuplicateNeighbor);
  CHECK(kind_of([] { read_graph("bigraph v2 right_len=2\n"); }) == ErrorKind::kParse);
  try {
    read_graph("bigraph v1 right_len=1\n0 : 1\n1 1\n");
    FAIL("expected parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
}

TEST_CASE("disjoint union") {
  const auto g = complete(1, 2);
  const BitGraph u1 = disjoint_union(std::vector{g}, std::vector{B("-")});
  CHECK(u1 == g);

  const auto tags = copy_tags(4);
  REQUIRE(tags == std::vector{B("00"), B("01"), B("10"), B("11")});
  const std::vector<BitGraph> four(4, g);
  const auto u4 = disjoint_union(four, tags);
  CHECK(u4.right_len() == 4);
  for (const auto& x : g.left_nodes()) CHECK(degree(u4, x) == 4 * degree(g, x));

  // hand enumeration
  const BitGraph a(1, {B("0"), B("1")}, {{B("1")}, {B("0"), B("1")}});
  const BitGraph b(1, {B("0"), B("1")}, {{B("0")}, {}});
  const auto ab = disjoint_union(std::vector{a, b}, std::vector{B("0"), B("1")});
  CHECK(std::vector(ab.neighbors(B("0")).begin(), ab.neighbors(B("0")).end()) ==
        std::vector{B("01"), B("10")});
  CHECK(std::vector(ab.neighbors(B("1")).begin(), ab.neighbors(B("1")).end()) ==
        std::vector{B("00"), B("01")});

  CHECK(kind_of([&] { disjoint_union(std::vector{a, b}, std::vector{B("0"), B("0")}); }) ==
        ErrorKind::kInvalidArgument);
  CHECK(kind_of([&] { disjoint_union(std::vector{a, b}, std::vector{B("0"), B("10")}); }) ==
        ErrorKind::kInvalidArgument);
  const BitGraph other(1, {B("1"), B("0")}, {{}, {}});
  CHECK(kind_of([&] { disjoint_union(std::vector{a, other}, std::vector{B("0"), B("1")}); }) ==
        ErrorKind::kInvalidArgument);
}

TEST_CASE("union right sets are disjoint and degrees add") {
  SplitMix64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<BitGraph> gs;
    for (int i = 0; i < 3; ++i) {
      gs.push_back(gen_random_expander({4, 1, 3, 1 + static_cast<int>(rng.below(5)), rng.next()}));
    }
    const auto u = disjoint_union(gs, copy_tags(3));
    for (const auto& x : u.left_nodes()) {
      std::size_t sum = 0;
      for (const auto& g : gs) sum += degree(g, x);
      CHECK(degree(u, x) == sum);
    }
    std::set<BitString> seen[3];
    for (std::size_t i = 0; i < 3; ++i) {
      for (const auto& x : u.left_nodes()) {
        for (const auto& p : u.neighbors(x)) {
          if (p.starts_with(copy_tags(3)[i])) seen[i].insert(p);
        }
      }
    }
    for (int i = 0; i < 3; ++i) {
      for (int j = i + 1; j < 3; ++j) {
        for (const auto& p : seen[i]) CHECK_FALSE(seen[j].contains(p));
      }
    }
  }
}

TEST_CASE("graph family directory round trip") {
  const auto dir = std::filesystem::temp_directory_path() / "slk_family_test";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  GraphFamily fam;
  fam.members.emplace(std::pair{4, 0}, gen_random_expander(ExpanderSpec::standard_capped(4, 0, 1)));
  fam.members.emplace(std::pair{4, 1}, gen_random_expander(ExpanderSpec::standard_capped(4, 1, 1)));
  fam.save_dir(dir.string());
  const auto back = GraphFamily::load_dir(dir.string());
  CHECK(back.members == fam.members);
  CHECK(back.overhead.at(4) == 2);
  std::filesystem::remove_all(dir);
}

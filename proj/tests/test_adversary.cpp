#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "slk/adversary.hpp"
#include "slk/approximator.hpp"
#include "slk/expanders.hpp"

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

// 16 left nodes of length 4, node i -> right node i mod 4.
BitGraph degree_one() {
  std::vector<std::vector<BitString>> adj;
  for (std::uint64_t i = 0; i < 16; ++i) adj.push_back({BitString::from_uint(i % 4, 2)});
  return BitGraph(2, all_strings(4), adj);
}

BitGraph identity(int m) {
  std::vector<std::vector<BitString>> adj;
  for (const auto& x : all_strings(m)) adj.push_back({x});
  return BitGraph(m, all_strings(m), adj);
}

// Least right set (as sorted index combination) of size b covering >= need
// left nodes, by bitmask enumeration.
std::optional<std::vector<std::string>> brute_fooling(const BitGraph& g, int k, int c) {
  const int m = k + c;
  const std::size_t b = std::size_t{1} << (k - 1);
  const std::size_t need = std::size_t{1} << k;
  std::optional<std::vector<std::string>> best;
  for (std::uint32_t mask = 0; mask < (1u << (1 << m)); ++mask) {
    if (static_cast<std::size_t>(std::popcount(mask)) != b) continue;
    std::size_t covered = 0;
    for (std::size_t i = 0; i < g.left_count(); ++i) {
      bool inside = true;
      for (const auto& p : g.neighbors_at(i)) inside &= ((mask >> oracle::value(p.bits())) & 1) != 0;
      covered += inside;
    }
    if (covered < need) continue;
    std::vector<std::string> set;
    for (int v = 0; v < (1 << m); ++v) {
      if ((mask >> v) & 1) set.push_back(BitString::from_uint(static_cast<std::uint64_t>(v), m).bits());
    }
    if (!best || set < *best) best = set;
  }
  return best;
}

}  // namespace

TEST_CASE("fooling search fixtures") {
  WorkBudget budget;
  const auto g = degree_one();
  const auto w = fooling_search(g, 2, 0, {}, budget);
  REQUIRE(w);
  CHECK(w->B == std::vector{B("00"), B("01")});
  CHECK(w->S.size() == 8);
  CHECK(verify_fooling_witness(g, 2, 0, *w));

  for (int m = 2; m <= 4; ++m) {
    for (int k = 1; k <= m; ++k) {
      CHECK_FALSE(fooling_search(identity(m), k, m - k, {}, budget));
    }
  }

  // complete graph: every B covers everything
  std::vector<std::vector<BitString>> adj(8, std::vector<BitString>{B("0"), B("1")});
  const BitGraph full(1, all_strings(3), adj);
  const auto wc = fooling_search(full, 1, 0, {}, budget);
  CHECK_FALSE(wc);  // |B| = 1 cannot hold a degree-2 neighborhood

  CHECK(kind_of([&] { fooling_search(g, 2, 1, {}, budget); }) == ErrorKind::kShapeMismatch);
  WorkBudget tiny(5);
  CHECK(kind_of([&] { fooling_search(identity(4), 3, 1, {}, tiny); }) ==
        ErrorKind::kWorkBudgetExceeded);
}

TEST_CASE("exhaustive search agrees with bitmask enumeration") {
  WorkBudget budget;
  SplitMix64 rng(3);
  for (int trial = 0; trial < 80; ++trial) {
    const int k = 1 + static_cast<int>(rng.below(2));
    const int c = static_cast<int>(rng.below(2));
    ExpanderSpec spec{4, k, k + c, 1 + static_cast<int>(rng.below(2)), rng.next()};
    const auto g = gen_random_expander(spec);
    const auto w = fooling_search(g, k, c, {}, budget);
    const auto want = brute_fooling(g, k, c);
    REQUIRE(w.has_value() == want.has_value());
    if (w) {
      CHECK(verify_fooling_witness(g, k, c, *w));
      std::vector<std::string> got;
      for (const auto& p : w->B) got.push_back(p.bits());
      std::sort(got.begin(), got.end());
      CHECK(got == *want);
    }
    // randomized mode only ever reports verified witnesses
    const auto r = fooling_search(g, k, c, {FoolingMode::kRandomized, 30, static_cast<std::uint64_t>(trial)}, budget);
    if (r) CHECK(verify_fooling_witness(g, k, c, *r));
    if (!want) CHECK_FALSE(r);
  }
}

TEST_CASE("tampered witnesses fail verification") {
  WorkBudget budget;
  const auto g = degree_one();
  auto w = *fooling_search(g, 2, 0, {}, budget);
  auto small = w;
  small.S.resize(3);
  CHECK_FALSE(verify_fooling_witness(g, 2, 0, small));
  auto outside = w;
  outside.S.push_back(B("0010"));
  CHECK_FALSE(verify_fooling_witness(g, 2, 0, outside));
  auto wide = w;
  wide.B.push_back(B("10"));
  CHECK_FALSE(verify_fooling_witness(g, 2, 0, wide));
}

TEST_CASE("degree pressure report") {
  WorkBudget budget;
  const auto r = degree_pressure_report(degree_one(), 2, 0, budget);
  CHECK(r.ell == 4);
  CHECK(r.threshold == 1.0);
  CHECK(r.precondition_met);
  REQUIRE(r.witness);

  std::vector<std::vector<BitString>> adj;
  for (std::uint64_t i = 0; i < 16; ++i) {
    adj.push_back(i == 0 ? std::vector{B("00"), B("01")} : std::vector{BitString::from_uint(i % 4, 2)});
  }
  const auto r2 = degree_pressure_report(BitGraph(2, all_strings(4), adj), 2, 0, budget);
  CHECK_FALSE(r2.precondition_met);
  CHECK_FALSE(r2.witness);
  CHECK(r2.summary().find("lemma precondition not met; no conclusion") != std::string::npos);

  const BitGraph odd(2, {B("0000"), B("0001"), B("0010")}, {{}, {}, {}});
  CHECK(kind_of([&] { degree_pressure_report(odd, 2, 0, budget); }) == ErrorKind::kShapeMismatch);
}

TEST_CASE("white greedy strategy") {
  PawnGameState s(1, 1);
  auto m = white_greedy_strategy(s);
  REQUIRE(m);
  CHECK(m->kind == PawnMove::Kind::kPlace);
  CHECK(m->cell == Cell{0, 0});
  s.apply(*m);
  s.apply(PawnMove::pass());
  CHECK(white_greedy_strategy(s)->is_pass());
  s.apply(PawnMove::pass());
  s.apply(PawnMove::disable_column(0));
  const auto next = white_greedy_strategy(s);
  REQUIRE(next);
  CHECK(next->cell == Cell{1, 1});
}

TEST_CASE("pawn game rules") {
  PawnGameState s(0, 1);
  CHECK(s.side() == 2);
  CHECK(s.black_limit() == 2);
  s.apply(PawnMove::place({0, 0}));
  CHECK(kind_of([&] { s.apply(PawnMove::place({1, 1})); }) == ErrorKind::kIllegalMove);  // black's turn
  s.apply(PawnMove::disable_cells({{0, 0}}));
  CHECK(kind_of([&] { s.apply(PawnMove::place({0, 1})); }) == ErrorKind::kIllegalMove);  // row used
  s.apply(PawnMove::place({1, 1}));
  // black already used his single move
  CHECK(kind_of([&] { s.apply(PawnMove::disable_column(1)); }) == ErrorKind::kIllegalMove);

  PawnGameState t(1, 1);
  t.apply(PawnMove::pass());
  CHECK(kind_of([&] { t.apply(PawnMove::disable_cells({{0, 0}, {1, 0}})); }) == ErrorKind::kIllegalMove);
  CHECK(kind_of([] { PawnGameState(10, 4); }) == ErrorKind::kInvalidArgument);
}

TEST_CASE("small pawn games") {
  auto flood = black_flood_strategy();
  const auto r = pawn_game_run(0, 3, white_greedy_strategy, *flood);
  CHECK(r.white_survives);
  CHECK(r.final_state.black_moves() < 2);

  // d = 0, k = 2: the counting bound fails and Black can win
  CHECK_FALSE(counting_bound_holds(2, 0));
  WorkBudget budget;
  const auto win = search_black_win(2, 0, budget);
  REQUIRE(win);
  CHECK(win->back() == "W stuck");
  auto f = black_flood_strategy();
  const auto lost = pawn_game_run(2, 0, white_greedy_strategy, *f);
  CHECK_FALSE(lost.white_survives);
  CHECK(lost.lost_at_turn == 5);
  CHECK(lost.final_state.black_moves() < 8);
}

TEST_CASE("greedy White survives for d = 3") {
  for (int k = 0; k <= 6; ++k) {
    CHECK(counting_bound_holds(k, 3));
    DefaultMachine machine;
    std::vector<std::unique_ptr<BlackStrategy>> blacks;
    blacks.push_back(black_flood_strategy());
    blacks.push_back(black_sniper_strategy());
    blacks.push_back(black_blind_strategy(machine, 10'000, k, 3));
    for (std::uint64_t seed = 0; seed < 10; ++seed) blacks.push_back(black_random_strategy(seed));
    for (auto& b : blacks) {
      const auto r = pawn_game_run(k, 3, white_greedy_strategy, *b);
      CHECK(r.white_survives);
      const auto cc = counting_check(r.final_state);
      CHECK(cc.holds());
      CHECK(cc.below_board());
      CHECK(r.final_state.black_moves() < r.final_state.black_limit());
      r.final_state.check_invariants();
    }
  }
}

TEST_CASE("trace format") {
  CHECK(render_move(Side::kWhite, PawnMove::place({3, 5})) == "W place 3 5");
  CHECK(render_move(Side::kWhite, PawnMove::pass()) == "W pass");
  CHECK(render_move(Side::kBlack, PawnMove::disable_column(7)) == "B col 7");
  CHECK(render_move(Side::kBlack, PawnMove::disable_cells({{1, 0}, {2, 3}})) == "B cells (1,0) (2,3)");
  CHECK(render_move(Side::kBlack, PawnMove::pass()) == "B pass");
}

TEST_CASE("blind Black") {
  SilentMachine silent;
  CHECK(blind_events(silent, 10'000, 3, 3).empty());
  auto b = black_blind_strategy(silent, 10'000, 3, 3);
  const auto r = pawn_game_run(3, 3, white_greedy_strategy, *b);
  CHECK(r.white_survives);
  CHECK(r.final_state.black_moves() == 0);

  DefaultMachine m;
  const auto events = blind_events(m, 10'000, 3, 3);
  CHECK(events.size() < 16);
  auto bd = black_blind_strategy(m, 10'000, 3, 3);
  const auto rd = pawn_game_run(3, 3, white_greedy_strategy, *bd);
  CHECK(rd.final_state.black_moves() < 16);
  // the surviving pawn's column is a string of complexity >= k
  const auto& last = rd.final_state.pawns().back();
  const auto x = BitString::from_uint(last.col, 6);
  const auto c = complexity(m, x, 10'000, 12);
  CHECK((!c || *c >= 3));

  // a machine whose short programs print 6-bit strings drives both feeds
  class Chatty final : public ToyMachine {
   public:
    std::optional<BitString> eval(const BitString& q, const BitString& z, std::uint64_t) const override {
      if (q.size() == 1) return q.bit(0) ? BitString::parse("000111") : BitString::parse("0") + z;
      if (q.size() == 2 && z.empty()) return BitString::parse("111000");
      if (q.size() == 2) return std::nullopt;
      return BitString::parse("-");
    }
    std::string name() const override { return "chatty"; }
  } chatty;
  const auto ev = blind_events(chatty, 100, 3, 3);
  // "0": total, prints 0z -> cells (z, z); "1": new column 000111;
  // length 2: columns 111000 (once), not total
  REQUIRE(ev.size() == 3);
  CHECK(ev[0].kind == PawnMove::Kind::kCells);
  CHECK(ev[0].cells.size() == 64);
  CHECK(ev[1].kind == PawnMove::Kind::kColumn);
  CHECK(ev[1].column == 7);
  CHECK(ev[2].column == 56);
}

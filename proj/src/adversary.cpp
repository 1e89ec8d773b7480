#include "slk/adversary.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "slk/detail/mask.hpp"

namespace slk {

namespace {

void check_fooling_shape(const BitGraph& g, int k, int c) {
  if (k < 1 || c < 0) throw Error(ErrorKind::kInvalidArgument, "fooling search needs k >= 1, c >= 0");
  if (g.right_len() != k + c) {
    throw Error(ErrorKind::kShapeMismatch, "right_len " + std::to_string(g.right_len()) +
                                               " != k + c = " + std::to_string(k + c));
  }
  if (k + c > 20) throw Error(ErrorKind::kResourceLimit, "k + c > 20");
}

// C(n, r) saturating at UINT64_MAX.
std::uint64_t binom_sat(std::uint64_t n, std::uint64_t r) {
  if (r > n) return 0;
  r = std::min(r, n - r);
  unsigned __int128 acc = 1;
  for (std::uint64_t i = 1; i <= r; ++i) {
    acc = acc * (n - r + i) / i;
    if (acc > UINT64_MAX) return UINT64_MAX;
  }
  return static_cast<std::uint64_t>(acc);
}

std::optional<FoolingWitness> check_candidate(const detail::IndexedGraph& ig, const BitGraph& g,
                                              const std::vector<std::size_t>& chosen,
                                              std::size_t need) {
  detail::Mask b(ig.right_names.size());
  for (auto i : chosen) b.set(i);
  std::vector<std::size_t> covered;
  for (std::size_t x = 0; x < ig.neighborhoods.size(); ++x) {
    if (ig.neighborhoods[x].is_subset_of(b)) covered.push_back(x);
  }
  if (covered.size() < need) return std::nullopt;
  FoolingWitness w;
  for (auto i : chosen) w.B.push_back(ig.right_names[i]);
  for (auto x : covered) w.S.push_back(g.left_nodes()[x]);
  return w;
}

}  // namespace

std::optional<FoolingWitness> fooling_search(const BitGraph& g, int k, int c,
                                             const FoolingOptions& options, WorkBudget& budget) {
  check_fooling_shape(g, k, c);
  const auto ig = detail::index_full_right(g);
  const std::size_t universe = ig.right_names.size();
  const std::size_t b_size = std::size_t{1} << (k - 1);
  const std::size_t need = std::size_t{1} << k;
  const std::uint64_t per = std::max<std::uint64_t>(1, g.left_count());

  if (options.mode == FoolingMode::kRandomized) {
    SplitMix64 rng(options.seed);
    std::vector<std::size_t> pool(universe);
    for (std::uint64_t t = 0; t < options.trials; ++t) {
      for (std::size_t i = 0; i < universe; ++i) pool[i] = i;
      for (std::size_t i = 0; i < b_size; ++i) {
        std::swap(pool[i], pool[i + rng.below(universe - i)]);
      }
      std::vector<std::size_t> chosen(pool.begin(), pool.begin() + static_cast<long>(b_size));
      std::sort(chosen.begin(), chosen.end());
      if (auto w = check_candidate(ig, g, chosen, need)) return w;
    }
    return std::nullopt;
  }

  const auto total = binom_sat(universe, b_size);
  if (total == UINT64_MAX || budget.would_exceed(total > UINT64_MAX / per ? UINT64_MAX : total * per)) {
    throw Error(ErrorKind::kWorkBudgetExceeded,
                "exhaustive fooling search needs C(" + std::to_string(universe) + ", " +
                    std::to_string(b_size) + ") candidate sets");
  }
  std::vector<std::size_t> chosen(b_size);
  for (std::size_t i = 0; i < b_size; ++i) chosen[i] = i;
  while (true) {
    budget.charge(per, "fooling search");
    if (auto w = check_candidate(ig, g, chosen, need)) return w;
    // next combination in lexicographic order
    std::size_t i = b_size;
    while (i > 0 && chosen[i - 1] == universe - b_size + i - 1) --i;
    if (i == 0) break;
    ++chosen[i - 1];
    for (std::size_t j = i; j < b_size; ++j) chosen[j] = chosen[j - 1] + 1;
  }
  return std::nullopt;
}

bool verify_fooling_witness(const BitGraph& g, int k, int c, const FoolingWitness& w) {
  if (k < 1 || g.right_len() != k + c) return false;
  const std::set<BitString> b(w.B.begin(), w.B.end());
  if (b.size() != w.B.size() || b.size() != (std::size_t{1} << (k - 1))) return false;
  for (const auto& p : b) {
    if (p.size() != static_cast<std::size_t>(k + c)) return false;
  }
  const std::set<BitString> s(w.S.begin(), w.S.end());
  if (s.size() != w.S.size() || s.size() < (std::size_t{1} << k)) return false;
  for (const auto& x : s) {
    if (!g.contains(x)) return false;
    for (const auto& p : g.neighbors(x)) {
      if (!b.contains(p)) return false;
    }
  }
  return true;
}

std::string DegreePressureReport::summary() const {
  std::ostringstream out;
  out << "ell=" << ell << " k=" << k << " c=" << c << " D=" << threshold
      << " max_degree=" << max_degree << '\n';
  if (!precondition_met) {
    out << "lemma precondition not met; no conclusion\n";
  } else if (witness) {
    out << "witness found: |B|=" << witness->B.size() << " |S|=" << witness->S.size() << '\n';
  } else {
    out << "no witness found (contradicts the degree bound)\n";
  }
  return out.str();
}

DegreePressureReport degree_pressure_report(const BitGraph& g, int k, int c, WorkBudget& budget) {
  DegreePressureReport r;
  r.k = k;
  r.c = c;
  const auto count = g.left_count();
  if (count == 0 || !std::has_single_bit(count)) {
    throw Error(ErrorKind::kShapeMismatch, "left side must have 2^ell nodes");
  }
  r.ell = std::countr_zero(count);
  for (const auto& x : g.left_nodes()) {
    if (x.size() != static_cast<std::size_t>(r.ell)) {
      throw Error(ErrorKind::kShapeMismatch, "left node " + x.render() + " is not of length ell");
    }
  }
  if (g.right_len() != k + c) {
    throw Error(ErrorKind::kShapeMismatch, "right_len " + std::to_string(g.right_len()) +
                                               " != k + c = " + std::to_string(k + c));
  }
  r.threshold = std::min(std::ldexp(1.0, k - 2),
                         static_cast<double>(r.ell - k) / static_cast<double>(c + 2));
  r.max_degree = g.max_degree();
  // exact rational comparison: deg <= 2^{k-2} and deg*(c+2) <= ell-k
  const auto deg = static_cast<long long>(r.max_degree);
  const bool pow_ok = k >= 2 ? deg <= (1ll << (k - 2)) : deg * (1ll << (2 - k)) <= 1;
  r.precondition_met = k >= 1 && pow_ok && deg * (c + 2) <= r.ell - k;
  if (r.precondition_met) r.witness = fooling_search(g, k, c, {}, budget);
  return r;
}

// ---------------------------------------------------------------------------

PawnGameState::PawnGameState(int k, int d) : k_(k), d_(d) {
  if (k < 0 || d < 0 || k + d > 13) {
    throw Error(ErrorKind::kInvalidArgument, "pawn game needs k, d >= 0 and k + d <= 13");
  }
  side_ = std::uint32_t{1} << (k + d);
  row_used_.assign(side_, false);
  col_used_.assign(side_, false);
  col_off_.assign(side_, false);
  cell_off_.assign(std::size_t{side_} * side_, false);
}

bool PawnGameState::disabled(Cell c) const {
  return cell_off_[std::size_t{c.row} * side_ + c.col];
}

void PawnGameState::disable(Cell c) {
  auto ref = cell_off_[std::size_t{c.row} * side_ + c.col];
  if (!ref) {
    ref = true;
    ++disabled_count_;
  }
}

bool PawnGameState::white_lost() const {
  if (pawns_.empty()) return false;
  return std::all_of(pawns_.begin(), pawns_.end(), [&](Cell c) { return disabled(c); });
}

void PawnGameState::apply(const PawnMove& m) {
  if (to_move_ == Side::kWhite) {
    apply_white(m);
    to_move_ = Side::kBlack;
  } else {
    apply_black(m);
    to_move_ = Side::kWhite;
  }
}

void PawnGameState::apply_white(const PawnMove& m) {
  if (m.is_pass()) return;
  if (m.kind != PawnMove::Kind::kPlace) {
    throw Error(ErrorKind::kIllegalMove, "white: only pass or place");
  }
  const Cell c = m.cell;
  if (c.row >= side_ || c.col >= side_) throw Error(ErrorKind::kIllegalMove, "white: off board");
  if (row_used_[c.row] || col_used_[c.col]) {
    throw Error(ErrorKind::kIllegalMove, "white: row or column already has a pawn");
  }
  row_used_[c.row] = true;
  col_used_[c.col] = true;
  pawns_.push_back(c);
  ++white_moves_;
}

void PawnGameState::apply_black(const PawnMove& m) {
  if (m.is_pass()) return;
  if (black_exhausted()) throw Error(ErrorKind::kIllegalMove, "black: move budget exhausted");
  switch (m.kind) {
    case PawnMove::Kind::kColumn:
      if (m.column >= side_) throw Error(ErrorKind::kIllegalMove, "black: column off board");
      col_off_[m.column] = true;
      for (std::uint32_t r = 0; r < side_; ++r) disable({r, m.column});
      break;
    case PawnMove::Kind::kCells: {
      std::set<std::uint32_t> cols;
      for (const auto& c : m.cells) {
        if (c.row >= side_ || c.col >= side_) throw Error(ErrorKind::kIllegalMove, "black: cell off board");
        if (!cols.insert(c.col).second) {
          throw Error(ErrorKind::kIllegalMove, "black: two cells in one column");
        }
      }
      for (const auto& c : m.cells) disable(c);
      break;
    }
    default:
      throw Error(ErrorKind::kIllegalMove, "black: only pass, column or cells");
  }
  ++black_moves_;
}

void PawnGameState::check_invariants() const {
  std::set<std::uint32_t> rows, cols;
  for (const auto& p : pawns_) {
    if (!rows.insert(p.row).second || !cols.insert(p.col).second) {
      throw Error(ErrorKind::kIllegalMove, "two pawns share a row or column");
    }
  }
  if (black_moves_ >= black_limit()) throw Error(ErrorKind::kIllegalMove, "black over budget");
  if (white_moves_ != pawns_.size()) throw Error(ErrorKind::kIllegalMove, "pawn count drift");
}

std::optional<PawnMove> white_greedy_strategy(const PawnGameState& s) {
  if (!s.pawns().empty() && !s.disabled(s.pawns().back())) return PawnMove::pass();
  for (std::uint32_t r = 0; r < s.side(); ++r) {
    if (!s.row_free(r)) continue;
    for (std::uint32_t x = 0; x < s.side(); ++x) {
      if (s.col_free(x) && !s.disabled({r, x})) return PawnMove::place({r, x});
    }
  }
  return std::nullopt;
}

namespace {

class RandomBlack final : public BlackStrategy {
 public:
  explicit RandomBlack(std::uint64_t seed) : rng_(seed) {}
  PawnMove next(const PawnGameState& s) override {
    if (s.black_exhausted()) return PawnMove::pass();
    const auto side = s.side();
    const bool have_pawn = !s.pawns().empty();
    if (rng_.chance(1, 2)) {
      if (have_pawn && rng_.chance(1, 2)) return PawnMove::disable_column(s.pawns().back().col);
      return PawnMove::disable_column(static_cast<std::uint32_t>(rng_.below(side)));
    }
    std::vector<Cell> cells;
    const bool aim = have_pawn && rng_.chance(1, 2);
    for (std::uint32_t x = 0; x < side; ++x) {
      if (aim && s.pawns().back().col == x) {
        cells.push_back(s.pawns().back());
      } else if (rng_.chance(1, 2)) {
        cells.push_back({static_cast<std::uint32_t>(rng_.below(side)), x});
      }
    }
    if (cells.empty()) cells.push_back({0, static_cast<std::uint32_t>(rng_.below(side))});
    return PawnMove::disable_cells(std::move(cells));
  }
  std::string name() const override { return "random"; }

 private:
  SplitMix64 rng_;
};

class FloodBlack final : public BlackStrategy {
 public:
  PawnMove next(const PawnGameState& s) override {
    if (s.black_exhausted()) return PawnMove::pass();
    if (!s.pawns().empty() && !s.column_disabled(s.pawns().back().col)) {
      return PawnMove::disable_column(s.pawns().back().col);
    }
    for (std::uint32_t x = 0; x < s.side(); ++x) {
      if (!s.column_disabled(x)) return PawnMove::disable_column(x);
    }
    return PawnMove::pass();
  }
  std::string name() const override { return "flood"; }
};

class SniperBlack final : public BlackStrategy {
 public:
  PawnMove next(const PawnGameState& s) override {
    if (s.black_exhausted() || s.pawns().empty()) return PawnMove::pass();
    return PawnMove::disable_cells(s.pawns());
  }
  std::string name() const override { return "sniper"; }
};

class BlindBlack final : public BlackStrategy {
 public:
  explicit BlindBlack(std::vector<PawnMove> events) : events_(std::move(events)) {}
  PawnMove next(const PawnGameState& s) override {
    if (pos_ >= events_.size() || s.black_exhausted()) return PawnMove::pass();
    return events_[pos_++];
  }
  bool finished(const PawnGameState& s) const override {
    return pos_ >= events_.size() || s.black_exhausted();
  }
  std::string name() const override { return "blind"; }

 private:
  std::vector<PawnMove> events_;
  std::size_t pos_ = 0;
};

}  // namespace

std::unique_ptr<BlackStrategy> black_random_strategy(std::uint64_t seed) {
  return std::make_unique<RandomBlack>(seed);
}
std::unique_ptr<BlackStrategy> black_flood_strategy() { return std::make_unique<FloodBlack>(); }
std::unique_ptr<BlackStrategy> black_sniper_strategy() { return std::make_unique<SniperBlack>(); }

std::vector<PawnMove> blind_events(const ToyMachine& machine, std::uint64_t budget, int k, int d) {
  std::vector<PawnMove> events;
  if (k <= 0) return events;
  const auto width = static_cast<std::size_t>(k + d);
  const auto conditions = all_strings(k + d);
  std::set<BitString> seen;
  for_each_program(k - 1, [&](const BitString& q) {
    if (auto out = machine.eval(q, BitString(), budget);
        out && out->size() == width && seen.insert(*out).second) {
      events.push_back(PawnMove::disable_column(static_cast<std::uint32_t>(out->to_uint())));
    }
    std::vector<Cell> cells;
    for (const auto& x : conditions) {
      auto out = machine.eval(q, x, budget);
      if (!out) return true;  // not total
      if (out->size() == width + 1 && !out->bit(0)) {
        cells.push_back({static_cast<std::uint32_t>(out->substr(1).to_uint()),
                         static_cast<std::uint32_t>(x.to_uint())});
      }
    }
    if (!cells.empty()) events.push_back(PawnMove::disable_cells(std::move(cells)));
    return true;
  });
  return events;
}

std::unique_ptr<BlackStrategy> black_blind_strategy(const ToyMachine& machine,
                                                    std::uint64_t budget, int k, int d) {
  return std::make_unique<BlindBlack>(blind_events(machine, budget, k, d));
}

std::string render_move(Side side, const PawnMove& m) {
  std::ostringstream out;
  out << (side == Side::kWhite ? "W " : "B ");
  switch (m.kind) {
    case PawnMove::Kind::kPass: out << "pass"; break;
    case PawnMove::Kind::kPlace: out << "place " << m.cell.row << ' ' << m.cell.col; break;
    case PawnMove::Kind::kColumn: out << "col " << m.column; break;
    case PawnMove::Kind::kCells:
      out << "cells";
      for (const auto& c : m.cells) out << " (" << c.row << ',' << c.col << ')';
      break;
  }
  return out.str();
}

PawnOutcome pawn_game_run(int k, int d, const WhiteStrategy& white, BlackStrategy& black) {
  PawnOutcome o{true, std::nullopt, false, 0, {}, PawnGameState(k, d)};
  auto& s = o.final_state;
  // Black makes fewer than 2^{k+1} moves; each round either ends the game
  // or is followed by a Black move, so this cap is only hit by a passive Black
  // that never reports being finished.
  const std::uint64_t cap = 4 * s.black_limit() + (std::uint64_t{1} << 20);
  while (true) {
    ++o.rounds;
    if (o.rounds > cap) throw Error(ErrorKind::kResourceLimit, "pawn game did not settle");
    auto wm = white(s);
    if (!wm) {
      o.trace.push_back("W stuck");
      o.stuck = true;
      o.white_survives = false;
      o.lost_at_turn = o.rounds;
      return o;
    }
    s.apply(*wm);
    o.trace.push_back(render_move(Side::kWhite, *wm));
    s.check_invariants();
    if (s.white_lost()) {
      o.white_survives = false;
      o.lost_at_turn = o.rounds;
      return o;
    }
    if (black.finished(s)) return o;
    auto bm = black.next(s);
    s.apply(bm);
    o.trace.push_back(render_move(Side::kBlack, bm));
    s.check_invariants();
  }
}

CountingCheck counting_check(const PawnGameState& s) {
  CountingCheck c;
  const std::uint64_t side = s.side();
  const std::uint64_t p = s.pawns().size();
  c.cells = side * side;
  c.disabled = s.disabled_count();
  c.disabled_bound = s.black_moves() * side;
  c.blocked = 2 * p * side - p * p;
  c.blocked_bound = s.white_moves() * 2 * side;
  return c;
}

bool counting_bound_holds(int k, int d) {
  if (k < 0 || d < 0 || 2 * k + 2 * d > 120) {
    throw Error(ErrorKind::kInvalidArgument, "counting bound needs 0 <= 2k + 2d <= 120");
  }
  using u128 = unsigned __int128;
  const u128 lhs = u128{6} << (2 * k + d);
  const u128 rhs = u128{1} << (2 * k + 2 * d);
  return lhs < rhs;
}

namespace {

bool black_search(PawnGameState s, std::vector<std::string>& trace, WorkBudget& budget) {
  budget.charge(1, "pawn game search");
  auto wm = white_greedy_strategy(s);
  if (!wm) {
    trace.push_back("W stuck");
    return true;
  }
  s.apply(*wm);
  trace.push_back(render_move(Side::kWhite, *wm));
  if (s.white_lost()) return true;
  if (s.black_exhausted()) {
    trace.pop_back();
    return false;
  }
  // Only moves that disable White's last pawn can change her play.
  const Cell last = s.pawns().back();
  std::vector<PawnMove> options{PawnMove::disable_column(last.col),
                                PawnMove::disable_cells(s.pawns())};
  for (std::uint32_t x = 0; x < s.side(); ++x) {
    if (x != last.col) options.push_back(PawnMove::disable_cells({last, {last.row, x}}));
  }
  for (const auto& bm : options) {
    PawnGameState next = s;
    next.apply(bm);
    trace.push_back(render_move(Side::kBlack, bm));
    if (black_search(next, trace, budget)) return true;
    trace.pop_back();
  }
  trace.pop_back();
  return false;
}

}  // namespace

std::optional<std::vector<std::string>> search_black_win(int k, int d, WorkBudget& budget) {
  std::vector<std::string> trace;
  if (black_search(PawnGameState(k, d), trace, budget)) return trace;
  return std::nullopt;
}

}  // namespace slk

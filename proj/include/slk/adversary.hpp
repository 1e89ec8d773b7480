#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "slk/bitgraph.hpp"
#include "slk/error.hpp"
#include "slk/machine.hpp"
#include "slk/rng.hpp"

namespace slk {

/// B: 2^{k-1} right nodes; S: every left node whose neighborhood lies in B
/// (at least 2^k of them). Shows g is not a (2^k, 2^{k-1}+1)-expander.
struct FoolingWitness {
  std::vector<BitString> B;
  std::vector<BitString> S;
};

enum class FoolingMode { kExhaustive, kRandomized };

struct FoolingOptions {
  FoolingMode mode = FoolingMode::kExhaustive;
  std::uint64_t trials = 1000;  ///< randomized only
  std::uint64_t seed = 0;       ///< randomized only
};

/// Requires right_len == k + c and k >= 1 (kShapeMismatch / kInvalidArgument).
/// Exhaustive mode scans B in lexicographic order of right-node values and
/// returns the first hit; it charges |L| work units per candidate B.
std::optional<FoolingWitness> fooling_search(const BitGraph& g, int k, int c,
                                             const FoolingOptions& options, WorkBudget& budget);

/// Re-checks a witness from scratch.
bool verify_fooling_witness(const BitGraph& g, int k, int c, const FoolingWitness& w);

struct DegreePressureReport {
  int ell = 0, k = 0, c = 0;
  double threshold = 0;  ///< min{2^{k-2}, (ell-k)/(c+2)}
  std::size_t max_degree = 0;
  bool precondition_met = false;  ///< max_degree <= threshold
  std::optional<FoolingWitness> witness;
  std::string summary() const;
};

/// Needs 2^ell left nodes of length ell and right_len == k + c
/// (kShapeMismatch otherwise). Runs exhaustive fooling_search only when the
/// degree precondition holds.
DegreePressureReport degree_pressure_report(const BitGraph& g, int k, int c, WorkBudget& budget);

// ---------------------------------------------------------------------------
// Pawn game

struct Cell {
  std::uint32_t row = 0;
  std::uint32_t col = 0;
  friend auto operator<=>(const Cell&, const Cell&) = default;
};

struct PawnMove {
  enum class Kind { kPass, kPlace, kColumn, kCells };
  Kind kind = Kind::kPass;
  Cell cell;                ///< kPlace
  std::uint32_t column = 0; ///< kColumn
  std::vector<Cell> cells;  ///< kCells, at most one per column

  static PawnMove pass() { return {}; }
  static PawnMove place(Cell c) { return {Kind::kPlace, c, 0, {}}; }
  static PawnMove disable_column(std::uint32_t x) { return {Kind::kColumn, {}, x, {}}; }
  static PawnMove disable_cells(std::vector<Cell> cells) {
    return {Kind::kCells, {}, 0, std::move(cells)};
  }
  bool is_pass() const { return kind == Kind::kPass; }
};

enum class Side { kWhite, kBlack };

/// Board of side 2^{k+d}; rows and columns are strings of length k+d read as
/// big-endian integers.
class PawnGameState {
 public:
  /// Throws kInvalidArgument unless k, d >= 0 and k + d <= 13.
  PawnGameState(int k, int d);

  int k() const { return k_; }
  int d() const { return d_; }
  std::uint32_t side() const { return side_; }
  Side to_move() const { return to_move_; }
  std::uint64_t black_moves() const { return black_moves_; }
  std::uint64_t white_moves() const { return white_moves_; }
  /// Black may make fewer than 2^{k+1} moves in total.
  std::uint64_t black_limit() const { return std::uint64_t{1} << (k_ + 1); }
  bool black_exhausted() const { return black_moves_ + 1 >= black_limit(); }

  const std::vector<Cell>& pawns() const { return pawns_; }
  bool disabled(Cell c) const;
  bool row_free(std::uint32_t r) const { return !row_used_[r]; }
  bool col_free(std::uint32_t x) const { return !col_used_[x]; }
  bool column_disabled(std::uint32_t x) const { return col_off_[x]; }
  std::uint64_t disabled_count() const { return disabled_count_; }

  /// Applies a move for the side to move; throws kIllegalMove naming the side.
  void apply(const PawnMove& m);
  /// All pawns disabled (and at least one placed).
  bool white_lost() const;
  /// Checks the structural invariants; throws kIllegalMove on breach.
  void check_invariants() const;

 private:
  void apply_white(const PawnMove& m);
  void apply_black(const PawnMove& m);
  void disable(Cell c);

  int k_, d_;
  std::uint32_t side_;
  Side to_move_ = Side::kWhite;
  std::uint64_t black_moves_ = 0, white_moves_ = 0;
  std::vector<Cell> pawns_;
  std::vector<bool> row_used_, col_used_, col_off_, cell_off_;
  std::uint64_t disabled_count_ = 0;
};

/// Pass while the last pawn is enabled, else the least enabled cell (row,
/// then column) with a pawn-free row and column; nullopt when stuck.
std::optional<PawnMove> white_greedy_strategy(const PawnGameState& state);

class BlackStrategy {
 public:
  virtual ~BlackStrategy() = default;
  virtual PawnMove next(const PawnGameState& state) = 0;
  /// No further moves will ever be made.
  virtual bool finished(const PawnGameState& state) const { return state.black_exhausted(); }
  virtual std::string name() const = 0;
};

/// Always moves: a random column or one random cell in a random half of the
/// columns (biased toward White's last pawn).
std::unique_ptr<BlackStrategy> black_random_strategy(std::uint64_t seed);
/// Disables the column of White's last pawn, else the lowest live column.
std::unique_ptr<BlackStrategy> black_flood_strategy();
/// Disables every pawn cell in one move.
std::unique_ptr<BlackStrategy> black_sniper_strategy();

/// Enumeration-driven Black: programs q with |q| < k in shortlex order.
/// A new output of length k+d on the empty condition disables that column;
/// a q halting on every length-(k+d) condition x disables the cells (p, x)
/// with eval(q, x) = "0" p, |p| = k+d. One event per turn, passes after.
std::unique_ptr<BlackStrategy> black_blind_strategy(const ToyMachine& machine,
                                                    std::uint64_t budget, int k, int d);

/// Pre-computed event list of the blind strategy (for inspection).
std::vector<PawnMove> blind_events(const ToyMachine& machine, std::uint64_t budget, int k, int d);

struct PawnOutcome {
  bool white_survives = true;
  std::optional<std::uint64_t> lost_at_turn;  ///< 1-based round
  bool stuck = false;                         ///< white had no legal cell
  std::uint64_t rounds = 0;
  std::vector<std::string> trace;
  PawnGameState final_state;
};

using WhiteStrategy = std::function<std::optional<PawnMove>(const PawnGameState&)>;

std::string render_move(Side side, const PawnMove& m);

/// White then Black each round. Ends when White loses, or once Black is
/// finished and White's last pawn is enabled after her turn.
PawnOutcome pawn_game_run(int k, int d, const WhiteStrategy& white, BlackStrategy& black);

/// disabled <= black_moves * side, blocked <= white_moves * 2 * side, and
/// (for the final bound) their sum compared against side^2.
struct CountingCheck {
  std::uint64_t disabled = 0, disabled_bound = 0;
  std::uint64_t blocked = 0, blocked_bound = 0;
  std::uint64_t cells = 0;
  bool holds() const { return disabled <= disabled_bound && blocked <= blocked_bound; }
  bool below_board() const { return disabled_bound + blocked_bound < cells; }
};
CountingCheck counting_check(const PawnGameState& state);

/// 6 * 2^{2k} * 2^d < 2^{2k+2d}.
bool counting_bound_holds(int k, int d);

/// Depth-first search over Black's replies (column moves and single-cell
/// moves) against the greedy White; returns a losing trace if one exists.
std::optional<std::vector<std::string>> search_black_win(int k, int d, WorkBudget& budget);

}  // namespace slk

#include <algorithm>

#include "slk/error.hpp"
#include "slk/matching.hpp"

namespace slk {

std::string OnlineGame::Position::key() const {
  std::string k;
  k.reserve(owner.size() + requested.size());
  for (int o : owner) k.push_back(static_cast<char>(o + 1));
  k.append(requested.begin(), requested.end());
  return k;
}

OnlineGame::OnlineGame(const BitGraph& g, int overhead, std::map<int, int> class_budgets)
    : g_(&g), overhead_(overhead) {
  if (g.left_count() > 100) throw Error(ErrorKind::kInvalidArgument, "game graph too large");
  for (const auto& [k, b] : class_budgets) {
    if (k < 0 || b < 0) throw Error(ErrorKind::kInvalidArgument, "negative class or budget");
    if (k < 31 && b > (1 << k)) {
      throw Error(ErrorKind::kInvalidArgument, "class " + std::to_string(k) +
                                                   " budget exceeds 2^k");
    }
    if (b == 0) continue;
    classes_.push_back(k);
    budgets_.push_back(b);
  }
  for (std::size_t i = 0; i < g.left_count(); ++i) {
    for (const auto& p : g.neighbors_at(i)) {
      if (right_index_.emplace(p, static_cast<int>(right_.size())).second) right_.push_back(p);
    }
  }
}

OnlineGame::Position OnlineGame::initial() const {
  return Position{std::vector<int>(right_.size(), -1),
                  std::vector<char>(g_->left_count() * classes_.size(), 0)};
}

std::size_t OnlineGame::request_index(const MatchRequest& r) const {
  auto li = g_->index_of(r.x);
  auto ci = std::find(classes_.begin(), classes_.end(), r.k);
  if (!li || ci == classes_.end()) {
    throw Error(ErrorKind::kInvalidArgument, "request outside the game");
  }
  return *li * classes_.size() + static_cast<std::size_t>(ci - classes_.begin());
}

std::vector<MatchRequest> OnlineGame::legal_requests(const Position& pos) const {
  std::vector<int> used(classes_.size(), 0);
  for (std::size_t i = 0; i < pos.requested.size(); ++i) used[i % classes_.size()] += pos.requested[i];
  std::vector<MatchRequest> out;
  for (std::size_t li = 0; li < g_->left_count(); ++li) {
    for (std::size_t ci = 0; ci < classes_.size(); ++ci) {
      if (pos.requested[li * classes_.size() + ci] || used[ci] >= budgets_[ci]) continue;
      out.push_back(MatchRequest{g_->left_nodes()[li], classes_[ci]});
    }
  }
  return out;
}

std::vector<BitString> OnlineGame::legal_answers(const Position& pos, const MatchRequest& r) const {
  const auto li = static_cast<int>(*g_->index_of(r.x));
  std::vector<BitString> out;
  for (const auto& p : g_->neighbors(r.x)) {
    if (static_cast<long>(p.size()) > static_cast<long>(r.k) + overhead_) continue;
    const int owner = pos.owner[static_cast<std::size_t>(right_index_.at(p))];
    if (owner == -1 || owner == li) out.push_back(p);
  }
  return out;
}

OnlineGame::Position OnlineGame::play(const Position& pos, const MatchRequest& r,
                                      const BitString& answer) const {
  Position next = pos;
  const std::size_t ri = request_index(r);
  if (next.requested[ri]) throw Error(ErrorKind::kIllegalMove, "request repeated");
  next.requested[ri] = 1;
  auto it = right_index_.find(answer);
  if (it == right_index_.end()) throw Error(ErrorKind::kIllegalMove, "answer is not a right node");
  const int li = static_cast<int>(*g_->index_of(r.x));
  int& owner = next.owner[static_cast<std::size_t>(it->second)];
  if (owner != -1 && owner != li) throw Error(ErrorKind::kIllegalMove, "answer already taken");
  owner = li;
  return next;
}

struct GameDecision::Table {
  struct Entry {
    bool requester_wins = false;
    int winning_request = -1;               // index into legal_requests order
    std::vector<int> answers;               // per request index: right node index or -1
  };
  std::unordered_map<std::string, Entry> entries;
};

struct GameSolver {
  const OnlineGame& game;
  WorkBudget& budget;
  GameDecision::Table table;

  bool requester_wins(const OnlineGame::Position& pos) {
    const std::string key = pos.key();
    if (auto it = table.entries.find(key); it != table.entries.end()) {
      return it->second.requester_wins;
    }
    budget.charge(1, "on-line matching game");
    GameDecision::Table::Entry entry;
    const std::size_t slots = game.g_->left_count() * game.classes_.size();
    entry.answers.assign(slots, -1);
    const auto requests = game.legal_requests(pos);
    for (std::size_t i = 0; i < requests.size() && !entry.requester_wins; ++i) {
      const auto& r = requests[i];
      bool matcher_survives = false;
      for (const auto& p : game.legal_answers(pos, r)) {
        if (!requester_wins(game.play(pos, r, p))) {
          entry.answers[game.request_index(r)] = game.right_node_index(p);
          matcher_survives = true;
          break;
        }
      }
      if (!matcher_survives) {
        entry.requester_wins = true;
        entry.winning_request = static_cast<int>(game.request_index(r));
      }
    }
    const bool result = entry.requester_wins;
    table.entries.emplace(key, std::move(entry));
    return result;
  }
};

namespace {

std::string show(const MatchRequest& r) { return r.x.render() + " " + std::to_string(r.k); }

}  // namespace

std::optional<BitString> GameDecision::matcher_answer(const OnlineGame::Position& pos,
                                                      const MatchRequest& r) const {
  auto it = table->entries.find(pos.key());
  if (it == table->entries.end() || it->second.requester_wins) return std::nullopt;
  const int a = it->second.answers[game->request_index(r)];
  if (a < 0) return std::nullopt;
  return game->right_node(a);
}

std::optional<MatchRequest> GameDecision::requester_move(const OnlineGame::Position& pos) const {
  auto it = table->entries.find(pos.key());
  if (it == table->entries.end() || !it->second.requester_wins) return std::nullopt;
  for (const auto& r : game->legal_requests(pos)) {
    if (static_cast<int>(game->request_index(r)) == it->second.winning_request) return r;
  }
  return std::nullopt;
}

GameDecision decide_online_matching(const BitGraph& g, int overhead,
                                    const std::map<int, int>& class_budgets, WorkBudget& budget) {
  auto graph = std::make_shared<const BitGraph>(g);
  auto game = std::make_shared<const OnlineGame>(*graph, overhead, class_budgets);
  GameSolver solver{*game, budget, {}};
  const auto start = game->initial();
  const bool requester = solver.requester_wins(start);

  GameDecision d;
  d.winner = requester ? GameDecision::Winner::kRequester : GameDecision::Winner::kMatcher;
  d.positions = solver.table.entries.size();
  d.table = std::make_shared<const GameDecision::Table>(std::move(solver.table));
  // Keep the graph alive alongside the game that points into it.
  struct Holder {
    std::shared_ptr<const BitGraph> g;
    std::shared_ptr<const OnlineGame> game;
  };
  auto holder = std::make_shared<Holder>(Holder{graph, game});
  d.game = std::shared_ptr<const OnlineGame>(holder, holder->game.get());

  // Principal line: the winner follows its stored strategy; the loser
  // plays its first legal option.
  auto pos = start;
  for (;;) {
    std::optional<MatchRequest> r;
    if (requester) {
      r = d.requester_move(pos);
    } else {
      auto legal = game->legal_requests(pos);
      if (!legal.empty()) r = legal.front();
    }
    if (!r) {
      d.trace.push_back("R stop");
      break;
    }
    d.trace.push_back("R " + show(*r));
    std::optional<BitString> p;
    if (requester) {
      auto answers = game->legal_answers(pos, *r);
      if (!answers.empty()) p = answers.front();
    } else {
      p = d.matcher_answer(pos, *r);
    }
    if (!p) {
      d.trace.push_back("M stuck");
      break;
    }
    d.trace.push_back("M " + p->render());
    pos = game->play(pos, *r, *p);
  }
  return d;
}

}  // namespace slk

#include "slk/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "slk/adversary.hpp"
#include "slk/approximator.hpp"
#include "slk/bitgraph.hpp"
#include "slk/error.hpp"
#include "slk/expanders.hpp"
#include "slk/hashsplit.hpp"
#include "slk/machine.hpp"
#include "slk/matching.hpp"
#include "slk/rng.hpp"

namespace slk::cli {

using nlohmann::json;

namespace {

// Thrown for flag combinations CLI11 cannot express.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void emit_json(std::ostream& out, const json& j) { out << "#json " << j.dump() << '\n'; }

std::string join(const std::vector<BitString>& xs, char sep = ',') {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) s += sep;
    s += xs[i].render();
  }
  return s;
}

json renders(const std::vector<BitString>& xs) {
  json a = json::array();
  for (const auto& x : xs) a.push_back(x.render());
  return a;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::kInvalidArgument, "cannot write " + path);
  f << text;
}

std::vector<BitString> read_set_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error(ErrorKind::kInvalidArgument, "cannot read " + path);
  std::vector<BitString> out;
  std::string line;
  while (std::getline(f, line)) {
    std::istringstream ls(line);
    std::string tok;
    if (ls >> tok && tok[0] != '#') out.push_back(BitString::parse(tok));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Option bags, one per command.

struct GenExpanderOpts {
  int n = -1, k = -1;
  std::uint64_t seed = 0;
  int degree = 0, right_len = 0;
  std::string out, family_dir;
};

struct GenVarlenOpts {
  int k = 0, max_len = 0;
  std::uint64_t seed = 0;
  std::string out;
};

struct VerifyOpts {
  std::string in;
  bool exact = false, all_t = false, sampled = false;
  std::size_t K = 0, Kp = 0;
  std::uint64_t trials = 1000, seed = 0;
};

struct AmplifyOpts {
  std::string in, out;
  std::uint64_t copies = 0, K = 1;
  double alpha = 1.0, delta = 0.5;
  bool verified = false;
};

struct MatchOpts {
  std::string graphs;
  int n = -1;
  std::uint64_t seed = 0;
  bool audit = false;
};

struct DecideOpts {
  std::string in;
  int overhead = 0;
  std::vector<std::string> classes;
};

struct ApproxOpts {
  std::string machine = "default";
  std::uint64_t budget = 10'000;
  int n = 6;
  int max_prog_len = -1;
  std::string graph_dir, out;
  std::uint64_t seed = 0;
  std::string x, u, v, cond = "-";
  int cap = 6;
  int max_len = 12;
};

struct PawnOpts {
  int k = 0, d = 3;
  std::string black = "random";
  std::uint64_t seed = 0;
  std::string trace;
  std::uint64_t budget = 10'000;
};

struct FoolingOpts {
  std::string graph, mode = "exhaustive";
  int k = 1, c = 0;
  std::uint64_t trials = 1000, seed = 0;
  bool pressure = false;
};

struct SplitOpts {
  int n = 8;
  std::size_t count = 16;
  std::uint64_t seed = 0;
  std::string base, out, graph, set, x;
  double eps = 0.5;
  int k = 0;
};

// ---------------------------------------------------------------------------

int run_gen_expander(const GenExpanderOpts& o, std::ostream& out, WorkBudget& budget) {
  if (!o.family_dir.empty()) {
    if (o.n < 0) throw UsageError("--family-dir needs --n");
    GraphFamily fam;
    json members = json::array();
    const int top = std::max(1, o.n - 1);
    for (int k = 0; o.n > 0 && k < top; ++k) {
      const std::uint64_t seed = o.seed + 1000003ull * static_cast<std::uint64_t>(o.n) +
                                 7919ull * static_cast<std::uint64_t>(k);
      auto found = find_verified_expander(o.n, k, seed, 32, budget.limit());
      out << "MEMBER n=" << o.n << " k=" << k << " seed=" << found.seed
          << " verified=" << (found.verified ? "yes" : "no") << '\n';
      members.push_back({{"n", o.n}, {"k", k}, {"seed", found.seed}, {"verified", found.verified}});
      fam.members.emplace(std::pair{o.n, k}, std::move(found.graph));
    }
    std::filesystem::create_directories(o.family_dir);
    fam.save_dir(o.family_dir);
    emit_json(out, {{"command", "gen-expander"}, {"members", members}});
    return kExitOk;
  }
  if (o.n < 0 || o.k < 0) throw UsageError("gen-expander needs --n and --k (or --family-dir)");
  auto spec = ExpanderSpec::standard(o.n, o.k, o.seed);
  if (o.degree > 0) spec.degree = o.degree;
  if (o.right_len > 0) spec.right_len = o.right_len;
  auto g = gen_random_expander(spec);
  if (o.out.empty()) {
    out << write_graph(g);
    return kExitOk;
  }
  write_graph_file(g, o.out);
  out << "GRAPH n=" << spec.n << " k=" << spec.k << " right_len=" << spec.right_len
      << " degree=" << spec.degree << " seed=" << spec.seed << " edges=" << g.edge_count() << '\n';
  emit_json(out, {{"command", "gen-expander"}, {"n", spec.n}, {"k", spec.k},
                  {"right_len", spec.right_len}, {"degree", spec.degree}, {"seed", spec.seed},
                  {"edges", g.edge_count()}});
  return kExitOk;
}

int run_gen_varlen(const GenVarlenOpts& o, std::ostream& out) {
  auto g = gen_variable_length_expander(o.k, o.max_len, o.seed);
  if (o.out.empty()) {
    out << write_graph(g);
    return kExitOk;
  }
  write_graph_file(g, o.out);
  out << "GRAPH k=" << o.k << " max_len=" << o.max_len << " right_len=" << g.right_len()
      << " left=" << g.left_count() << " edges=" << g.edge_count() << '\n';
  emit_json(out, {{"command", "gen-varlen"}, {"k", o.k}, {"max_len", o.max_len},
                  {"right_len", g.right_len()}, {"left", g.left_count()},
                  {"edges", g.edge_count()}});
  return kExitOk;
}

int run_verify(const VerifyOpts& o, std::ostream& out, WorkBudget& budget) {
  if (o.exact + o.all_t + o.sampled != 1) {
    throw UsageError("verify needs exactly one of --exact, --all-t, --sampled");
  }
  if (o.K == 0) throw UsageError("verify needs --K >= 1");
  const auto g = read_graph_file(o.in);
  Verdict v;
  std::string mode;
  std::size_t kp = o.Kp ? o.Kp : o.K;
  if (o.exact) {
    mode = "exact";
    v = verify_expansion_exact(g, o.K, kp, budget);
  } else if (o.all_t) {
    mode = "all-t";
    kp = o.K;
    v = verify_expansion_all_t(g, o.K, budget);
  } else {
    mode = "sampled";
    v = verify_expansion_sampled(g, o.K, kp, o.trials, o.seed);
  }
  out << v.render() << '\n';
  json j{{"command", "verify"}, {"mode", mode}, {"K", o.K}, {"K_prime", kp},
         {"verdict", v.passed() ? "PASS" : v.failed() ? "FAIL" : "UNKNOWN"}};
  if (v.failed()) j["witness"] = renders(v.witness);
  if (o.sampled) j["trials"] = v.trials;
  emit_json(out, j);
  return v.failed() ? kExitNegative : kExitOk;
}

int run_amplify(const AmplifyOpts& o, std::ostream& out) {
  const auto base = read_graph_file(o.in);
  DisperserSpec spec;
  spec.K = o.K;
  spec.delta = o.delta;
  spec.alpha = o.alpha;
  spec.degree = std::max<std::uint64_t>(1, base.max_degree());
  spec.n = base.left_count() ? static_cast<int>(base.left_nodes().front().size()) : 0;
  spec.copies = o.copies ? o.copies : DisperserSpec::copies_for(spec.n, o.alpha, spec.degree);
  auto amp = amplify(base, spec, o.verified);
  if (!o.out.empty()) write_graph_file(amp.graph, o.out);
  out << "AMPLIFIED copies=" << amp.copies << " tag_width=" << amp.tag_width
      << " right_len=" << amp.graph.right_len() << " max_degree=" << amp.graph.max_degree()
      << " base_verified=" << (amp.base_verified ? "yes" : "no") << '\n';
  emit_json(out, {{"command", "amplify"}, {"copies", amp.copies}, {"tag_width", amp.tag_width},
                  {"right_len", amp.graph.right_len()},
                  {"max_degree", amp.graph.max_degree()}, {"base_verified", amp.base_verified}});
  if (o.out.empty()) out << write_graph(amp.graph);
  return kExitOk;
}

std::unique_ptr<OnlineMatcher> matcher_from_family_dir(const std::string& dir) {
  const auto fam = GraphFamily::load_dir(dir);
  std::set<int> lengths;
  for (const auto& [key, g] : fam.members) lengths.insert(key.first);
  if (lengths.empty()) throw Error(ErrorKind::kInvalidArgument, "no graphs in " + dir);
  if (lengths.size() == 1) {
    return std::make_unique<CascadeMatcher>(cascade_from_family(fam, *lengths.begin()));
  }
  std::map<std::size_t, CascadeMatcher> by_length;
  for (int n : lengths) by_length.emplace(static_cast<std::size_t>(n), cascade_from_family(fam, n));
  return std::make_unique<MultiLengthMatcher>(std::move(by_length));
}

int run_match(const MatchOpts& o, std::istream& in, std::ostream& out) {
  std::unique_ptr<OnlineMatcher> m;
  if (!o.graphs.empty()) {
    m = matcher_from_family_dir(o.graphs);
  } else if (o.n >= 0) {
    m = std::make_unique<CascadeMatcher>(build_random_cascade(o.n, {o.seed}));
  } else {
    throw UsageError("match needs --graphs or --n");
  }
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string xs;
    if (!(ls >> xs) || xs[0] == '#') continue;
    int k = -1;
    std::string extra;
    if (!(ls >> k) || k < 0 || (ls >> extra)) {
      throw ParseError(lineno, "expected '<x-bits> <k>'");
    }
    const auto x = BitString::parse(xs);
    if (!m->covers(x)) {
      throw Error(ErrorKind::kUnknownLeftNode, "line " + std::to_string(lineno) + ": " +
                                                   x.render() + " is not a left node");
    }
    const auto e = m->request({x, k});
    if (e.status == MatchStatus::kMatched) {
      out << "MATCH " << x.render() << ' ' << k << ' ' << e.hash->render() << '\n';
    } else if (e.status == MatchStatus::kGuaranteeBreach) {
      out << "UNMATCHED " << x.render() << ' ' << k << '\n';
    } else {
      out << "BUDGET-VIOLATION " << x.render() << ' ' << k << '\n';
    }
  }
  const auto& t = m->transcript();
  std::size_t breaches = 0, violations = 0;
  for (const auto& e : t) {
    breaches += e.status == MatchStatus::kGuaranteeBreach;
    violations += e.status == MatchStatus::kBudgetViolation || e.status == MatchStatus::kRejected;
  }
  json j{{"command", "match"}, {"requests", t.size()}, {"budget_violations", violations},
         {"unmatched", breaches}};
  int rc = breaches ? kExitNegative : kExitOk;
  if (o.audit) {
    const auto* matcher = m.get();
    const auto report =
        overhead_audit(t, [matcher](std::size_t n) { return long{matcher->overhead(n)}; });
    out << "AUDIT\n";
    out << "requests " << t.size() << '\n';
    out << "unmatched " << report.unmatched << '\n';
    out << "injective " << (report.injective ? "yes" : "no");
    if (report.collision) {
      const auto& [x1, x2, p] = *report.collision;
      out << " collision " << x1.render() << ' ' << x2.render() << ' ' << p.render();
    }
    out << '\n';
    json over = json::object();
    for (const auto& [n, c] : report.max_overhead) {
      out << "max_overhead n=" << n << " observed=" << c << " bound=" << m->overhead(n) << '\n';
      over[std::to_string(n)] = {{"observed", c}, {"bound", m->overhead(n)}};
    }
    out << "length_ok " << (report.length_ok ? "yes" : "no") << '\n';
    out << "result " << (report.passed() ? "PASS" : "FAIL") << '\n';
    out << "END\n";
    j["audit"] = {{"passed", report.passed()}, {"injective", report.injective},
                  {"length_ok", report.length_ok}, {"max_overhead", over}};
    if (!report.passed()) rc = kExitNegative;
  }
  emit_json(out, j);
  return rc;
}

int run_decide(const DecideOpts& o, std::ostream& out, WorkBudget& budget) {
  const auto g = read_graph_file(o.in);
  std::map<int, int> classes;
  for (const auto& c : o.classes) {
    const auto colon = c.find(':');
    if (colon == std::string::npos) throw UsageError("--class expects k:budget, got " + c);
    try {
      classes[std::stoi(c.substr(0, colon))] = std::stoi(c.substr(colon + 1));
    } catch (const std::logic_error&) {
      throw UsageError("--class expects k:budget, got " + c);
    }
  }
  if (classes.empty()) throw UsageError("decide-match needs at least one --class k:budget");
  const auto d = decide_online_matching(g, o.overhead, classes, budget);
  const bool matcher = d.winner == GameDecision::Winner::kMatcher;
  out << "WINNER " << (matcher ? "matcher" : "requester") << '\n';
  out << "POSITIONS " << d.positions << '\n';
  for (const auto& line : d.trace) out << line << '\n';
  emit_json(out, {{"command", "decide-match"}, {"winner", matcher ? "matcher" : "requester"},
                  {"positions", d.positions}, {"trace", d.trace}});
  return matcher ? kExitOk : kExitNegative;
}

// --- approx ---------------------------------------------------------------

struct ApproxBuild {
  std::unique_ptr<ToyMachine> machine;
  Approximator approx;
  int max_prog_len;
};

ApproxBuild build_from(const ApproxOpts& o) {
  auto machine = make_machine(o.machine);
  const int max_prog_len = o.max_prog_len >= 0 ? o.max_prog_len : o.n + 1;
  std::unique_ptr<OnlineMatcher> m;
  if (!o.graph_dir.empty()) {
    m = matcher_from_family_dir(o.graph_dir);
  } else {
    m = std::make_unique<MultiLengthMatcher>(build_random_universe(o.n, {o.seed}));
  }
  auto a = build_approximator(*machine, std::move(m), o.budget, max_prog_len);
  return {std::move(machine), std::move(a), max_prog_len};
}

int run_approx_build(const ApproxOpts& o, std::ostream& out) {
  auto b = build_from(o);
  std::vector<std::pair<BitString, BitString>> rows(b.approx.decoder().begin(),
                                                    b.approx.decoder().end());
  std::sort(rows.begin(), rows.end());
  std::ostringstream table;
  table << "approx-table v1 machine=" << b.machine->name() << " budget=" << o.budget
        << " max_prog_len=" << b.max_prog_len << '\n';
  for (const auto& [p, x] : rows) table << "0" << p.render() << ' ' << x.render() << '\n';
  if (!o.out.empty()) write_text(o.out, table.str());
  out << "APPROX machine=" << b.machine->name() << " budget=" << o.budget
      << " max_prog_len=" << b.max_prog_len << " programs=" << b.approx.table_size()
      << " requests=" << b.approx.issued().size() << " decoder=" << rows.size()
      << " passthrough_width=" << b.approx.passthrough_width() << '\n';
  if (o.out.empty()) out << table.str();
  emit_json(out, {{"command", "approx build"}, {"machine", b.machine->name()},
                  {"budget", o.budget}, {"max_prog_len", b.max_prog_len},
                  {"programs", b.approx.table_size()}, {"requests", b.approx.issued().size()},
                  {"decoder", rows.size()}, {"passthrough_width", b.approx.passthrough_width()}});
  return kExitOk;
}

int run_approx_list(const ApproxOpts& o, std::ostream& out) {
  auto b = build_from(o);
  const auto x = BitString::parse(o.x);
  auto l = b.approx.list(x);
  find_witness(l, b.approx);
  const auto c = complexity(*b.machine, x, o.budget, b.max_prog_len);
  out << "LIST x=" << x.render() << " size=" << l.programs.size() << '\n';
  for (std::size_t j = 0; j < l.programs.size(); ++j) {
    out << (j + 1) << ' ' << l.programs[j].render() << '\n';
  }
  json j{{"command", "approx list"}, {"x", x.render()}, {"size", l.programs.size()},
         {"programs", renders(l.programs)}};
  if (l.witness) {
    const auto& w = l.programs[*l.witness];
    out << "WITNESS index=" << (*l.witness + 1) << " program=" << w.render()
        << " length=" << w.size() << '\n';
    j["witness"] = {{"index", *l.witness + 1}, {"program", w.render()}, {"length", w.size()}};
  } else {
    out << "WITNESS none\n";
  }
  if (c) j["complexity"] = *c;
  emit_json(out, j);
  return kExitOk;
}

int run_approx_complexity(const ApproxOpts& o, std::ostream& out) {
  auto machine = make_machine(o.machine);
  const auto x = BitString::parse(o.x);
  const auto c = complexity(*machine, x, o.budget, o.max_len);
  out << "COMPLEXITY x=" << x.render() << " value=" << (c ? std::to_string(*c) : "inf") << '\n';
  emit_json(out, {{"command", "approx complexity"}, {"x", x.render()},
                  {"value", c ? json(*c) : json(nullptr)}, {"max_len", o.max_len}});
  return kExitOk;
}

int run_approx_ct(const ApproxOpts& o, std::ostream& out) {
  auto machine = make_machine(o.machine);
  const auto u = BitString::parse(o.u);
  const auto v = BitString::parse(o.v);
  const auto c = ct_complexity(*machine, u, v, o.budget, o.cap, o.max_len);
  out << "CT u=" << u.render() << " v=" << v.render() << " cap=" << o.cap
      << " value=" << (c ? std::to_string(*c) : "inf") << '\n';
  emit_json(out, {{"command", "approx ct"}, {"u", u.render()}, {"v", v.render()}, {"cap", o.cap},
                  {"value", c ? json(*c) : json(nullptr)}});
  return kExitOk;
}

int run_approx_compress(const ApproxOpts& o, std::ostream& out) {
  auto machine = make_machine(o.machine);
  const auto a = BitString::parse(o.x);
  const auto b = BitString::parse(o.cond);
  const int n = static_cast<int>(a.size());
  CascadeOptions copts{o.seed};
  copts.implicit = n > 8;
  std::map<std::size_t, CascadeMatcher> one;
  one.emplace(a.size(), build_random_cascade(n, copts));
  MultiLengthMatcher m(std::move(one));
  auto fresh = m.fresh();
  const int max_prog_len = o.max_prog_len >= 0 ? o.max_prog_len : o.max_len;
  const auto r = conditional_compress(*machine, a, b, m, o.budget, max_prog_len);
  const auto back = conditional_decompress(*machine, r.hash, b, *fresh, o.budget, max_prog_len);
  out << "COMPRESS a=" << a.render() << " b=" << b.render() << " hash=" << r.hash.render()
      << " hash_length=" << r.hash.size() << " program=" << r.program.render()
      << " program_length=" << r.program.size() << '\n';
  out << "RECOVERED " << back.render() << ' ' << (back == a ? "ok" : "mismatch") << '\n';
  emit_json(out, {{"command", "approx compress"}, {"a", a.render()}, {"b", b.render()},
                  {"hash", r.hash.render()}, {"program", r.program.render()},
                  {"overhead", m.overhead(a.size())}, {"recovered", back == a}});
  return back == a ? kExitOk : kExitNegative;
}

// --- game / lower / split --------------------------------------------------

int run_pawn(const PawnOpts& o, std::ostream& out) {
  std::unique_ptr<ToyMachine> machine;
  std::unique_ptr<BlackStrategy> black;
  if (o.black == "random") {
    black = black_random_strategy(o.seed);
  } else if (o.black == "flood") {
    black = black_flood_strategy();
  } else if (o.black == "blind") {
    machine = make_machine("default");
    black = black_blind_strategy(*machine, o.budget, o.k, o.d);
  } else if (o.black == "sniper") {
    black = black_sniper_strategy();
  } else {
    throw UsageError("--black must be random, flood, blind or sniper");
  }
  const auto r = pawn_game_run(o.k, o.d, white_greedy_strategy, *black);
  const auto& s = r.final_state;
  const auto cc = counting_check(s);
  if (!o.trace.empty()) {
    std::string text;
    for (const auto& line : r.trace) text += line + '\n';
    if (o.trace == "-") {
      out << text;
    } else {
      write_text(o.trace, text);
    }
  }
  out << "GAME k=" << o.k << " d=" << o.d << " black=" << black->name() << " seed=" << o.seed
      << " result=" << (r.white_survives ? "white-survives" : "white-loses");
  if (r.lost_at_turn) out << " turn=" << *r.lost_at_turn;
  out << " rounds=" << r.rounds << " black_moves=" << s.black_moves()
      << " white_moves=" << s.white_moves() << '\n';
  out << "COUNT disabled=" << cc.disabled << " bound=" << cc.disabled_bound
      << " blocked=" << cc.blocked << " bound=" << cc.blocked_bound << " cells=" << cc.cells
      << '\n';
  json j{{"command", "game pawn"}, {"k", o.k}, {"d", o.d}, {"black", black->name()},
         {"seed", o.seed}, {"white_survives", r.white_survives}, {"rounds", r.rounds},
         {"black_moves", s.black_moves()}, {"white_moves", s.white_moves()},
         {"counting_holds", cc.holds()}};
  if (r.lost_at_turn) j["lost_at_turn"] = *r.lost_at_turn;
  emit_json(out, j);
  return r.white_survives ? kExitOk : kExitNegative;
}

int run_fooling(const FoolingOpts& o, std::ostream& out, WorkBudget& budget) {
  const auto g = read_graph_file(o.graph);
  if (o.pressure) {
    const auto r = degree_pressure_report(g, o.k, o.c, budget);
    out << r.summary();
    json j{{"command", "lower fooling"}, {"ell", r.ell}, {"k", r.k}, {"c", r.c},
           {"threshold", r.threshold}, {"max_degree", r.max_degree},
           {"precondition_met", r.precondition_met}, {"witness_found", r.witness.has_value()}};
    emit_json(out, j);
    return r.witness ? kExitNegative : kExitOk;
  }
  FoolingOptions fo;
  if (o.mode == "exhaustive") {
    fo.mode = FoolingMode::kExhaustive;
  } else if (o.mode == "randomized") {
    fo.mode = FoolingMode::kRandomized;
  } else {
    throw UsageError("--mode must be exhaustive or randomized");
  }
  fo.trials = o.trials;
  fo.seed = o.seed;
  const auto w = fooling_search(g, o.k, o.c, fo, budget);
  json j{{"command", "lower fooling"}, {"mode", o.mode}, {"k", o.k}, {"c", o.c}};
  if (w) {
    const bool ok = verify_fooling_witness(g, o.k, o.c, *w);
    out << "FAIL witness B=" << join(w->B) << " S=" << join(w->S) << '\n';
    out << "VERIFIED " << (ok ? "yes" : "no") << '\n';
    j["witness"] = {{"B", renders(w->B)}, {"S", renders(w->S)}, {"verified", ok}};
    emit_json(out, j);
    return kExitNegative;
  }
  out << "NONE-FOUND" << (fo.mode == FoolingMode::kRandomized ? " trials=" + std::to_string(o.trials) : "")
      << '\n';
  j["witness"] = nullptr;
  emit_json(out, j);
  return kExitOk;
}

int run_split_primes(const SplitOpts& o, std::ostream& out) {
  if (o.n < 1 || o.n > 62) throw UsageError("--n must be in 1..62");
  const std::uint64_t universe = std::uint64_t{1} << o.n;
  if (o.count == 0 || o.count > universe) throw UsageError("--count must be in 1..2^n");
  SplitMix64 rng(o.seed);
  std::set<BitString> picked;
  std::vector<BitString> W;
  while (W.size() < o.count) {
    auto x = BitString::from_uint(rng.below(universe), o.n);
    if (picked.insert(x).second) W.push_back(x);
  }
  const std::uint64_t cap = 4 * o.count * static_cast<std::uint64_t>(o.n) * o.n;
  std::uint64_t worst = 0;
  json rows = json::array();
  for (const auto& x : W) {
    const auto q = find_splitting_prime(x, W, cap);
    worst = std::max(worst, q);
    out << "PRIME x=" << x.render() << " q=" << q << '\n';
    rows.push_back({{"x", x.render()}, {"q", q}});
  }
  out << "MAX q=" << worst << " cap=" << cap << '\n';
  emit_json(out, {{"command", "split primes"}, {"n", o.n}, {"count", o.count}, {"seed", o.seed},
                  {"cap", cap}, {"max_q", worst}, {"primes", rows}});
  return kExitOk;
}

int left_length(const BitGraph& g) {
  return g.left_count() ? static_cast<int>(g.left_nodes().front().size()) : 0;
}

int run_split_build(const SplitOpts& o, std::ostream& out) {
  const auto base = read_graph_file(o.base);
  const auto sg = build_split_graph(base, left_length(base), o.k, o.eps);
  if (!o.out.empty()) write_graph_file(sg.graph, o.out);
  out << "SPLIT n=" << sg.n << " d=" << sg.d << " bound=" << sg.bound
      << " field_width=" << sg.field_width << " right_len=" << sg.graph.right_len()
      << " max_degree=" << sg.graph.max_degree() << " edges=" << sg.graph.edge_count() << '\n';
  emit_json(out, {{"command", "split build"}, {"n", sg.n}, {"d", sg.d}, {"bound", sg.bound},
                  {"field_width", sg.field_width}, {"right_len", sg.graph.right_len()},
                  {"max_degree", sg.graph.max_degree()}, {"edges", sg.graph.edge_count()}});
  if (o.out.empty()) out << write_graph(sg.graph);
  return kExitOk;
}

int run_split_certify(const SplitOpts& o, std::ostream& out) {
  const auto base = read_graph_file(o.graph);
  const auto sg = build_split_graph(base, left_length(base), o.k, o.eps);
  const auto S = read_set_file(o.set);
  const auto x = BitString::parse(o.x);
  const auto cert = certify_unique(sg, S, x);
  json j{{"command", "split certify"}, {"x", x.render()}, {"eps", o.eps}};
  if (!cert) {
    out << "NO-CERT x=" << x.render() << '\n';
    j["certificate"] = nullptr;
    emit_json(out, j);
    return kExitNegative;
  }
  const bool ok = verify_certificate(sg, S, *cert);
  out << "CERT x=" << x.render() << " p=" << cert->p.render() << " a=" << cert->a
      << " q=" << cert->q << '\n';
  out << "VERIFIED " << (ok ? "yes" : "no") << '\n';
  j["certificate"] = {{"p", cert->p.render()}, {"a", cert->a}, {"q", cert->q}, {"verified", ok}};
  emit_json(out, j);
  return ok ? kExitOk : kExitNegative;
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
             std::ostream& err) {
  CLI::App app{"Expanders, on-line matching and short-program list approximators", "slk"};
  app.require_subcommand(1);

  GenExpanderOpts ge;
  auto* gen = app.add_subcommand("gen-expander", "Random expander with L={0,1}^n, R={0,1}^{k+2}");
  gen->add_option("--n", ge.n, "left bit-length");
  gen->add_option("--k", ge.k, "capacity exponent");
  gen->add_option("--seed", ge.seed);
  gen->add_option("--degree", ge.degree, "override degree (default n+1)");
  gen->add_option("--right-len", ge.right_len, "override right length (default k+2)");
  gen->add_option("--out", ge.out, "output graph file (stdout if absent)");
  gen->add_option("--family-dir", ge.family_dir, "write verified G_n<n>_k<k>.bg for k < n-1");

  GenVarlenOpts gv;
  auto* varlen = app.add_subcommand("gen-varlen", "Expander on all strings of length k..max-len");
  varlen->add_option("--k", gv.k)->required();
  varlen->add_option("--max-len", gv.max_len)->required();
  varlen->add_option("--seed", gv.seed);
  varlen->add_option("--out", gv.out);

  VerifyOpts vo;
  auto* verify = app.add_subcommand("verify", "Check (K,K')-expansion");
  verify->add_option("--in", vo.in)->required();
  verify->add_flag("--exact", vo.exact);
  verify->add_flag("--all-t", vo.all_t);
  verify->add_flag("--sampled", vo.sampled);
  verify->add_option("--K", vo.K)->required();
  verify->add_option("--Kp", vo.Kp, "K' (default K)");
  verify->add_option("--trials", vo.trials);
  verify->add_option("--seed", vo.seed);

  AmplifyOpts ao;
  auto* amp = app.add_subcommand("amplify", "Disjoint union of tagged copies");
  amp->add_option("--in", ao.in)->required();
  amp->add_option("--out", ao.out);
  amp->add_option("--copies", ao.copies, "copy count (default max{1, ceil(2n^3/(alpha D))})");
  amp->add_option("--alpha", ao.alpha);
  amp->add_option("--delta", ao.delta);
  amp->add_option("--K", ao.K);
  amp->add_flag("--verified", ao.verified, "record the base as verified");

  MatchOpts mo;
  auto* match = app.add_subcommand("match", "Serve '<x> <k>' requests from stdin");
  match->add_option("--graphs", mo.graphs, "family directory");
  match->add_option("--n", mo.n, "generate a cascade for this n instead");
  match->add_option("--seed", mo.seed);
  match->add_flag("--overhead-audit", mo.audit);

  DecideOpts dopt;
  auto* decide = app.add_subcommand("decide-match", "Solve the finite on-line matching game");
  decide->add_option("--in", dopt.in)->required();
  decide->add_option("--overhead", dopt.overhead);
  decide->add_option("--class", dopt.classes, "k:budget, repeatable");

  ApproxOpts ap;
  auto* approx = app.add_subcommand("approx", "List approximator");
  approx->require_subcommand(1);
  auto add_common = [&ap](CLI::App* sub) {
    sub->add_option("--machine", ap.machine);
    sub->add_option("--budget", ap.budget, "machine step budget");
    sub->add_option("--n", ap.n, "cover all lengths 0..n");
    sub->add_option("--max-prog-len", ap.max_prog_len, "default n+1");
    sub->add_option("--graph-dir", ap.graph_dir);
    sub->add_option("--seed", ap.seed);
  };
  auto* a_build = approx->add_subcommand("build");
  add_common(a_build);
  a_build->add_option("--out", ap.out);
  auto* a_list = approx->add_subcommand("list");
  add_common(a_list);
  a_list->add_option("x", ap.x)->required();
  auto* a_cx = approx->add_subcommand("complexity");
  a_cx->add_option("--machine", ap.machine);
  a_cx->add_option("--budget", ap.budget);
  a_cx->add_option("--max-len", ap.max_len);
  a_cx->add_option("x", ap.x)->required();
  auto* a_ct = approx->add_subcommand("ct");
  a_ct->add_option("--machine", ap.machine);
  a_ct->add_option("--budget", ap.budget);
  a_ct->add_option("--max-len", ap.max_len);
  a_ct->add_option("--cap", ap.cap, "condition length cap");
  a_ct->add_option("u", ap.u)->required();
  a_ct->add_option("v", ap.v)->required();
  auto* a_comp = approx->add_subcommand("compress");
  a_comp->add_option("--machine", ap.machine);
  a_comp->add_option("--budget", ap.budget);
  a_comp->add_option("--max-len", ap.max_len);
  a_comp->add_option("--max-prog-len", ap.max_prog_len);
  a_comp->add_option("--seed", ap.seed);
  a_comp->add_option("--cond", ap.cond, "condition b ('-' for empty)");
  a_comp->add_option("a", ap.x)->required();

  PawnOpts po;
  auto* game = app.add_subcommand("game", "Games");
  game->require_subcommand(1);
  auto* pawn = game->add_subcommand("pawn", "Greedy White against a Black strategy");
  pawn->add_option("--k", po.k);
  pawn->add_option("--d", po.d);
  pawn->add_option("--black", po.black);
  pawn->add_option("--seed", po.seed);
  pawn->add_option("--trace", po.trace, "trace file ('-' for stdout)");
  pawn->add_option("--budget", po.budget, "machine step budget (blind)");

  FoolingOpts fo;
  auto* lower = app.add_subcommand("lower", "Lower-bound witnesses");
  lower->require_subcommand(1);
  auto* fool = lower->add_subcommand("fooling", "Fooling-set search");
  fool->add_option("--graph", fo.graph)->required();
  fool->add_option("--k", fo.k);
  fool->add_option("--c", fo.c);
  fool->add_option("--mode", fo.mode);
  fool->add_option("--trials", fo.trials);
  fool->add_option("--seed", fo.seed);
  fool->add_flag("--pressure", fo.pressure, "degree-threshold report instead");

  SplitOpts so;
  auto* split = app.add_subcommand("split", "Prime-residue splitting");
  split->require_subcommand(1);
  auto* s_primes = split->add_subcommand("primes");
  s_primes->add_option("--n", so.n);
  s_primes->add_option("--count", so.count);
  s_primes->add_option("--seed", so.seed);
  auto* s_build = split->add_subcommand("build");
  s_build->add_option("--base", so.base)->required();
  s_build->add_option("--eps", so.eps);
  s_build->add_option("--k", so.k);
  s_build->add_option("--out", so.out);
  auto* s_cert = split->add_subcommand("certify");
  s_cert->add_option("--graph", so.graph, "base graph; the split graph is rebuilt")->required();
  s_cert->add_option("--eps", so.eps);
  s_cert->add_option("--set", so.set)->required();
  s_cert->add_option("--x", so.x)->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    WorkBudget budget = WorkBudget::from_env();
    if (gen->parsed()) return run_gen_expander(ge, out, budget);
    if (varlen->parsed()) return run_gen_varlen(gv, out);
    if (verify->parsed()) return run_verify(vo, out, budget);
    if (amp->parsed()) return run_amplify(ao, out);
    if (match->parsed()) return run_match(mo, in, out);
    if (decide->parsed()) return run_decide(dopt, out, budget);
    if (a_build->parsed()) return run_approx_build(ap, out);
    if (a_list->parsed()) return run_approx_list(ap, out);
    if (a_cx->parsed()) return run_approx_complexity(ap, out);
    if (a_ct->parsed()) return run_approx_ct(ap, out);
    if (a_comp->parsed()) return run_approx_compress(ap, out);
    if (pawn->parsed()) return run_pawn(po, out);
    if (fool->parsed()) return run_fooling(fo, out, budget);
    if (s_primes->parsed()) return run_split_primes(so, out);
    if (s_build->parsed()) return run_split_build(so, out);
    if (s_cert->parsed()) return run_split_certify(so, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << to_string(e.kind()) << ": " << e.what() << '\n';
    return e.kind() == ErrorKind::kWorkBudgetExceeded ? kExitBudget : kExitUsage;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: io: " << e.what() << '\n';
    return kExitUsage;
  }
  err << "usage error: no command\n";
  return kExitUsage;
}

}  // namespace slk::cli

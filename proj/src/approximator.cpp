#include "slk/approximator.hpp"

#include <set>

#include "slk/error.hpp"

namespace slk {

std::optional<std::size_t> complexity(const ToyMachine& machine, const BitString& x,
                                      std::uint64_t budget, int max_len) {
  std::optional<std::size_t> best;
  for_each_program(max_len, [&](const BitString& q) {
    auto out = machine.eval(q, BitString(), budget);
    if (out && *out == x) {
      best = q.size();
      return false;
    }
    return true;
  });
  return best;
}

std::optional<std::size_t> ct_complexity(const ToyMachine& machine, const BitString& u,
                                         const BitString& v, std::uint64_t budget,
                                         int cond_len_cap, int max_len) {
  const auto conditions = all_strings(0, cond_len_cap);
  std::optional<std::size_t> best;
  for_each_program(max_len, [&](const BitString& q) {
    auto out = machine.eval(q, v, budget);
    if (!out || *out != u) return true;
    for (const auto& z : conditions) {
      if (!machine.eval(q, z, budget)) return true;
    }
    best = q.size();
    return false;
  });
  return best;
}

std::optional<BitString> TwoBranchMachine::eval(const BitString& program,
                                                const BitString& condition,
                                                std::uint64_t budget) const {
  if (program.empty()) return std::nullopt;
  if (!program.bit(0)) {
    auto it = decoder_->find(program.substr(1));
    if (it == decoder_->end() || 1 + it->second.size() > budget) return std::nullopt;
    return it->second;
  }
  const BitString marker = BitString::repeat(true, static_cast<std::size_t>(width_));
  if (!program.starts_with(marker)) return std::nullopt;
  return base_->eval(program.substr(marker.size()), condition, budget);
}

std::optional<BitString> Approximator::decode_hash(const BitString& p) const {
  auto it = decoder_->find(p);
  if (it == decoder_->end()) return std::nullopt;
  return it->second;
}

std::optional<BitString> Approximator::decode(const BitString& program) const {
  if (program.empty() || program.bit(0)) return std::nullopt;
  return decode_hash(program.substr(1));
}

ApproxList Approximator::list(const BitString& x) const {
  if (!matcher_->covers(x)) {
    throw Error(ErrorKind::kLeftUniverseMiss, x.render() + " is outside the left universe");
  }
  ApproxList out{x, {}, std::nullopt};
  const BitString marker = BitString::parse("0");
  for (const auto& p : matcher_->neighbors(x)) out.programs.push_back(marker + p);
  return out;
}

BitString Approximator::list_index(std::size_t j, const BitString& x) const {
  auto l = list(x);
  if (j < 1 || j > l.programs.size()) {
    throw Error(ErrorKind::kIndexOutOfRange, "index " + std::to_string(j) + " outside 1.." +
                                                 std::to_string(l.programs.size()));
  }
  return l.programs[j - 1];
}

namespace {

// Issues (x, k) unless already issued; returns the matcher's entry.
std::optional<TranscriptEntry> issue(OnlineMatcher& matcher,
                                     std::set<std::pair<BitString, int>>& seen,
                                     std::vector<MatchRequest>* log, const BitString& x, int k) {
  if (!matcher.covers(x)) {
    throw Error(ErrorKind::kLeftUniverseMiss,
                "output " + x.render() + " (length " + std::to_string(x.size()) +
                    ") is outside the matcher's left universe");
  }
  if (!seen.emplace(x, k).second) return std::nullopt;
  MatchRequest r{x, k};
  if (log) log->push_back(r);
  return matcher.request(r);
}

}  // namespace

Approximator build_approximator(const ToyMachine& machine, std::unique_ptr<OnlineMatcher> matcher,
                                std::uint64_t budget, int max_prog_len) {
  Approximator a;
  a.matcher_ = std::move(matcher);
  const auto table = ProgramTable::build(machine, max_prog_len, budget);
  a.table_size_ = table.entries().size();
  std::set<std::pair<BitString, int>> seen;
  int widest = 0;
  for (const auto& entry : table.entries()) {
    auto e = issue(*a.matcher_, seen, &a.issued_, entry.output,
                   static_cast<int>(entry.program.size()));
    if (!e) continue;
    widest = std::max(widest, a.matcher_->overhead(entry.output.size()));
    if (e->hash) a.decoder_->emplace(*e->hash, entry.output);
  }
  a.passthrough_width_ = widest + 2;
  return a;
}

std::optional<std::size_t> find_witness(ApproxList& list, const Approximator& approx) {
  list.witness.reset();
  for (std::size_t j = 0; j < list.programs.size(); ++j) {
    auto x = approx.decode(list.programs[j]);
    if (!x || *x != list.x) continue;
    if (!list.witness || list.programs[j].size() < list.programs[*list.witness].size()) {
      list.witness = j;
    }
  }
  return list.witness;
}

CompressResult conditional_compress(const ToyMachine& machine, const BitString& a,
                                    const BitString& b, OnlineMatcher& matcher,
                                    std::uint64_t budget, int max_prog_len) {
  if (!matcher.covers(a)) {
    throw Error(ErrorKind::kLeftUniverseMiss, a.render() + " is outside the left universe");
  }
  std::set<std::pair<BitString, int>> seen;
  std::optional<CompressResult> result;
  std::size_t issued = 0;
  for_each_program(max_prog_len, [&](const BitString& q) {
    auto out = machine.eval(q, b, budget);
    if (!out || !matcher.covers(*out)) return true;
    auto e = issue(matcher, seen, nullptr, *out, static_cast<int>(q.size()));
    if (e) ++issued;
    if (*out != a) return true;
    if (!e || !e->hash) {
      throw Error(ErrorKind::kNotFound, "matcher did not serve " + a.render());
    }
    result = CompressResult{*e->hash, q, issued};
    return false;
  });
  if (!result) {
    throw Error(ErrorKind::kNotFound, "no program of length <= " + std::to_string(max_prog_len) +
                                          " outputs " + a.render() + " on condition " + b.render());
  }
  return *result;
}

BitString conditional_decompress(const ToyMachine& machine, const BitString& hash,
                                 const BitString& b, OnlineMatcher& matcher,
                                 std::uint64_t budget, int max_prog_len) {
  std::set<std::pair<BitString, int>> seen;
  std::optional<BitString> found;
  for_each_program(max_prog_len, [&](const BitString& q) {
    auto out = machine.eval(q, b, budget);
    if (!out || !matcher.covers(*out)) return true;
    auto e = issue(matcher, seen, nullptr, *out, static_cast<int>(q.size()));
    if (e && e->hash && *e->hash == hash && !e->repeat) {
      found = *out;
      return false;
    }
    return true;
  });
  if (!found) throw Error(ErrorKind::kNotFound, "no left node was matched to " + hash.render());
  return *found;
}

}  // namespace slk

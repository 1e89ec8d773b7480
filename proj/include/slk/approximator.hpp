#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <unordered_map>
#include <vector>

#include "slk/machine.hpp"
#include "slk/matching.hpp"

namespace slk {

/// Length of the shortest program p (|p| <= max_len) with
/// machine.eval(p, "", budget) == x, scanning in ProgramTable order.
std::optional<std::size_t> complexity(const ToyMachine& machine, const BitString& x,
                                      std::uint64_t budget, int max_len);

/// Shortest q (|q| <= max_len) with eval(q, v) == u that also halts on every
/// condition z with |z| <= cond_len_cap.
std::optional<std::size_t> ct_complexity(const ToyMachine& machine, const BitString& u,
                                         const BitString& v, std::uint64_t budget,
                                         int cond_len_cap, int max_len);

/// Candidate programs for x, in the matcher's neighbor order.
struct ApproxList {
  BitString x;
  std::vector<BitString> programs;
  std::optional<std::size_t> witness;  ///< filled by find_witness, 0-based
};

/// Two-branch machine built over a decoder table:
///   "0" p        -> decoder(p)          (the matched left node)
///   1^w q        -> base.eval(q, z)     (pass-through, w = passthrough width)
class TwoBranchMachine final : public ToyMachine {
 public:
  TwoBranchMachine(const ToyMachine& base,
                   std::shared_ptr<const std::unordered_map<BitString, BitString, BitStringHash>> decoder,
                   int passthrough_width)
      : base_(&base), decoder_(std::move(decoder)), width_(passthrough_width) {}

  std::optional<BitString> eval(const BitString& program, const BitString& condition,
                                std::uint64_t budget) const override;
  std::string name() const override { return "two-branch(" + base_->name() + ")"; }

 private:
  const ToyMachine* base_;
  std::shared_ptr<const std::unordered_map<BitString, BitString, BitStringHash>> decoder_;
  int width_;
};

/// Result of replaying a program table through an on-line matcher.
class Approximator {
 public:
  /// Decoder branch: hash p matched to x.
  std::optional<BitString> decode_hash(const BitString& p) const;
  /// Decodes a list entry ("0" + hash).
  std::optional<BitString> decode(const BitString& program) const;

  /// Marker-wrapped neighbors of x; throws kLeftUniverseMiss.
  ApproxList list(const BitString& x) const;
  /// j-th entry (1-based) of list(x); throws kIndexOutOfRange.
  BitString list_index(std::size_t j, const BitString& x) const;

  const std::unordered_map<BitString, BitString, BitStringHash>& decoder() const { return *decoder_; }
  const std::vector<MatchRequest>& issued() const { return issued_; }
  const Transcript& transcript() const { return matcher_->transcript(); }
  const OnlineMatcher& matcher() const { return *matcher_; }
  int passthrough_width() const { return passthrough_width_; }
  std::size_t table_size() const { return table_size_; }

  /// The two-branch machine U1 for this build.
  TwoBranchMachine machine(const ToyMachine& base) const {
    return TwoBranchMachine(base, decoder_, passthrough_width_);
  }

 private:
  friend Approximator build_approximator(const ToyMachine&, std::unique_ptr<OnlineMatcher>,
                                         std::uint64_t, int);
  std::unique_ptr<OnlineMatcher> matcher_;
  std::shared_ptr<std::unordered_map<BitString, BitString, BitStringHash>> decoder_ =
      std::make_shared<std::unordered_map<BitString, BitString, BitStringHash>>();
  std::vector<MatchRequest> issued_;
  int passthrough_width_ = 2;
  std::size_t table_size_ = 0;
};

/// Replays ProgramTable(machine, max_prog_len, budget) in order, issuing
/// (output, |program|) to the matcher once per distinct pair. Throws
/// kLeftUniverseMiss when an output is not a left node of the matcher.
Approximator build_approximator(const ToyMachine& machine, std::unique_ptr<OnlineMatcher> matcher,
                                std::uint64_t budget, int max_prog_len);

/// Sets list.witness to the shortest entry that decodes to list.x.
std::optional<std::size_t> find_witness(ApproxList& list, const Approximator& approx);

struct CompressResult {
  BitString hash;     ///< the matched right node
  BitString program;  ///< shortest program for a given b
  std::size_t requests_issued = 0;
};

/// Replays programs on condition b until one outputs a; returns the hash
/// matched for it. Outputs the matcher does not cover are skipped (they can
/// never equal a). Throws kNotFound if no program <= max_prog_len outputs a.
CompressResult conditional_compress(const ToyMachine& machine, const BitString& a,
                                    const BitString& b, OnlineMatcher& matcher,
                                    std::uint64_t budget, int max_prog_len);

/// Inverse of conditional_compress: replays the same process on a fresh
/// matcher and returns the left node first matched to `hash`.
BitString conditional_decompress(const ToyMachine& machine, const BitString& hash,
                                 const BitString& b, OnlineMatcher& matcher,
                                 std::uint64_t budget, int max_prog_len);

}  // namespace slk

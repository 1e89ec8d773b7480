#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "slk/bitstring.hpp"

namespace slk {

/// A deterministic, step-bounded machine: eval(program, condition, budget)
/// returns the output, or nullopt if the run does not halt within budget.
/// Implementations must be budget-monotone.
class ToyMachine {
 public:
  virtual ~ToyMachine() = default;

  virtual std::optional<BitString> eval(const BitString& program, const BitString& condition,
                                        std::uint64_t budget) const = 0;
  virtual std::string name() const = 0;
  virtual std::uint64_t default_budget() const { return 10'000; }
};

/// Program = tag . payload, step cost 1 + |output|:
///   "0"   payload                 -> payload (literal)
///   "10"  <8-bit L> <bit b>       -> b repeated L times
///   "110" <8-bit L>               -> condition cycled/truncated to length L
///                                    (diverges on an empty condition if L > 0)
/// Everything else diverges.
class DefaultMachine final : public ToyMachine {
 public:
  std::optional<BitString> eval(const BitString& program, const BitString& condition,
                                std::uint64_t budget) const override;
  std::string name() const override { return "default"; }
};

/// Never halts.
class SilentMachine final : public ToyMachine {
 public:
  std::optional<BitString> eval(const BitString&, const BitString&, std::uint64_t) const override {
    return std::nullopt;
  }
  std::string name() const override { return "silent"; }
};

using MachineFactory = std::function<std::unique_ptr<ToyMachine>()>;

/// Extension point for `--machine <name>`; "default" and "silent" are built in.
void register_machine(const std::string& name, MachineFactory factory);
std::unique_ptr<ToyMachine> make_machine(std::string_view name);
std::vector<std::string> machine_names();

struct ProgramEntry {
  BitString program;
  BitString output;
};

/// Every program of length <= max_prog_len that halts within budget on
/// `condition`, in shortlex order (the schedule that stands in for running
/// all programs in parallel).
class ProgramTable {
 public:
  static ProgramTable build(const ToyMachine& machine, int max_prog_len, std::uint64_t budget,
                            const BitString& condition = {});

  const std::vector<ProgramEntry>& entries() const { return entries_; }
  int max_prog_len() const { return max_prog_len_; }
  std::uint64_t budget() const { return budget_; }

 private:
  std::vector<ProgramEntry> entries_;
  int max_prog_len_ = 0;
  std::uint64_t budget_ = 0;
};

/// Calls fn(program) for every program of length <= max_len in shortlex
/// order until fn returns false.
void for_each_program(int max_len, const std::function<bool(const BitString&)>& fn);

}  // namespace slk

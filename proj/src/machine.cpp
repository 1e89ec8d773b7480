#include "slk/machine.hpp"

#include <map>
#include <mutex>

#include "slk/error.hpp"

namespace slk {

std::optional<BitString> DefaultMachine::eval(const BitString& program, const BitString& condition,
                                              std::uint64_t budget) const {
  std::optional<BitString> out;
  const std::string& bits = program.bits();
  if (bits.starts_with("0")) {
    out = program.substr(1);
  } else if (bits.starts_with("10")) {
    if (bits.size() != 2 + 8 + 1) return std::nullopt;
    const std::uint64_t len = program.substr(2, 8).to_uint();
    if (1 + len > budget) return std::nullopt;
    out = BitString::repeat(program.bit(10), len);
  } else if (bits.starts_with("110")) {
    if (bits.size() != 3 + 8) return std::nullopt;
    const std::uint64_t len = program.substr(3, 8).to_uint();
    if (1 + len > budget) return std::nullopt;
    if (len > 0 && condition.empty()) return std::nullopt;
    std::string s;
    s.reserve(len);
    for (std::uint64_t i = 0; i < len; ++i) s += condition.bits()[i % condition.size()];
    out = len == 0 ? BitString() : BitString::parse(s);
  } else {
    return std::nullopt;
  }
  if (1 + out->size() > budget) return std::nullopt;
  return out;
}

namespace {

std::map<std::string, MachineFactory>& registry() {
  static std::map<std::string, MachineFactory> r{
      {"default", [] { return std::make_unique<DefaultMachine>(); }},
      {"silent", [] { return std::make_unique<SilentMachine>(); }},
  };
  return r;
}

std::mutex& registry_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

void register_machine(const std::string& name, MachineFactory factory) {
  std::lock_guard lock(registry_mutex());
  registry()[name] = std::move(factory);
}

std::unique_ptr<ToyMachine> make_machine(std::string_view name) {
  std::lock_guard lock(registry_mutex());
  auto it = registry().find(std::string(name));
  if (it == registry().end()) {
    throw Error(ErrorKind::kInvalidArgument, "unknown machine '" + std::string(name) + "'");
  }
  return it->second();
}

std::vector<std::string> machine_names() {
  std::lock_guard lock(registry_mutex());
  std::vector<std::string> names;
  for (const auto& [name, _] : registry()) names.push_back(name);
  return names;
}

void for_each_program(int max_len, const std::function<bool(const BitString&)>& fn) {
  if (max_len > 26) {
    throw Error(ErrorKind::kResourceLimit, "program length cap " + std::to_string(max_len) +
                                               " is beyond desk scale");
  }
  for (int len = 0; len <= max_len; ++len) {
    for (std::uint64_t v = 0; v < (std::uint64_t{1} << len); ++v) {
      if (!fn(BitString::from_uint(v, len))) return;
    }
  }
}

ProgramTable ProgramTable::build(const ToyMachine& machine, int max_prog_len, std::uint64_t budget,
                                 const BitString& condition) {
  ProgramTable t;
  t.max_prog_len_ = max_prog_len;
  t.budget_ = budget;
  for_each_program(max_prog_len, [&](const BitString& q) {
    if (auto out = machine.eval(q, condition, budget)) t.entries_.push_back({q, std::move(*out)});
    return true;
  });
  return t;
}

}  // namespace slk

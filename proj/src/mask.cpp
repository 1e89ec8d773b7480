#include "slk/detail/mask.hpp"

#include <algorithm>
#include <unordered_map>

#include "slk/error.hpp"

namespace slk::detail {

IndexedGraph index_used_right(const BitGraph& g) {
  IndexedGraph out;
  std::vector<BitString> names;
  for (std::size_t i = 0; i < g.left_count(); ++i) {
    for (const auto& p : g.neighbors_at(i)) names.push_back(p);
  }
  std::sort(names.begin(), names.end());
  names.erase(std::unique(names.begin(), names.end()), names.end());
  std::unordered_map<BitString, std::size_t, BitStringHash> index;
  for (std::size_t i = 0; i < names.size(); ++i) index.emplace(names[i], i);
  for (std::size_t i = 0; i < g.left_count(); ++i) {
    Mask m(names.size());
    for (const auto& p : g.neighbors_at(i)) m.set(index.at(p));
    out.neighborhoods.push_back(std::move(m));
    out.degrees.push_back(g.neighbors_at(i).size());
  }
  out.right_names = std::move(names);
  return out;
}

IndexedGraph index_full_right(const BitGraph& g) {
  if (g.right_len() > 24) {
    throw Error(ErrorKind::kResourceLimit,
                "right universe of 2^" + std::to_string(g.right_len()) + " nodes is too large");
  }
  IndexedGraph out;
  const std::size_t universe = std::size_t{1} << g.right_len();
  out.right_names.reserve(universe);
  for (std::size_t v = 0; v < universe; ++v) {
    out.right_names.push_back(BitString::from_uint(v, g.right_len()));
  }
  for (std::size_t i = 0; i < g.left_count(); ++i) {
    Mask m(universe);
    for (const auto& p : g.neighbors_at(i)) m.set(static_cast<std::size_t>(p.to_uint()));
    out.neighborhoods.push_back(std::move(m));
    out.degrees.push_back(g.neighbors_at(i).size());
  }
  return out;
}

}  // namespace slk::detail

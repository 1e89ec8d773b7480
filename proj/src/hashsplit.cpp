#include "slk/hashsplit.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <unordered_map>

#include "slk/error.hpp"

namespace slk {

std::vector<std::uint64_t> primes_up_to(std::uint64_t limit) {
  std::vector<std::uint64_t> out;
  if (limit < 2) return out;
  if (limit > (std::uint64_t{1} << 32)) throw Error(ErrorKind::kResourceLimit, "sieve limit too large");
  std::vector<bool> composite(limit + 1, false);
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (composite[i]) continue;
    out.push_back(i);
    for (std::uint64_t j = i * i; j <= limit; j += i) composite[j] = true;
  }
  return out;
}

bool is_prime(std::uint64_t v) {
  if (v < 2) return false;
  for (std::uint64_t f = 2; f * f <= v; ++f) {
    if (v % f == 0) return false;
  }
  return true;
}

std::size_t prime_count(std::uint64_t limit) { return primes_up_to(limit).size(); }

std::size_t CongestionProfile::unserved() const {
  return static_cast<std::size_t>(
      std::count_if(choice.begin(), choice.end(), [](const auto& kv) { return !kv.second; }));
}

CongestionProfile low_congestion_select(const BitGraph& g, const std::vector<BitString>& S,
                                        double eps) {
  if (S.empty()) throw Error(ErrorKind::kInvalidArgument, "empty S");
  if (!(eps > 0 && eps <= 1)) throw Error(ErrorKind::kInvalidArgument, "eps must be in (0, 1]");
  CongestionProfile prof;
  for (const auto& x : S) {
    const auto& nb = g.neighbors(x);
    prof.max_degree = std::max(prof.max_degree, nb.size());
    for (const auto& p : nb) ++prof.load[p];
  }
  prof.fat_threshold = static_cast<double>(prof.max_degree) / eps;
  for (const auto& [p, count] : prof.load) {
    if (static_cast<double>(count) > prof.fat_threshold) prof.fat.insert(p);
  }
  for (const auto& x : S) {
    auto& slot = prof.choice[x];
    for (const auto& p : g.neighbors(x)) {
      if (!prof.fat.contains(p)) {
        slot = p;
        break;
      }
    }
  }
  return prof;
}

std::uint64_t find_splitting_prime(const BitString& x, const std::vector<BitString>& W,
                                   std::uint64_t cap) {
  if (std::find(W.begin(), W.end(), x) == W.end()) {
    throw Error(ErrorKind::kInvalidArgument, x.render() + " is not in W");
  }
  if (cap == 0) {
    const std::uint64_t n = x.size();
    cap = std::max<std::uint64_t>(2, 4 * W.size() * n * n);
  }
  for (auto q : primes_up_to(cap)) {
    const auto r = x.mod(q);
    bool ok = true;
    for (const auto& y : W) {
      if (y != x && y.mod(q) == r) {
        ok = false;
        break;
      }
    }
    if (ok) return q;
  }
  throw Error(ErrorKind::kNoPrimeFound, "no prime <= " + std::to_string(cap) + " separates " +
                                            x.render());
}

BitString SplitCertificate::node(const SplitGraph& g) const {
  return p + BitString::from_uint(a, g.field_width) + BitString::from_uint(q, g.field_width);
}

std::tuple<BitString, std::uint64_t, std::uint64_t> split_node(const SplitGraph& g,
                                                               const BitString& node) {
  const auto m = static_cast<std::size_t>(g.base.right_len());
  const auto w = static_cast<std::size_t>(g.field_width);
  if (node.size() != m + 2 * w) throw Error(ErrorKind::kInvalidArgument, "not a composite node");
  return {node.substr(0, m), node.substr(m, w).to_uint(), node.substr(m + w, w).to_uint()};
}

SplitGraph build_split_graph(const BitGraph& base, int n, int k, double eps, int field_width) {
  if (!(eps > 0 && eps <= 1)) throw Error(ErrorKind::kInvalidArgument, "eps must be in (0, 1]");
  if (n < 0 || k < 0) throw Error(ErrorKind::kInvalidArgument, "n, k must be non-negative");
  for (const auto& x : base.left_nodes()) {
    if (x.size() != static_cast<std::size_t>(n)) {
      throw Error(ErrorKind::kShapeMismatch, "left node " + x.render() + " is not of length n");
    }
  }
  SplitGraph sg{base, base, n, 0, 0, 0};
  sg.d = static_cast<std::uint64_t>(std::ceil(static_cast<double>(base.max_degree()) / eps));
  sg.d = std::max<std::uint64_t>(sg.d, 1);
  const auto nn = static_cast<std::uint64_t>(std::max(n, 1));
  sg.bound = 4 * sg.d * nn * nn;
  if (sg.bound > (std::uint64_t{1} << 31)) {
    throw Error(ErrorKind::kWidthOverflow, "bound 4dn^2 = " + std::to_string(sg.bound) +
                                               " needs more than 31 bits");
  }
  const int needed = std::bit_width(sg.bound - 1);
  sg.field_width = field_width == 0 ? needed : field_width;
  if (sg.field_width < needed) {
    throw Error(ErrorKind::kWidthOverflow, "field width " + std::to_string(sg.field_width) +
                                               " cannot hold values below " +
                                               std::to_string(sg.bound));
  }
  auto primes = primes_up_to(sg.bound - 1);
  std::vector<std::pair<BitString, std::vector<BitString>>> adj;
  adj.reserve(base.left_count());
  for (const auto& x : base.left_nodes()) {
    std::vector<BitString> nb;
    for (const auto& p : base.neighbors(x)) {
      for (auto q : primes) {
        nb.push_back(p + BitString::from_uint(x.mod(q), sg.field_width) +
                     BitString::from_uint(q, sg.field_width));
      }
    }
    adj.emplace_back(x, std::move(nb));
  }
  std::vector<BitString> left;
  std::vector<std::vector<BitString>> nbrs;
  for (auto& [x, nb] : adj) {
    left.push_back(x);
    nbrs.push_back(std::move(nb));
  }
  sg.graph = BitGraph(base.right_len() + 2 * sg.field_width, std::move(left), std::move(nbrs));
  return sg;
}

std::optional<SplitCertificate> certify_unique(const SplitGraph& g, const std::vector<BitString>& S,
                                               const BitString& x) {
  if (std::find(S.begin(), S.end(), x) == S.end()) {
    throw Error(ErrorKind::kInvalidArgument, x.render() + " is not in S");
  }
  std::unordered_map<BitString, std::size_t, BitStringHash> load;
  for (const auto& y : S) {
    for (const auto& r : g.graph.neighbors(y)) ++load[r];
  }
  std::optional<SplitCertificate> best;
  for (const auto& r : g.graph.neighbors(x)) {
    if (load[r] != 1) continue;
    auto [p, a, q] = split_node(g, r);
    if (!best || q < best->q || (q == best->q && p < best->p)) {
      best = SplitCertificate{p, a, q, x};
    }
  }
  return best;
}

bool verify_certificate(const SplitGraph& g, const std::vector<BitString>& S,
                        const SplitCertificate& cert) {
  if (!is_prime(cert.q) || cert.q >= g.bound) return false;
  if (cert.owner.mod(cert.q) != cert.a) return false;
  if (std::find(S.begin(), S.end(), cert.owner) == S.end()) return false;
  const auto& base_nb = g.base.neighbors(cert.owner);
  if (std::find(base_nb.begin(), base_nb.end(), cert.p) == base_nb.end()) return false;
  for (const auto& y : S) {
    if (y == cert.owner) continue;
    const auto& nb = g.base.neighbors(y);
    if (std::find(nb.begin(), nb.end(), cert.p) != nb.end() && y.mod(cert.q) == cert.a) {
      return false;
    }
  }
  return true;
}

}  // namespace slk

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "slk/bitgraph.hpp"

namespace slk {

/// Primes up to `limit` by sieve.
std::vector<std::uint64_t> primes_up_to(std::uint64_t limit);
/// Trial division.
bool is_prime(std::uint64_t v);
/// Number of primes <= limit.
std::size_t prime_count(std::uint64_t limit);

struct CongestionProfile {
  std::size_t max_degree = 0;               ///< D, over S
  double fat_threshold = 0;                 ///< D / eps
  std::map<BitString, std::size_t> load;    ///< right node -> neighbors inside S
  std::set<BitString> fat;
  std::map<BitString, std::optional<BitString>> choice;  ///< x -> first non-fat neighbor
  std::size_t unserved() const;
};

/// Throws kInvalidArgument on empty S, eps outside (0, 1], or x not in g.
CongestionProfile low_congestion_select(const BitGraph& g, const std::vector<BitString>& S,
                                        double eps);

/// Least prime q <= cap separating x from every other member of W by residue.
/// cap == 0 means 4 * |W| * n^2. Throws kNoPrimeFound / kInvalidArgument.
std::uint64_t find_splitting_prime(const BitString& x, const std::vector<BitString>& W,
                                   std::uint64_t cap = 0);

/// A split graph: right node = p . enc(a) . enc(q), both fields `field_width`
/// bits, for every prime q < bound and a = x mod q.
struct SplitGraph {
  BitGraph graph;
  BitGraph base;
  int n = 0;
  int field_width = 0;
  std::uint64_t d = 0;      ///< ceil(max degree / eps)
  std::uint64_t bound = 0;  ///< 4 d n^2
};

/// Throws kWidthOverflow when `field_width` (0 = derive from the bound) cannot
/// hold values below the bound, or the bound needs more than 31 bits.
SplitGraph build_split_graph(const BitGraph& base, int n, int k, double eps, int field_width = 0);

struct SplitCertificate {
  BitString p;
  std::uint64_t a = 0;
  std::uint64_t q = 0;
  BitString owner;
  BitString node(const SplitGraph& g) const;
};

/// Splits a composite right node back into (p, a, q).
std::tuple<BitString, std::uint64_t, std::uint64_t> split_node(const SplitGraph& g,
                                                               const BitString& node);

/// The composite neighbor of x (least q, then least p) adjacent to no other
/// member of S; nullopt if none.
std::optional<SplitCertificate> certify_unique(const SplitGraph& g, const std::vector<BitString>& S,
                                               const BitString& x);

/// Independent check by scanning S.
bool verify_certificate(const SplitGraph& g, const std::vector<BitString>& S,
                        const SplitCertificate& cert);

}  // namespace slk

#pragma once

#include <concepts>
#include <cstdint>
#include <optional>
#include <unordered_set>
#include <vector>

#include "discrim/numtheory.hpp"

namespace discrim {

/// Anything the engine can scan: exact terms plus a residue shortcut that
/// must agree with term(i) mod m.
template <typename S>
concept Sequence = requires(const S& s, std::uint64_t i, const Int& m) {
  { s.term(i) } -> std::convertible_to<Int>;
  { s.residue(i, m) } -> std::convertible_to<Int>;
};

/// A pair of window positions whose terms collide modulo `modulus`.
struct CollisionPair {
  std::uint64_t i = 0;
  std::uint64_t j = 0;
  Int modulus;
};

/// One (n, d) row of a discriminator profile. When d > 1, failure_pair
/// witnesses the minimality of d: the lexicographically least (i, j) with
/// term(i) = term(j) (mod d - 1).
struct DiscriminatorRecord {
  std::uint64_t n = 0;
  Int d;
  std::optional<CollisionPair> failure_pair;
};

/// True iff residue(start+i, m) are pairwise distinct for 0 <= i < count.
template <Sequence S>
bool is_discriminating(const S& seq, std::uint64_t start, std::uint64_t count, const Int& m) {
  if (count < 1) throw std::domain_error("is_discriminating: count must be >= 1");
  if (m < 1) throw std::domain_error("is_discriminating: modulus must be >= 1");
  if (m < count) return false;  // pigeonhole: residues live in [0, m)
  if (m <= (1u << 22)) {
    std::vector<std::uint8_t> seen(m.convert_to<std::size_t>(), 0);
    for (std::uint64_t i = 0; i < count; ++i) {
      const auto r = seq.residue(start + i, m).template convert_to<std::size_t>();
      if (seen[r]) return false;
      seen[r] = 1;
    }
    return true;
  }
  std::unordered_set<Int> seen;
  seen.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i)
    if (!seen.insert(seq.residue(start + i, m)).second) return false;
  return true;
}

namespace detail {

/// Lexicographically least (i, j) with i < j < count and equal residues mod m.
template <Sequence S>
std::optional<CollisionPair> find_collision(const S& seq, std::uint64_t count, const Int& m) {
  if (fits_u64(m)) {
    std::vector<std::uint64_t> res(count);
    for (std::uint64_t i = 0; i < count; ++i)
      res[i] = seq.residue(i, m).template convert_to<std::uint64_t>();
    for (std::uint64_t i = 0; i + 1 < count; ++i)
      for (std::uint64_t j = i + 1; j < count; ++j)
        if (res[i] == res[j]) return CollisionPair{i, j, m};
    return std::nullopt;
  }
  std::vector<Int> res(count);
  for (std::uint64_t i = 0; i < count; ++i) res[i] = seq.residue(i, m);
  for (std::uint64_t i = 0; i + 1 < count; ++i)
    for (std::uint64_t j = i + 1; j < count; ++j)
      if (res[i] == res[j]) return CollisionPair{i, j, m};
  return std::nullopt;
}

/// Families that are injective by construction say so; anything else gets its
/// first `count` exact terms checked for duplicates.
template <Sequence S>
void require_injective(const S& seq, std::uint64_t count) {
  if constexpr (requires { { seq.is_injective() } -> std::convertible_to<bool>; }) {
    if (seq.is_injective()) return;
  }
  std::unordered_set<Int> terms;
  terms.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i)
    if (!terms.insert(seq.term(i)).second)
      throw std::domain_error("sequence not injective on window");
}

template <Sequence S>
DiscriminatorRecord make_record(const S& seq, std::uint64_t n, Int first_candidate) {
  Int m = std::move(first_candidate);
  while (!is_discriminating(seq, 0, n, m)) ++m;
  DiscriminatorRecord rec{n, m, std::nullopt};
  if (m > 1) {
    auto pair = find_collision(seq, n, m - 1);
    if (!pair) throw invariant_error("discriminator: no collision found at d - 1");
    rec.failure_pair = std::move(*pair);
  }
  return rec;
}

}  // namespace detail

/// Least m discriminating the first n terms, with the minimality witness at
/// m - 1. The scan starts at max(n, 1): n distinct residues need at least n
/// classes.
template <Sequence S>
DiscriminatorRecord discriminator(const S& seq, std::uint64_t n) {
  if (n < 1) throw std::domain_error("discriminator: n must be >= 1");
  detail::require_injective(seq, n);
  return detail::make_record(seq, n, Int(n));
}

/// Records for n = 1..n_max. Each scan resumes at the previous d: the
/// discriminator is monotone in n, so smaller candidates need no re-testing.
template <Sequence S>
std::vector<DiscriminatorRecord> discriminator_profile(const S& seq, std::uint64_t n_max) {
  if (n_max < 1) throw std::domain_error("discriminator_profile: n_max must be >= 1");
  detail::require_injective(seq, n_max);
  std::vector<DiscriminatorRecord> out;
  out.reserve(n_max);
  Int d = 1;
  for (std::uint64_t n = 1; n <= n_max; ++n) {
    if (d < n) d = n;
    out.push_back(detail::make_record(seq, n, d));
    d = out.back().d;
  }
  return out;
}

}  // namespace discrim

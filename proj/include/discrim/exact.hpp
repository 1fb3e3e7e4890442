#pragma once

#include <bit>
#include <cstdint>
#include <string>
#include <vector>

#include "discrim/numtheory.hpp"
#include "discrim/sequences.hpp"

namespace discrim {

/// 2^ceil(log2 n): the exact discriminator of any n-term window of the
/// exponential family, for every shift.
inline Int closed_form_discriminator(std::uint64_t n) {
  if (n < 1) throw std::domain_error("closed_form_discriminator: n must be >= 1");
  if (n == 1) return 1;
  return Int(1) << (64 - std::countl_zero(n - 1));
}

/// Checks t^2 = 2^b + 1 (mod 2^(b+1)) with b = find_b(t).
inline bool verify_lemma1(const Int& t) {
  const unsigned b = find_b(t);
  return detail::normalize_mod(t * t, Int(1) << (b + 1)) == (Int(1) << b) + 1;
}

/// Checks t^(2^k) = 2^(k+b-1) + 1 (mod 2^(k+b)) for k >= 1.
inline bool verify_lemma2(const Int& t, unsigned k) {
  if (k < 1) throw std::domain_error("verify_lemma2: k must be >= 1");
  const unsigned b = find_b(t);
  return mod_pow(t, Int(1) << k, Int(1) << (k + b)) == (Int(1) << (k + b - 1)) + 1;
}

/// Multiplicative order of t^2 modulo 2^(k+b); equals 2^k for every valid t.
inline Int order_of_t_squared(const Int& t, unsigned k) {
  if (k < 1) throw std::domain_error("order_of_t_squared: k must be >= 1");
  const unsigned b = find_b(t);
  const Int modulus = Int(1) << (k + b);
  return multiplicative_order(detail::normalize_mod(t * t, modulus), modulus);
}

/// A prime of m that also divides t, with its multiplicity in each.
struct SharedPrime {
  Int prime;
  unsigned mult_in_m = 0;
  unsigned mult_in_t = 0;

  friend bool operator==(const SharedPrime&, const SharedPrime&) = default;
};

/// An odd prime of m coprime to t.
struct CoprimePrime {
  Int prime;
  unsigned mult_in_m = 0;

  friend bool operator==(const CoprimePrime&, const CoprimePrime&) = default;
};

/// factorize(m) split against t: the power of two, the odd primes shared
/// with t, and the odd primes coprime to t.
struct PartitionedFactorization {
  unsigned two_exponent = 0;
  std::vector<SharedPrime> shared;
  std::vector<CoprimePrime> coprime;

  Int value() const {
    Int v = Int(1) << two_exponent;
    for (const auto& s : shared) v *= boost::multiprecision::pow(s.prime, s.mult_in_m);
    for (const auto& c : coprime) v *= boost::multiprecision::pow(c.prime, c.mult_in_m);
    return v;
  }
};

inline PartitionedFactorization partition_factorization(const Int& m, const Int& t) {
  if (m < 1) throw std::domain_error("partition_factorization: m must be >= 1");
  if (t % 2 == 0 || abs(t) < 3)
    throw std::domain_error("partition_factorization: t must be odd with |t| >= 3");
  PartitionedFactorization out;
  const Int abs_t = abs(t);
  for (const auto& [p, exp] : factorize(m).factors) {
    if (p == 2) {
      out.two_exponent = exp;
    } else if (abs_t % p == 0) {
      unsigned e = 0;
      Int rest = abs_t;
      while (rest % p == 0) {
        rest /= p;
        ++e;
      }
      out.shared.push_back({p, exp, e});
    } else {
      out.coprime.push_back({p, exp});
    }
  }
  return out;
}

/// A verified pair of exponents i < j <= 2^k with
/// (t^2)^i = (t^2)^j (mod 2^b * m).
struct CollisionWitness {
  Int t;
  unsigned b = 0;
  unsigned k = 0;
  Int m;
  Int i;
  Int j;
  Int modulus_full;  // 2^b * m
};

/// Constructs a witness that m cannot discriminate 2^k + 1 consecutive terms
/// of the exponential family:
///
///   i = max over shared primes p of ceil(mult_in_m(p) / (2 * mult_in_t(p)))
///   j = i + 2^x * prod over coprime primes q of q^(mult_in_m(q)-1)*(q-1)/2
///
/// where 2^x || m. The result is re-verified before being returned; if the
/// verification fails, an invariant_error is thrown. That happens exactly at
/// m = 2^(k+1), where no such pair exists: the powers of t^2 stay pairwise
/// distinct modulo 2^b * m through exponent 2^k.
inline CollisionWitness collision_witness(const Int& t, unsigned k, const Int& m) {
  const unsigned b = find_b(t);  // validates t
  if (m < 1 || m > (Int(1) << (k + 1)))
    throw std::domain_error("collision_witness: m must satisfy 1 <= m <= 2^(k+1)");

  const auto part = partition_factorization(m, t);
  Int i = 0;
  for (const auto& sp : part.shared) {
    const unsigned denom = 2 * sp.mult_in_t;
    const Int candidate = (Int(sp.mult_in_m) + denom - 1) / denom;
    if (candidate > i) i = candidate;
  }
  Int stride = 1;
  for (const auto& cp : part.coprime)
    stride *= boost::multiprecision::pow(cp.prime, cp.mult_in_m - 1) * (cp.prime - 1) / 2;
  const Int j = i + (Int(1) << part.two_exponent) * stride;

  CollisionWitness w{t, b, k, m, i, j, (Int(1) << b) * m};
  const Int bound = Int(1) << k;
  if (!(w.i < w.j && w.j <= bound)) {
    std::string msg = "collision_witness: constructed pair (i=" + w.i.str() + ", j=" + w.j.str() +
                      ") violates i < j <= 2^k = " + bound.str();
    if (m == (Int(1) << (k + 1)))
      msg += "; no collision exists at m = 2^(k+1): the powers of t^2 are pairwise distinct "
             "modulo 2^b*m through exponent 2^k";
    throw invariant_error(msg);
  }
  const Int t_sq = t * t;
  if (mod_pow(t_sq, w.i, w.modulus_full) != mod_pow(t_sq, w.j, w.modulus_full))
    throw invariant_error("collision_witness: pair (i=" + w.i.str() + ", j=" + w.j.str() +
                          ") fails the congruence modulo " + w.modulus_full.str());
  return w;
}

/// Whether a discriminator value carries over to the sequence scaled by a:
/// true iff gcd(|a|, d) = 1.
inline bool scaled_discriminator_transfer(const Int& d, const Int& a) {
  if (d < 1) throw std::domain_error("scaled_discriminator_transfer: d must be >= 1");
  if (a == 0) throw std::domain_error("scaled_discriminator_transfer: a must be nonzero");
  return gcd(abs(a), d) == 1;
}

}  // namespace discrim

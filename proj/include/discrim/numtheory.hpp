#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

namespace discrim {

using Int = boost::multiprecision::cpp_int;

using boost::multiprecision::abs;
using boost::multiprecision::gcd;

/// Thrown when a self-checking construction finds its own output in violation
/// of its contract. Distinct from std::domain_error: a domain error is a
/// caller mistake, an invariant error means the computed result cannot exist
/// or cannot be trusted.
class invariant_error : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

namespace detail {

/// Reduce into [0, m) even for negative values; m must be >= 1.
inline Int normalize_mod(const Int& v, const Int& m) {
  Int r = v % m;
  if (r < 0) r += m;
  return r;
}

inline std::uint64_t mul_mod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

inline std::uint64_t pow_mod_u64(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
  std::uint64_t result = 1 % m;
  std::uint64_t acc = base % m;
  while (exp > 0) {
    if (exp & 1) result = mul_mod_u64(result, acc, m);
    exp >>= 1;
    if (exp > 0) acc = mul_mod_u64(acc, acc, m);
  }
  return result;
}

inline bool fits_u64(const Int& v) {
  return v >= 0 && v <= std::numeric_limits<std::uint64_t>::max();
}

}  // namespace detail

/// base^exp mod modulus, result in [0, modulus). Negative bases are reduced
/// first. Keeps the whole computation in 64-bit words whenever the modulus
/// allows it.
inline Int mod_pow(const Int& base, const Int& exp, const Int& modulus) {
  if (modulus < 1) throw std::domain_error("mod_pow: modulus must be >= 1");
  if (exp < 0) throw std::domain_error("mod_pow: exponent must be >= 0");
  if (modulus == 1) return 0;
  const Int b = detail::normalize_mod(base, modulus);
  if (detail::fits_u64(modulus) && detail::fits_u64(exp)) {
    return detail::pow_mod_u64(b.convert_to<std::uint64_t>(), exp.convert_to<std::uint64_t>(),
                               modulus.convert_to<std::uint64_t>());
  }
  return boost::multiprecision::powm(b, exp, modulus);
}

struct PrimePower {
  Int prime;
  unsigned exponent = 0;

  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

/// Prime factorization as (prime, exponent) pairs, primes strictly ascending.
/// The factorization of 1 is the empty product.
struct Factorization {
  std::vector<PrimePower> factors;

  Int value() const {
    Int v = 1;
    for (const auto& f : factors) v *= boost::multiprecision::pow(f.prime, f.exponent);
    return v;
  }
};

/// Miller-Rabin with a fixed witness set that is deterministic below 2^64;
/// above that it is a strong probable-prime test.
inline bool is_prime(const Int& n) {
  if (n < 2) return false;
  constexpr int small_primes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  for (int p : small_primes) {
    if (n == p) return true;
    if (n % p == 0) return false;
  }
  Int d = n - 1;
  unsigned r = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++r;
  }
  for (int a : small_primes) {
    Int x = mod_pow(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool witness = true;
    for (unsigned i = 1; i < r && witness; ++i) {
      x = mod_pow(x, 2, n);
      if (x == n - 1) witness = false;
    }
    if (witness) return false;
  }
  return true;
}

namespace detail {

inline void factorize_u64(std::uint64_t n, Factorization& out) {
  auto strip = [&](std::uint64_t p) {
    if (n % p != 0) return;
    unsigned e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    out.factors.push_back({Int(p), e});
  };
  strip(2);
  strip(3);
  for (std::uint64_t d = 5; d * d <= n; d += 6) {
    strip(d);
    strip(d + 2);
  }
  if (n > 1) out.factors.push_back({Int(n), 1});
}

}  // namespace detail

/// Trial division (with a primality early-out once the small factors are
/// stripped). Fine for desk-scale inputs; not a general-purpose factoring
/// engine.
inline Factorization factorize(const Int& m) {
  if (m < 1) throw std::domain_error("factorize: argument must be >= 1");
  Factorization out;
  if (detail::fits_u64(m)) {
    detail::factorize_u64(m.convert_to<std::uint64_t>(), out);
    return out;
  }
  Int n = m;
  auto strip = [&](const Int& p) {
    if (n % p != 0) return false;
    unsigned e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    out.factors.push_back({p, e});
    return true;
  };
  strip(2);
  strip(3);
  bool retest = true;
  for (Int d = 5; d * d <= n; d += 6) {
    // Test the cofactor for primality on entry and whenever it shrinks, so a
    // large prime cofactor exits early instead of being trial-divided.
    if (retest && n > 1 && is_prime(n)) break;
    retest = strip(d);
    retest |= strip(d + 2);
  }
  if (n > 1) out.factors.push_back({n, 1});
  return out;
}

/// Euler's totient, computed from the factorization.
inline Int totient(const Int& m) {
  if (m < 1) throw std::domain_error("totient: argument must be >= 1");
  Int phi = 1;
  for (const auto& f : factorize(m).factors)
    phi *= boost::multiprecision::pow(f.prime, f.exponent - 1) * (f.prime - 1);
  return phi;
}

/// All divisors of the factored value, ascending.
inline std::vector<Int> divisors(const Factorization& f) {
  std::vector<Int> divs{1};
  for (const auto& pp : f.factors) {
    const std::size_t base_count = divs.size();
    Int power = 1;
    for (unsigned e = 1; e <= pp.exponent; ++e) {
      power *= pp.prime;
      for (std::size_t i = 0; i < base_count; ++i) divs.push_back(divs[i] * power);
    }
  }
  std::sort(divs.begin(), divs.end());
  return divs;
}

/// Least d >= 1 with g^d = 1 (mod modulus). Requires gcd(g, modulus) = 1.
/// The order divides phi(modulus), so only divisors of phi are tried,
/// smallest first.
inline Int multiplicative_order(const Int& g, const Int& modulus) {
  if (modulus < 2) throw std::domain_error("multiplicative_order: modulus must be >= 2");
  const Int gn = detail::normalize_mod(g, modulus);
  if (gcd(gn, modulus) != 1)
    throw std::domain_error("multiplicative_order: base and modulus must be coprime");
  for (const Int& d : divisors(factorize(totient(modulus))))
    if (mod_pow(gn, d, modulus) == 1) return d;
  throw invariant_error("multiplicative_order: no divisor of phi(modulus) is an order");
}

}  // namespace discrim

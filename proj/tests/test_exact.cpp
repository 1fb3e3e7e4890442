#include <catch2/catch_amalgamated.hpp>

#include <cstdint>
#include <set>
#include <vector>

#include "discrim/engine.hpp"
#include "discrim/exact.hpp"
#include "oracles.hpp"

using discrim::Int;

TEST_CASE("closed form anchors") {
  CHECK(discrim::closed_form_discriminator(1) == 1);
  CHECK(discrim::closed_form_discriminator(5) == 8);
  CHECK(discrim::closed_form_discriminator(256) == 256);
  CHECK_THROWS_AS(discrim::closed_form_discriminator(0), std::domain_error);
}

TEST_CASE("closed form equals doubling oracle") {
  for (std::uint64_t n = 1; n <= 4096; ++n)
    REQUIRE(discrim::closed_form_discriminator(n) == oracle::pow2_ceiling(n));
  CHECK(discrim::closed_form_discriminator(std::uint64_t(1) << 40) == Int(1) << 40);
  CHECK(discrim::closed_form_discriminator((std::uint64_t(1) << 40) + 1) == Int(1) << 41);
}

TEST_CASE("squared odd numbers sit just above a power of two") {
  CHECK(discrim::verify_lemma1(3));   // 9 mod 16 = 8 + 1
  CHECK(discrim::verify_lemma1(7));   // 49 mod 32 = 16 + 1
  CHECK(discrim::verify_lemma1(17));  // 289 mod 64 = 32 + 1
  for (long long t = 3; t <= 201; t += 2) {
    REQUIRE(discrim::verify_lemma1(t));
    REQUIRE(discrim::verify_lemma1(-t));
  }
  CHECK_THROWS_AS(discrim::verify_lemma1(2), std::domain_error);
}

TEST_CASE("iterated squares climb one power of two per step") {
  CHECK(discrim::verify_lemma2(3, 1));  // 9 mod 16 = 9
  CHECK(discrim::verify_lemma2(3, 2));  // 81 mod 32 = 17
  CHECK(discrim::verify_lemma2(7, 3));  // 7^8 mod 128 = 65
  for (long long t : {3, 5, 7, 9, 11, 15, 17})
    for (unsigned k = 1; k <= 12; ++k) REQUIRE(discrim::verify_lemma2(t, k));
  CHECK_THROWS_AS(discrim::verify_lemma2(3, 0), std::domain_error);
  CHECK_THROWS_AS(discrim::verify_lemma2(9, 0), std::domain_error);
}

TEST_CASE("order of t^2 modulo 2^(k+b)") {
  CHECK(discrim::order_of_t_squared(3, 1) == 2);
  CHECK(discrim::order_of_t_squared(3, 3) == 8);
  CHECK(discrim::order_of_t_squared(7, 2) == 4);
  for (long long t : {3, 5, 7, 9, 11, 15, 17})
    for (unsigned k = 1; k <= 10; ++k) REQUIRE(discrim::order_of_t_squared(t, k) == Int(1) << k);
  CHECK_THROWS_AS(discrim::order_of_t_squared(3, 0), std::domain_error);
}

TEST_CASE("partition anchors") {
  const auto p1 = discrim::partition_factorization(6, 3);
  CHECK(p1.two_exponent == 1);
  REQUIRE(p1.shared.size() == 1);
  CHECK(p1.shared[0] == discrim::SharedPrime{3, 1, 1});
  CHECK(p1.coprime.empty());

  const auto p2 = discrim::partition_factorization(5, 3);
  CHECK(p2.two_exponent == 0);
  CHECK(p2.shared.empty());
  REQUIRE(p2.coprime.size() == 1);
  CHECK(p2.coprime[0] == discrim::CoprimePrime{5, 1});

  const auto p3 = discrim::partition_factorization(1, 9);
  CHECK(p3.two_exponent == 0);
  CHECK(p3.shared.empty());
  CHECK(p3.coprime.empty());

  const auto p4 = discrim::partition_factorization(90, 15);  // 2 * 3^2 * 5
  CHECK(p4.two_exponent == 1);
  REQUIRE(p4.shared.size() == 2);
  CHECK(p4.shared[0] == discrim::SharedPrime{3, 2, 1});
  CHECK(p4.shared[1] == discrim::SharedPrime{5, 1, 1});

  const auto p5 = discrim::partition_factorization(63, 3);  // 3^2 * 7
  CHECK(p5.shared[0] == discrim::SharedPrime{3, 2, 1});
  REQUIRE(p5.coprime.size() == 1);
  CHECK(p5.coprime[0] == discrim::CoprimePrime{7, 1});

  CHECK_THROWS_AS(discrim::partition_factorization(0, 3), std::domain_error);
  CHECK_THROWS_AS(discrim::partition_factorization(6, 2), std::domain_error);
  CHECK_THROWS_AS(discrim::partition_factorization(6, 1), std::domain_error);
}

TEST_CASE("partition reconstructs m and respects multiplicities") {
  for (long long t : {3, 9, 15, 21}) {
    const Int abs_t = t;
    for (std::uint64_t m = 1; m <= 512; ++m) {
      const auto part = discrim::partition_factorization(m, t);
      REQUIRE(part.value() == m);
      for (const auto& sp : part.shared) {
        REQUIRE(abs_t % sp.prime == 0);
        const Int pe = boost::multiprecision::pow(sp.prime, sp.mult_in_t);
        REQUIRE(abs_t % pe == 0);
        REQUIRE(abs_t % (pe * sp.prime) != 0);
      }
      for (const auto& cp : part.coprime) {
        REQUIRE(cp.prime % 2 == 1);
        REQUIRE(abs_t % cp.prime != 0);
      }
    }
  }
}

TEST_CASE("witness anchors") {
  const auto w1 = discrim::collision_witness(3, 2, 6);
  CHECK(w1.i == 1);
  CHECK(w1.j == 3);
  CHECK(w1.b == 3);
  CHECK(w1.modulus_full == 48);
  CHECK(discrim::mod_pow(9, w1.i, 48) == 9);
  CHECK(discrim::mod_pow(9, w1.j, 48) == 9);  // 729 = 15*48 + 9

  const auto w2 = discrim::collision_witness(3, 2, 5);
  CHECK(w2.i == 0);
  CHECK(w2.j == 2);
  CHECK(w2.modulus_full == 40);  // 81 = 2*40 + 1

  const auto w3 = discrim::collision_witness(3, 0, 1);
  CHECK(w3.i == 0);
  CHECK(w3.j == 1);
  CHECK(w3.modulus_full == 8);

  const auto w4 = discrim::collision_witness(9, 1, 3);
  CHECK(w4.i == 1);  // 3^2 || 9 forces the ceiling up
  CHECK(w4.j == 2);
  CHECK(w4.modulus_full == 48);
}

TEST_CASE("witness rejects out-of-range m") {
  CHECK_THROWS_AS(discrim::collision_witness(3, 2, 9), std::domain_error);  // 9 > 2^3
  CHECK_THROWS_AS(discrim::collision_witness(3, 2, 0), std::domain_error);
  CHECK_THROWS_AS(discrim::collision_witness(3, 2, -1), std::domain_error);
  CHECK_THROWS_AS(discrim::collision_witness(4, 2, 3), std::domain_error);  // even t
}

TEST_CASE("witness totality below the boundary") {
  for (long long t : {3, 5, 7, 9, 11, 15, 17}) {
    const Int t_sq = Int(t) * t;
    for (unsigned k = 0; k <= 8; ++k) {
      const Int bound = Int(1) << k;
      for (Int m = 1; m < Int(1) << (k + 1); ++m) {
        const auto w = discrim::collision_witness(t, k, m);
        REQUIRE(w.i >= 0);
        REQUIRE(w.i < w.j);
        REQUIRE(w.j <= bound);
        REQUIRE(w.m == m);
        REQUIRE(w.modulus_full == (Int(1) << w.b) * m);
        REQUIRE(discrim::mod_pow(t_sq, w.i, w.modulus_full) ==
                discrim::mod_pow(t_sq, w.j, w.modulus_full));
      }
    }
  }
}

TEST_CASE("no witness exists exactly at m = 2^(k+1)") {
  for (long long t : {3, 5, 9}) {
    for (unsigned k = 0; k <= 4; ++k) {
      const Int m = Int(1) << (k + 1);
      CHECK_THROWS_AS(discrim::collision_witness(t, k, m), discrim::invariant_error);
    }
  }
  // Exhaustive cross-check for small cases: the powers of t^2 really are
  // pairwise distinct modulo 2^b * 2^(k+1) through exponent 2^k.
  for (long long t : {3, 5}) {
    const unsigned b = discrim::find_b(t);
    for (unsigned k = 0; k <= 3; ++k) {
      const Int modulus = (Int(1) << b) << (k + 1);
      std::set<Int> seen;
      for (Int e = 0; e <= Int(1) << k; ++e)
        REQUIRE(seen.insert(discrim::mod_pow(Int(t) * t, e, modulus)).second);
    }
  }
}

TEST_CASE("witnesses really break the discriminator they target") {
  // A witness at (t, k, m) exhibits a collision of the exp family (a=1, c=0)
  // within the window 0..2^k, i.e. m cannot discriminate 2^k + 1 terms.
  const auto h = discrim::make_exp_sequence(1, 3, 0);
  for (unsigned k = 0; k <= 5; ++k)
    for (Int m = 1; m < Int(1) << (k + 1); ++m) {
      const auto w = discrim::collision_witness(3, k, m);
      REQUIRE(h.residue(w.i.convert_to<std::uint64_t>(), m) ==
              h.residue(w.j.convert_to<std::uint64_t>(), m));
      REQUIRE_FALSE(
          discrim::is_discriminating(h, 0, (std::uint64_t(1) << k) + 1, m));
    }
}

TEST_CASE("scaling transfer predicate") {
  CHECK(discrim::scaled_discriminator_transfer(8, 3));
  CHECK_FALSE(discrim::scaled_discriminator_transfer(6, 3));
  for (unsigned k = 0; k <= 20; ++k)
    for (long long a : {3, -3, 5, -5, 7, 9, 11})
      CHECK(discrim::scaled_discriminator_transfer(Int(1) << k, a));
  CHECK_THROWS_AS(discrim::scaled_discriminator_transfer(0, 3), std::domain_error);
  CHECK_THROWS_AS(discrim::scaled_discriminator_transfer(8, 0), std::domain_error);
}

TEST_CASE("closed form matches the brute-force engine on small grids") {
  for (long long t : {3, 7}) {
    for (std::uint64_t c = 0; c <= 2; ++c) {
      const auto profile = discrim::discriminator_profile(discrim::make_exp_sequence(1, t, c), 32);
      for (std::uint64_t n = 1; n <= 32; ++n)
        REQUIRE(profile[n - 1].d == discrim::closed_form_discriminator(n));
    }
  }
}

TEST_CASE("scaled exp sequences keep the same discriminator profile") {
  const auto base = discrim::discriminator_profile(discrim::make_exp_sequence(1, 3, 0), 32);
  const auto scaled = discrim::discriminator_profile(discrim::make_exp_sequence(3, 3, 0), 32);
  for (std::uint64_t n = 1; n <= 32; ++n) {
    REQUIRE(discrim::scaled_discriminator_transfer(base[n - 1].d, 3));  // gcd(3, 2^j) = 1
    REQUIRE(scaled[n - 1].d == base[n - 1].d);
  }
}

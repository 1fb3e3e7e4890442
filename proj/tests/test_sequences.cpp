#include <catch2/catch_amalgamated.hpp>

#include <set>
#include <vector>

#include "discrim/sequences.hpp"

using discrim::Int;
using discrim::SequenceHandle;

namespace {

Int normalized(const Int& v, const Int& m) {
  Int r = v % m;
  if (r < 0) r += m;
  return r;
}

}  // namespace

TEST_CASE("find_b anchors") {
  CHECK(discrim::find_b(3) == 3);
  CHECK(discrim::find_b(7) == 4);
  CHECK(discrim::find_b(17) == 5);
  CHECK(discrim::find_b(9) == 4);
  CHECK(discrim::find_b(15) == 5);
  CHECK(discrim::find_b(-3) == 3);
  CHECK(discrim::find_b(-7) == 4);
}

TEST_CASE("find_b rejects even t and +-1") {
  CHECK_THROWS_AS(discrim::find_b(4), std::domain_error);
  CHECK_THROWS_AS(discrim::find_b(0), std::domain_error);
  CHECK_THROWS_AS(discrim::find_b(1), std::domain_error);
  CHECK_THROWS_AS(discrim::find_b(-1), std::domain_error);
}

TEST_CASE("find_b definition holds pointwise") {
  for (long long t = 3; t <= 1001; t += 2) {
    for (long long sign : {1, -1}) {
      const Int tt = Int(t) * sign;
      const unsigned b = discrim::find_b(tt);
      REQUIRE(b >= 3);
      // minimal: every smaller b' has t = +-1 (mod 2^b')
      for (unsigned bp = 1; bp < b; ++bp) {
        const Int pw = Int(1) << bp;
        const Int r = normalized(tt, pw);
        REQUIRE((r == 1 || r == pw - 1));
      }
      const Int pw = Int(1) << b;
      const Int r = normalized(tt, pw);
      REQUIRE(r != 1);
      REQUIRE(r != pw - 1);
    }
  }
}

TEST_CASE("find_b depends only on the low 20 bits") {
  const Int shift = Int(1) << 20;
  for (long long t = 3; t < (1 << 19); t += 2) {
    REQUIRE(discrim::find_b(t) == discrim::find_b(Int(t) + shift));
    if (t % 101 == 0) REQUIRE(discrim::find_b(-Int(t)) == discrim::find_b(shift - t));
  }
}

TEST_CASE("exp sequence anchors") {
  const discrim::ExpSequence s(1, 3, 0);
  CHECK(s.params().b == 3);
  CHECK(s.term(0) == 0);
  CHECK(s.term(1) == 1);
  CHECK(s.term(2) == 10);
  CHECK(s.term(3) == 91);
  CHECK(s.term(4) == 820);

  const discrim::ExpSequence shifted(1, 3, 1);
  CHECK(shifted.term(0) == 1);
  CHECK(shifted.term(1) == 10);
  CHECK(shifted.term(2) == 91);

  const discrim::ExpSequence scaled(3, 3, 0);
  CHECK(scaled.term(0) == 0);
  CHECK(scaled.term(1) == 3);
  CHECK(scaled.term(2) == 30);
  CHECK(scaled.term(3) == 273);

  const discrim::ExpSequence negative(-3, 5, 2);
  CHECK(negative.term(0) == Int(-3) * (Int(25) * 25 - 1) / 8);
}

TEST_CASE("exp sequence rejects bad parameters") {
  CHECK_THROWS_AS(discrim::ExpSequence(2, 3, 0), std::domain_error);   // even a
  CHECK_THROWS_AS(discrim::ExpSequence(0, 3, 0), std::domain_error);   // zero a
  CHECK_THROWS_AS(discrim::ExpSequence(1, 4, 0), std::domain_error);   // even t
  CHECK_THROWS_AS(discrim::ExpSequence(1, 1, 0), std::domain_error);   // t = 1
  CHECK_THROWS_AS(discrim::ExpSequence(1, -1, 0), std::domain_error);  // t = -1
}

TEST_CASE("residue anchors") {
  const auto h = discrim::make_exp_sequence(1, 3, 0);
  CHECK(h.residue(3, 7) == 0);   // 91 mod 7
  CHECK(h.residue(0, 1) == 0);   // everything mod 1
  CHECK(h.residue(2, 4) == 2);   // 10 mod 4
  CHECK(discrim::residue(h, 3, 7) == 0);
  CHECK_THROWS_AS(h.residue(0, 0), std::domain_error);
}

TEST_CASE("every term of the exp family is an integer") {
  // 2^b divides (t^2)^n - 1, so the defining quotient is exact.
  for (long long t : {3, 7, 9, 15}) {
    const unsigned b = discrim::find_b(t);
    const Int t2 = Int(t) * t;
    Int power = 1;
    for (int n = 0; n <= 128; ++n) {
      REQUIRE((power - 1) % (Int(1) << b) == 0);
      power *= t2;
    }
  }
}

TEST_CASE("reference sequence anchors") {
  const auto squares = discrim::make_squares_sequence(0);
  CHECK(squares.term(0) == 1);
  CHECK(squares.term(1) == 4);
  CHECK(squares.term(2) == 9);
  CHECK(squares.term(3) == 16);
  CHECK(squares.family() == "squares");

  const auto shifted_squares = discrim::make_squares_sequence(2);
  CHECK(shifted_squares.term(0) == 9);

  const auto identity = discrim::make_linear_sequence(1, 0, 0);
  CHECK(identity.term(0) == 0);
  CHECK(identity.term(3) == 3);

  const auto affine = discrim::make_linear_sequence(5, 7, 1);
  CHECK(affine.term(0) == 12);  // 5*(0+1)+7
  CHECK(affine.term(2) == 22);

  const auto quad = discrim::make_quadratic_sequence(1, 1, 1, 0);
  CHECK(quad.term(0) == 0);
  CHECK(quad.term(1) == 3);   // 2*1+1
  CHECK(quad.term(2) == 10);  // 2*4+2
  CHECK(quad.term(3) == 21);

  const auto quad2 = discrim::make_quadratic_sequence(2, 3, -5, 0);
  CHECK(quad2.term(2) == 3 * (4 * 4 - 5 * 2));  // scale*(2^k x^2 + linear x)
}

TEST_CASE("make_reference_sequence dispatches by family") {
  const auto squares = discrim::make_reference_sequence(discrim::SquaresParams{}, 1);
  CHECK(squares.term(0) == 4);
  const auto linear =
      discrim::make_reference_sequence(discrim::LinearParams{5, 7}, 0);
  CHECK(linear.term(1) == 12);
  const auto quad =
      discrim::make_reference_sequence(discrim::QuadraticParams{1, 1, 1}, 0);
  CHECK(quad.term(1) == 3);
  CHECK(quad.family() == "quadratic");
}

TEST_CASE("reference sequences reject bad parameters") {
  CHECK_THROWS_AS(discrim::make_linear_sequence(0, 5, 0), std::domain_error);
  CHECK_THROWS_AS(discrim::make_quadratic_sequence(0, 1, 1, 0), std::domain_error);
  CHECK_THROWS_AS(discrim::make_quadratic_sequence(1, 2, 1, 0), std::domain_error);
  CHECK_THROWS_AS(discrim::make_quadratic_sequence(1, 1, 4, 0), std::domain_error);
}

TEST_CASE("residue equals term mod m across families") {
  const std::vector<SequenceHandle> handles = {
      discrim::make_exp_sequence(1, 3, 0),   discrim::make_exp_sequence(-3, 7, 2),
      discrim::make_exp_sequence(5, 15, 1),  discrim::make_squares_sequence(3),
      discrim::make_linear_sequence(-4, 9, 2), discrim::make_quadratic_sequence(2, 3, -1, 1),
  };
  for (const auto& h : handles)
    for (std::uint64_t i = 0; i <= 64; ++i) {
      const Int term = h.term(i);
      for (Int m = 1; m <= 256; ++m) {
        REQUIRE(h.residue(i, m) == normalized(term, m));
      }
    }
}

TEST_CASE("exp residue agrees across the word-size boundary") {
  // Large t forces the big-integer path; small t uses the word path. Both
  // must match plain term reduction.
  const Int big_t = (Int(1) << 40) + 3;
  const discrim::ExpSequence s(7, big_t, 1);
  for (std::uint64_t i = 0; i <= 6; ++i)
    for (Int m : {Int(2), Int(97), Int(1) << 45, (Int(1) << 70) + 1}) {
      REQUIRE(s.residue(i, m) == normalized(s.term(i), m));
    }
}

TEST_CASE("exp terms are pairwise distinct") {
  for (const auto& h :
       {discrim::make_exp_sequence(1, 3, 0), discrim::make_exp_sequence(-3, 5, 2)}) {
    std::set<Int> seen;
    for (std::uint64_t i = 0; i <= 128; ++i) REQUIRE(seen.insert(h.term(i)).second);
  }
}

TEST_CASE("scaled sequence wraps any base") {
  const discrim::ScaledSequence scaled(discrim::make_linear_sequence(1, 0, 0), Int(-3));
  CHECK(scaled.term(2) == -6);
  CHECK(scaled.residue(2, 7) == 1);  // -6 mod 7
  CHECK(scaled.is_injective());
  CHECK_THROWS_AS(discrim::ScaledSequence(discrim::make_squares_sequence(0), Int(0)),
                  std::domain_error);
}

TEST_CASE("handle reports its family and parameters") {
  const auto h = discrim::make_exp_sequence(1, 3, 2);
  CHECK(h.family() == "exp");
  const auto& params = std::get<discrim::ExpSequence>(h.impl()).params();
  CHECK(params.a == 1);
  CHECK(params.t == 3);
  CHECK(params.b == 3);
  CHECK(params.shift == 2);
}

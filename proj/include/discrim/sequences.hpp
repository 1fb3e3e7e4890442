#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string_view>
#include <type_traits>
#include <utility>
#include <variant>

#include "discrim/numtheory.hpp"

namespace discrim {

/// Least b >= 1 with t mod 2^b not in {1, 2^b - 1}. Defined for odd t with
/// |t| >= 3, and always >= 3 because every odd integer is +-1 modulo 4.
inline unsigned find_b(const Int& t) {
  if (t % 2 == 0) throw std::domain_error("find_b: t must be odd");
  if (t == 1 || t == -1) throw std::domain_error("find_b: undefined for t = +-1");
  const bool negative = t < 0;
  const Int abs_t = abs(t);
  for (unsigned b = 1;; ++b) {
    const Int pow2 = Int(1) << b;
    Int r = abs_t % pow2;
    if (negative) r = pow2 - r;  // r is odd, so never 0
    if (r != 1 && r != pow2 - 1) return b;
  }
}

/// Parameters of one exponential-family sequence a*((t^2)^(i+shift) - 1)/2^b.
/// b is derived from t at construction, never supplied by the caller.
struct ExpFamilyParams {
  Int a;                    // odd (hence nonzero)
  Int t;                    // odd, |t| >= 3
  unsigned b = 0;           // least b with t != +-1 (mod 2^b); always >= 3
  std::uint64_t shift = 0;  // c
};

class ExpSequence {
 public:
  ExpSequence(Int a, Int t, std::uint64_t shift) {
    if (a % 2 == 0) throw std::domain_error("exp family: a must be odd");
    const unsigned b = find_b(t);  // validates t
    t_squared_ = t * t;
    params_ = ExpFamilyParams{std::move(a), std::move(t), b, shift};
    if (detail::fits_u64(t_squared_)) t_squared_u64_ = t_squared_.convert_to<std::uint64_t>();
    if (params_.a >= std::numeric_limits<std::int64_t>::min() &&
        params_.a <= std::numeric_limits<std::int64_t>::max())
      a_i64_ = params_.a.convert_to<std::int64_t>();
  }

  const ExpFamilyParams& params() const { return params_; }

  /// Exact term a*((t^2)^(i+shift) - 1)/2^b. The division is exact because
  /// t^2 = 1 (mod 2^b).
  Int term(std::uint64_t i) const {
    const std::uint64_t e = exponent_of(i);
    if (e > std::numeric_limits<unsigned>::max())
      throw std::domain_error("exp family: term index too large to materialize");
    const Int power = boost::multiprecision::pow(t_squared_, static_cast<unsigned>(e));
    return params_.a * ((power - 1) >> params_.b);
  }

  /// term(i) mod m without forming the term: with M = 2^b * m and
  /// R = (t^2)^(i+shift) mod M, R = 1 (mod 2^b) and term(i) = a*(R-1)/2^b
  /// (mod m).
  Int residue(std::uint64_t i, const Int& m) const {
    if (m < 1) throw std::domain_error("residue: modulus must be >= 1");
    const std::uint64_t e = exponent_of(i);
    // Single-word path: modulus, base and scale all fit in 64-bit arithmetic.
    if (t_squared_u64_ && a_i64_ && params_.b < 62 && m < (Int(1) << (62 - params_.b))) {
      const std::uint64_t m64 = m.convert_to<std::uint64_t>();
      const std::uint64_t full = m64 << params_.b;
      const std::uint64_t r = detail::pow_mod_u64(*t_squared_u64_ % full, e, full);
      const std::uint64_t q = (r - 1) >> params_.b;  // r = 1 (mod 2^b), r >= 1
      const std::int64_t am = *a_i64_ % static_cast<std::int64_t>(m64);
      auto v = static_cast<std::int64_t>(
          static_cast<__int128>(am) * static_cast<std::int64_t>(q % m64) % static_cast<std::int64_t>(m64));
      if (v < 0) v += static_cast<std::int64_t>(m64);
      return v;
    }
    const Int full = (Int(1) << params_.b) * m;
    const Int r = mod_pow(t_squared_, e, full);
    return detail::normalize_mod(params_.a * ((r - 1) >> params_.b), m);
  }

  bool is_injective() const { return true; }  // |t^2| > 1 and a != 0: strictly monotone

 private:
  std::uint64_t exponent_of(std::uint64_t i) const {
    if (i > std::numeric_limits<std::uint64_t>::max() - params_.shift)
      throw std::domain_error("exp family: index + shift overflows");
    return i + params_.shift;
  }

  ExpFamilyParams params_;
  Int t_squared_;
  std::optional<std::uint64_t> t_squared_u64_;
  std::optional<std::int64_t> a_i64_;
};

/// (i + 1 + shift)^2: the positive squares, windowed by the shift.
class SquaresSequence {
 public:
  explicit SquaresSequence(std::uint64_t shift) : shift_(shift) {}

  std::uint64_t shift() const { return shift_; }

  Int term(std::uint64_t i) const {
    const Int base = Int(i) + 1 + shift_;
    return base * base;
  }

  Int residue(std::uint64_t i, const Int& m) const {
    if (m < 1) throw std::domain_error("residue: modulus must be >= 1");
    const Int base = (Int(i) + 1 + shift_) % m;
    return base * base % m;
  }

  bool is_injective() const { return true; }  // distinct positive bases

 private:
  std::uint64_t shift_ = 0;
};

/// slope*(i + shift) + offset with slope != 0.
class LinearSequence {
 public:
  LinearSequence(Int slope, Int offset, std::uint64_t shift)
      : slope_(std::move(slope)), offset_(std::move(offset)), shift_(shift) {
    if (slope_ == 0) throw std::domain_error("linear family: slope must be nonzero");
  }

  const Int& slope() const { return slope_; }
  const Int& offset() const { return offset_; }
  std::uint64_t shift() const { return shift_; }

  Int term(std::uint64_t i) const { return slope_ * (Int(i) + shift_) + offset_; }

  Int residue(std::uint64_t i, const Int& m) const {
    if (m < 1) throw std::domain_error("residue: modulus must be >= 1");
    return detail::normalize_mod(slope_ * ((Int(i) + shift_) % m) + offset_, m);
  }

  bool is_injective() const { return true; }  // nonzero slope

 private:
  Int slope_;
  Int offset_;
  std::uint64_t shift_ = 0;
};

/// scale*(2^k * x^2 + linear*x) with x = i + shift, k >= 1, scale and linear
/// odd.
class QuadraticSequence {
 public:
  QuadraticSequence(unsigned k, Int scale, Int linear, std::uint64_t shift)
      : k_(k), scale_(std::move(scale)), linear_(std::move(linear)), shift_(shift) {
    if (k_ < 1) throw std::domain_error("quadratic family: k must be >= 1");
    if (scale_ % 2 == 0) throw std::domain_error("quadratic family: scale must be odd");
    if (linear_ % 2 == 0) throw std::domain_error("quadratic family: linear coefficient must be odd");
  }

  unsigned k() const { return k_; }
  const Int& scale() const { return scale_; }
  const Int& linear() const { return linear_; }
  std::uint64_t shift() const { return shift_; }

  Int term(std::uint64_t i) const {
    const Int x = Int(i) + shift_;
    return scale_ * ((Int(1) << k_) * x * x + linear_ * x);
  }

  Int residue(std::uint64_t i, const Int& m) const {
    if (m < 1) throw std::domain_error("residue: modulus must be >= 1");
    const Int x = (Int(i) + shift_) % m;
    return detail::normalize_mod(scale_ * (((Int(1) << k_) % m) * x % m * x + linear_ * x), m);
  }

  // Injective over all integer x: equal terms at x1 != x2 would need
  // 2^k*(x1 + x2) = -linear, an even number equal to an odd one.
  bool is_injective() const { return true; }

 private:
  unsigned k_ = 1;
  Int scale_;
  Int linear_;
  std::uint64_t shift_ = 0;
};

/// Type-erased handle over the built-in families. Immutable after
/// construction and cheap to copy.
class SequenceHandle {
 public:
  using Impl = std::variant<ExpSequence, SquaresSequence, LinearSequence, QuadraticSequence>;

  SequenceHandle(ExpSequence s) : impl_(std::move(s)) {}
  SequenceHandle(SquaresSequence s) : impl_(std::move(s)) {}
  SequenceHandle(LinearSequence s) : impl_(std::move(s)) {}
  SequenceHandle(QuadraticSequence s) : impl_(std::move(s)) {}

  Int term(std::uint64_t i) const {
    return std::visit([&](const auto& s) { return s.term(i); }, impl_);
  }

  Int residue(std::uint64_t i, const Int& m) const {
    return std::visit([&](const auto& s) { return s.residue(i, m); }, impl_);
  }

  bool is_injective() const {
    return std::visit([](const auto& s) { return s.is_injective(); }, impl_);
  }

  std::string_view family() const {
    switch (impl_.index()) {
      case 0: return "exp";
      case 1: return "squares";
      case 2: return "linear";
      default: return "quadratic";
    }
  }

  const Impl& impl() const { return impl_; }

 private:
  Impl impl_;
};

inline SequenceHandle make_exp_sequence(Int a, Int t, std::uint64_t shift) {
  return SequenceHandle(ExpSequence(std::move(a), std::move(t), shift));
}

inline SequenceHandle make_squares_sequence(std::uint64_t shift) {
  return SequenceHandle(SquaresSequence(shift));
}

inline SequenceHandle make_linear_sequence(Int slope, Int offset, std::uint64_t shift) {
  return SequenceHandle(LinearSequence(std::move(slope), std::move(offset), shift));
}

inline SequenceHandle make_quadratic_sequence(unsigned k, Int scale, Int linear,
                                              std::uint64_t shift) {
  return SequenceHandle(QuadraticSequence(k, std::move(scale), std::move(linear), shift));
}

struct SquaresParams {};

struct LinearParams {
  Int slope;   // a, nonzero
  Int offset;  // b
};

struct QuadraticParams {
  unsigned k = 1;  // >= 1
  Int scale;       // odd
  Int linear;      // odd
};

using ReferenceParams = std::variant<SquaresParams, LinearParams, QuadraticParams>;

/// Factory for the non-exponential families; the variant alternative selects
/// the family.
inline SequenceHandle make_reference_sequence(const ReferenceParams& params, std::uint64_t shift) {
  return std::visit(
      [&](const auto& p) -> SequenceHandle {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, SquaresParams>)
          return make_squares_sequence(shift);
        else if constexpr (std::is_same_v<P, LinearParams>)
          return make_linear_sequence(p.slope, p.offset, shift);
        else
          return make_quadratic_sequence(p.k, p.scale, p.linear, shift);
      },
      params);
}

inline Int residue(const SequenceHandle& handle, std::uint64_t i, const Int& m) {
  return handle.residue(i, m);
}

/// factor * base(i). Scaling by a nonzero factor preserves injectivity; the
/// residue of the scaled sequence reduces the base residue, never the term.
template <typename S>
class ScaledSequence {
 public:
  ScaledSequence(S base, Int factor) : base_(std::move(base)), factor_(std::move(factor)) {
    if (factor_ == 0) throw std::domain_error("scaled sequence: factor must be nonzero");
  }

  const S& base() const { return base_; }
  const Int& factor() const { return factor_; }

  Int term(std::uint64_t i) const { return factor_ * base_.term(i); }

  Int residue(std::uint64_t i, const Int& m) const {
    if (m < 1) throw std::domain_error("residue: modulus must be >= 1");
    return detail::normalize_mod(factor_ * base_.residue(i, m), m);
  }

  bool is_injective() const {
    if constexpr (requires { { base_.is_injective() } -> std::convertible_to<bool>; })
      return base_.is_injective();
    else
      return false;  // let the engine check terms directly
  }

 private:
  S base_;
  Int factor_;
};

}  // namespace discrim

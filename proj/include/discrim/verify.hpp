#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "discrim/engine.hpp"
#include "discrim/exact.hpp"
#include "discrim/sequences.hpp"

namespace discrim {

inline constexpr std::uint64_t kDefaultMaxChecks = 10'000'000;

struct VerificationFailure {
  std::string parameters;
  std::string expected;
  std::string actual;
};

/// Outcome of one grid sweep.
struct VerificationReport {
  std::string target;
  std::string grid;
  std::uint64_t checks_run = 0;
  std::vector<VerificationFailure> failures;
  double elapsed_seconds = 0.0;

  bool ok() const { return failures.empty(); }
};

namespace detail {

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

inline std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
  const auto p = static_cast<unsigned __int128>(a) * b;
  constexpr auto top = std::numeric_limits<std::uint64_t>::max();
  return p > top ? top : static_cast<std::uint64_t>(p);
}

inline void enforce_check_budget(std::uint64_t planned, std::uint64_t max_checks) {
  if (planned > max_checks)
    throw std::invalid_argument("grid of " + std::to_string(planned) +
                                " checks exceeds the cap of " + std::to_string(max_checks));
}

inline std::string join(const std::vector<Int>& values) {
  std::string out;
  for (const Int& v : values) {
    if (!out.empty()) out += ',';
    out += v.str();
  }
  return out;
}

inline std::string join(const std::vector<std::uint64_t>& values) {
  std::string out;
  for (std::uint64_t v : values) {
    if (!out.empty()) out += ',';
    out += std::to_string(v);
  }
  return out;
}

}  // namespace detail

/// Sweeps the closed form against the brute-force engine: for every
/// (t, a, shift) the profile up to n_max must equal 2^ceil(log2 n).
inline VerificationReport check_theorem(const std::vector<Int>& ts, const std::vector<Int>& as,
                                        const std::vector<std::uint64_t>& shifts,
                                        std::uint64_t n_max,
                                        std::uint64_t max_checks = kDefaultMaxChecks) {
  VerificationReport rep;
  rep.target = "theorem";
  rep.grid = "t={" + detail::join(ts) + "} a={" + detail::join(as) + "} c={" +
             detail::join(shifts) + "} n=1.." + std::to_string(n_max);
  const auto planned = detail::sat_mul(
      detail::sat_mul(ts.size(), as.size()), detail::sat_mul(shifts.size(), n_max));
  detail::enforce_check_budget(planned, max_checks);
  detail::Stopwatch sw;
  for (const Int& t : ts)
    for (const Int& a : as)
      for (std::uint64_t c : shifts) {
        const ExpSequence seq(a, t, c);
        const auto profile = discriminator_profile(seq, n_max);
        for (std::uint64_t n = 1; n <= n_max; ++n) {
          ++rep.checks_run;
          const Int want = closed_form_discriminator(n);
          if (profile[n - 1].d != want)
            rep.failures.push_back({"t=" + t.str() + " a=" + a.str() + " c=" + std::to_string(c) +
                                        " n=" + std::to_string(n),
                                    want.str(), profile[n - 1].d.str()});
        }
      }
  rep.elapsed_seconds = sw.seconds();
  return rep;
}

/// t^2 = 2^b + 1 (mod 2^(b+1)) for every t.
inline VerificationReport check_lemma1(const std::vector<Int>& ts) {
  VerificationReport rep;
  rep.target = "lemma1";
  rep.grid = "t={" + detail::join(ts) + "}";
  detail::Stopwatch sw;
  for (const Int& t : ts) {
    ++rep.checks_run;
    if (!verify_lemma1(t)) {
      const unsigned b = find_b(t);
      rep.failures.push_back({"t=" + t.str() + " (b=" + std::to_string(b) + ")",
                              ((Int(1) << b) + 1).str(),
                              detail::normalize_mod(t * t, Int(1) << (b + 1)).str()});
    }
  }
  rep.elapsed_seconds = sw.seconds();
  return rep;
}

/// t^(2^k) = 2^(k+b-1) + 1 (mod 2^(k+b)) over the (t, k) grid.
inline VerificationReport check_lemma2(const std::vector<Int>& ts, unsigned k_max) {
  VerificationReport rep;
  rep.target = "lemma2";
  rep.grid = "t={" + detail::join(ts) + "} k=1.." + std::to_string(k_max);
  detail::Stopwatch sw;
  for (const Int& t : ts)
    for (unsigned k = 1; k <= k_max; ++k) {
      ++rep.checks_run;
      if (!verify_lemma2(t, k)) {
        const unsigned b = find_b(t);
        rep.failures.push_back(
            {"t=" + t.str() + " k=" + std::to_string(k) + " (b=" + std::to_string(b) + ")",
             ((Int(1) << (k + b - 1)) + 1).str(),
             mod_pow(t, Int(1) << k, Int(1) << (k + b)).str()});
      }
    }
  rep.elapsed_seconds = sw.seconds();
  return rep;
}

/// order(t^2 mod 2^(k+b)) = 2^k over the (t, k) grid.
inline VerificationReport check_corollary3(const std::vector<Int>& ts, unsigned k_max) {
  VerificationReport rep;
  rep.target = "corollary3";
  rep.grid = "t={" + detail::join(ts) + "} k=1.." + std::to_string(k_max);
  detail::Stopwatch sw;
  for (const Int& t : ts)
    for (unsigned k = 1; k <= k_max; ++k) {
      ++rep.checks_run;
      const Int order = order_of_t_squared(t, k);
      if (order != Int(1) << k)
        rep.failures.push_back({"t=" + t.str() + " k=" + std::to_string(k),
                                (Int(1) << k).str(), order.str()});
    }
  rep.elapsed_seconds = sw.seconds();
  return rep;
}

/// Witness totality: collision_witness must produce a verified pair for every
/// t, k in [0, k_max], and every m in [1, 2^(k+1)] (inclusive sweep).
inline VerificationReport check_lemma6(const std::vector<Int>& ts, unsigned k_max,
                                       std::uint64_t max_checks = kDefaultMaxChecks) {
  VerificationReport rep;
  rep.target = "lemma6";
  rep.grid = "t={" + detail::join(ts) + "} k=0.." + std::to_string(k_max) + " m=1..2^(k+1)";
  const auto per_t = k_max >= 62 ? std::numeric_limits<std::uint64_t>::max()
                                 : (std::uint64_t(1) << (k_max + 2)) - 2;  // sum of 2^(k+1)
  detail::enforce_check_budget(detail::sat_mul(ts.size(), per_t), max_checks);
  detail::Stopwatch sw;
  for (const Int& t : ts)
    for (unsigned k = 0; k <= k_max; ++k) {
      const Int m_hi = Int(1) << (k + 1);
      for (Int m = 1; m <= m_hi; ++m) {
        ++rep.checks_run;
        try {
          collision_witness(t, k, m);
        } catch (const invariant_error& e) {
          rep.failures.push_back(
              {"t=" + t.str() + " k=" + std::to_string(k) + " m=" + m.str(),
               "witness pair with i < j <= 2^k and (t^2)^i == (t^2)^j (mod 2^b*m)", e.what()});
        }
      }
    }
  rep.elapsed_seconds = sw.seconds();
  return rep;
}

/// Scaling transfer: wherever gcd(|scale|, D_base(n)) = 1, the scaled
/// sequence's brute-force discriminator must equal the base one. Grid points
/// whose gcd hypothesis fails count as (vacuous) checks.
inline VerificationReport check_lemma7(const std::vector<Int>& ts, const std::vector<Int>& scales,
                                       std::uint64_t n_max,
                                       std::uint64_t max_checks = kDefaultMaxChecks) {
  VerificationReport rep;
  rep.target = "lemma7";
  rep.grid = "bases: exp(a=1,t={" + detail::join(ts) + "},c=0), linear(1,0), linear(5,7); scale={" +
             detail::join(scales) + "} n=1.." + std::to_string(n_max);

  struct Base {
    std::string label;
    SequenceHandle handle;
  };
  std::vector<Base> bases;
  for (const Int& t : ts) bases.push_back({"exp t=" + t.str(), make_exp_sequence(1, t, 0)});
  bases.push_back({"linear a=1 b=0", make_linear_sequence(1, 0, 0)});
  bases.push_back({"linear a=5 b=7", make_linear_sequence(5, 7, 0)});

  detail::enforce_check_budget(
      detail::sat_mul(detail::sat_mul(bases.size(), scales.size()), n_max), max_checks);
  detail::Stopwatch sw;
  for (const auto& base : bases) {
    const auto base_profile = discriminator_profile(base.handle, n_max);
    for (const Int& s : scales) {
      std::optional<std::vector<DiscriminatorRecord>> scaled_profile;
      for (std::uint64_t n = 1; n <= n_max; ++n) {
        ++rep.checks_run;
        const Int& d_base = base_profile[n - 1].d;
        if (!scaled_discriminator_transfer(d_base, s)) continue;  // hypothesis not met
        if (!scaled_profile)
          scaled_profile = discriminator_profile(ScaledSequence(base.handle, s), n_max);
        const Int& d_scaled = (*scaled_profile)[n - 1].d;
        if (d_scaled != d_base)
          rep.failures.push_back({base.label + " scale=" + s.str() + " n=" + std::to_string(n),
                                  d_base.str(), d_scaled.str()});
      }
    }
  }
  rep.elapsed_seconds = sw.seconds();
  return rep;
}

struct ScanDivergence {
  std::uint64_t shift = 0;
  std::uint64_t n = 0;
  Int d;
  Int baseline_d;
};

struct ScanError {
  std::uint64_t shift = 0;
  std::string message;
};

/// Outcome of a shift-invariance scan. baseline holds the d values at the
/// smallest shift; the scan stops at the first diverging (shift, n).
struct ScanReport {
  std::vector<std::uint64_t> shifts;
  std::uint64_t n_max = 0;
  std::vector<Int> baseline;
  std::optional<ScanDivergence> divergence;
  std::vector<ScanError> errors;
  double elapsed_seconds = 0.0;

  bool invariant() const { return !divergence && errors.empty() && !baseline.empty(); }
};

/// Brute-force profile at every shift, compared to the profile at the
/// smallest one. make_shifted(c) must build the family instance at shift c.
template <typename MakeFn>
  requires requires(MakeFn&& f, std::uint64_t c) {
    { f(c) } -> Sequence;
  }
ScanReport scan_shift_invariance(MakeFn&& make_shifted, std::vector<std::uint64_t> shifts,
                                 std::uint64_t n_max) {
  if (shifts.empty()) throw std::invalid_argument("scan: shift list must be nonempty");
  if (n_max < 1) throw std::domain_error("scan: n_max must be >= 1");
  std::sort(shifts.begin(), shifts.end());
  shifts.erase(std::unique(shifts.begin(), shifts.end()), shifts.end());

  ScanReport rep;
  rep.shifts = shifts;
  rep.n_max = n_max;
  detail::Stopwatch sw;
  for (std::uint64_t shift : shifts) {
    std::vector<DiscriminatorRecord> profile;
    try {
      profile = discriminator_profile(make_shifted(shift), n_max);
    } catch (const std::domain_error& e) {
      rep.errors.push_back({shift, e.what()});
      if (rep.baseline.empty()) break;  // nothing to compare against
      continue;
    }
    if (rep.baseline.empty()) {
      rep.baseline.reserve(n_max);
      for (const auto& r : profile) rep.baseline.push_back(r.d);
      continue;
    }
    for (std::uint64_t n = 1; n <= n_max; ++n)
      if (profile[n - 1].d != rep.baseline[n - 1]) {
        rep.divergence = ScanDivergence{shift, n, profile[n - 1].d, rep.baseline[n - 1]};
        break;
      }
    if (rep.divergence) break;
  }
  rep.elapsed_seconds = sw.seconds();
  return rep;
}

}  // namespace discrim

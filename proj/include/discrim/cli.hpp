#pragma once

#include <charconv>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "discrim/engine.hpp"
#include "discrim/exact.hpp"
#include "discrim/sequences.hpp"
#include "discrim/verify.hpp"

namespace discrim::cli {

using ojson = nlohmann::ordered_json;

inline constexpr std::size_t kMaxRangeItems = 1'000'000;
inline constexpr std::uint64_t kMaxWindow = std::uint64_t(1) << 32;

/// Grammar for grid flags: comma lists ("3,5,7"), inclusive ranges ("0..8"),
/// and mixes ("1,4..6,9"). Throws std::invalid_argument on anything else.
inline std::vector<long long> parse_range_list(const std::string& text) {
  std::vector<long long> out;
  const auto parse_ll = [](std::string_view tok) {
    long long v{};
    const auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || p != tok.data() + tok.size())
      throw std::invalid_argument("range list: bad integer '" + std::string(tok) + "'");
    return v;
  };
  const auto push = [&out](long long v) {
    if (out.size() >= kMaxRangeItems)
      throw std::invalid_argument("range list: more than " + std::to_string(kMaxRangeItems) +
                                  " values");
    out.push_back(v);
  };
  std::string_view rest = text;
  while (true) {
    const auto comma = rest.find(',');
    const std::string_view tok = rest.substr(0, comma);
    if (tok.empty()) throw std::invalid_argument("range list: empty element in '" + text + "'");
    const auto dots = tok.find("..");
    if (dots == std::string_view::npos) {
      push(parse_ll(tok));
    } else {
      const long long lo = parse_ll(tok.substr(0, dots));
      const long long hi = parse_ll(tok.substr(dots + 2));
      if (lo > hi)
        throw std::invalid_argument("range list: descending range '" + std::string(tok) + "'");
      for (long long v = lo;; ++v) {
        push(v);
        if (v == hi) break;
      }
    }
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  return out;
}

namespace detail {

inline ojson json_int(const Int& v) {
  static const Int limit = Int(1) << 53;
  if (v > -limit && v < limit) return v.convert_to<std::int64_t>();
  return v.str();
}

inline std::vector<Int> to_int_list(const std::vector<long long>& v) {
  return std::vector<Int>(v.begin(), v.end());
}

inline std::vector<std::uint64_t> to_shift_list(const std::vector<long long>& v) {
  std::vector<std::uint64_t> out;
  out.reserve(v.size());
  for (long long x : v) {
    if (x < 0) throw std::invalid_argument("shifts must be >= 0");
    out.push_back(static_cast<std::uint64_t>(x));
  }
  return out;
}

/// Family-parameter flags shared by `disc` and `scan`.
struct FamilyOptions {
  std::string family;
  long long t = 0;
  long long a = 0;
  long long b = 0;
  unsigned k = 1;
  long long c1 = 1;
  long long b1 = 1;
};

inline void add_family_options(CLI::App& cmd, FamilyOptions& o) {
  cmd.add_option("--family", o.family, "exp | squares | linear | quadratic")
      ->required()
      ->check(CLI::IsMember({"exp", "squares", "linear", "quadratic"}));
  cmd.add_option("--t", o.t, "exp family: odd t with |t| >= 3");
  cmd.add_option("--a", o.a, "exp family: odd scale / linear family: nonzero slope");
  cmd.add_option("--b", o.b, "linear family: offset (default 0)");
  cmd.add_option("--k", o.k, "quadratic family: power-of-two exponent, >= 1");
  cmd.add_option("--c1", o.c1, "quadratic family: odd overall scale");
  cmd.add_option("--b1", o.b1, "quadratic family: odd linear coefficient");
}

inline void check_family_flags(const CLI::App& cmd, std::string_view family,
                               std::initializer_list<std::string_view> allowed,
                               std::initializer_list<std::string_view> required) {
  static constexpr std::string_view kFamilyFlags[] = {"--t", "--a", "--b", "--k", "--c1", "--b1"};
  for (std::string_view f : kFamilyFlags) {
    if (cmd.count(std::string(f)) == 0) continue;
    bool ok = false;
    for (std::string_view g : allowed) ok = ok || g == f;
    if (!ok)
      throw std::invalid_argument("option " + std::string(f) + " does not apply to family '" +
                                  std::string(family) + "'");
  }
  for (std::string_view f : required)
    if (cmd.count(std::string(f)) == 0)
      throw std::invalid_argument("family '" + std::string(family) + "' requires " +
                                  std::string(f));
}

/// Validates flag/family consistency and constructs the handle at `shift`.
inline SequenceHandle build_family_handle(const CLI::App& cmd, const FamilyOptions& o,
                                          std::uint64_t shift) {
  if (o.family == "exp") {
    check_family_flags(cmd, o.family, {"--t", "--a"}, {"--t", "--a"});
    return make_exp_sequence(o.a, o.t, shift);
  }
  if (o.family == "squares") {
    check_family_flags(cmd, o.family, {}, {});
    return make_squares_sequence(shift);
  }
  if (o.family == "linear") {
    check_family_flags(cmd, o.family, {"--a", "--b"}, {"--a"});
    return make_linear_sequence(o.a, o.b, shift);
  }
  check_family_flags(cmd, o.family, {"--k", "--c1", "--b1"}, {"--k", "--c1", "--b1"});
  return make_quadratic_sequence(o.k, o.c1, o.b1, shift);
}

/// Echoes the family-identifying fields in the pinned order.
inline void put_family_fields(ojson& j, const FamilyOptions& o, const SequenceHandle& handle,
                              std::optional<std::uint64_t> shift) {
  j["family"] = o.family;
  if (o.family == "exp") {
    j["t"] = o.t;
    j["a"] = o.a;
    j["b"] = std::get<ExpSequence>(handle.impl()).params().b;  // always echoed, always derived
  } else if (o.family == "linear") {
    j["a"] = o.a;
    j["b"] = o.b;
  } else if (o.family == "quadratic") {
    j["k"] = o.k;
    j["c1"] = o.c1;
    j["b1"] = o.b1;
  }
  if (shift) j["c"] = *shift;
}

struct DiscOptions {
  FamilyOptions fam;
  std::uint64_t c = 0;
  std::optional<std::uint64_t> n;
  std::optional<std::uint64_t> n_max;
  std::string mode = "brute";
  std::string format = "jsonl";
  bool show_terms = false;
};

inline int run_disc(const CLI::App& cmd, const DiscOptions& o, std::ostream& out) {
  if (o.n.has_value() == o.n_max.has_value())
    throw std::invalid_argument("disc: exactly one of --n / --n-max is required");
  const std::uint64_t window = o.n ? *o.n : *o.n_max;
  if (window > kMaxWindow) throw std::invalid_argument("disc: window exceeds 2^32");
  if (o.show_terms && o.format == "tsv")
    throw std::invalid_argument("disc: --show-terms requires --format jsonl");
  if (o.mode == "closed" && o.fam.family != "exp")
    throw std::invalid_argument("disc: closed mode is only defined for the exp family");

  const SequenceHandle handle = build_family_handle(cmd, o.fam, o.c);

  std::vector<DiscriminatorRecord> records;
  if (o.mode == "closed") {
    const std::uint64_t lo = o.n ? *o.n : 1;
    for (std::uint64_t n = lo; n <= window; ++n)
      records.push_back({n, closed_form_discriminator(n), std::nullopt});
  } else if (o.n) {
    records.push_back(discriminator(handle, *o.n));
  } else {
    records = discriminator_profile(handle, *o.n_max);
  }

  if (o.format == "tsv") {
    out << "n\td\n";
    for (const auto& r : records) out << r.n << '\t' << r.d.str() << '\n';
    return 0;
  }
  for (const auto& r : records) {
    ojson j;
    put_family_fields(j, o.fam, handle, o.c);
    j["n"] = r.n;
    j["d"] = json_int(r.d);
    if (o.show_terms) {
      auto terms = ojson::array();
      for (std::uint64_t i = 0; i < r.n; ++i) terms.push_back(handle.term(i).str());
      j["terms"] = std::move(terms);
    }
    out << j.dump() << "\n";
  }
  return 0;
}

struct WitnessOptions {
  long long t = 0;
  unsigned k = 0;
  long long m = 0;
};

inline int run_witness(const WitnessOptions& o, std::ostream& out) {
  const CollisionWitness w = collision_witness(o.t, o.k, o.m);
  ojson j;
  j["t"] = json_int(w.t);
  j["b"] = w.b;
  j["k"] = w.k;
  j["m"] = json_int(w.m);
  j["i"] = json_int(w.i);
  j["j"] = json_int(w.j);
  j["modulus_full"] = json_int(w.modulus_full);
  j["verified"] = true;  // collision_witness re-verifies before returning
  out << j.dump() << "\n";
  return 0;
}

inline int emit_report(const VerificationReport& rep, std::ostream& out) {
  ojson j;
  j["target"] = rep.target;
  j["grid"] = rep.grid;
  j["checks_run"] = rep.checks_run;
  auto failures = ojson::array();
  for (const auto& f : rep.failures) {
    ojson e;
    e["parameters"] = f.parameters;
    e["expected"] = f.expected;
    e["actual"] = f.actual;
    failures.push_back(std::move(e));
  }
  j["failures"] = std::move(failures);
  j["elapsed_seconds"] = rep.elapsed_seconds;
  out << j.dump() << "\n";
  return rep.ok() ? 0 : 1;
}

struct VerifyOptions {
  std::string t;
  std::string a;
  std::string c;
  std::string scale;
  std::uint64_t n_max = 0;
  unsigned k_max = 0;
  std::uint64_t max_checks = kDefaultMaxChecks;
};

struct ScanOptions {
  FamilyOptions fam;
  std::string shifts = "0..8";
  std::uint64_t n_max = 64;
};

inline int run_scan(const CLI::App& cmd, const ScanOptions& o, std::ostream& out) {
  if (o.n_max > kMaxWindow) throw std::invalid_argument("scan: window exceeds 2^32");
  const auto shifts = to_shift_list(parse_range_list(o.shifts));
  // Validate family parameters eagerly: a bad flag combination must be a
  // usage error, not a per-shift report entry.
  const SequenceHandle probe = build_family_handle(cmd, o.fam, shifts.empty() ? 0 : shifts.front());
  const auto rep = scan_shift_invariance(
      [&](std::uint64_t c) { return build_family_handle(cmd, o.fam, c); }, shifts, o.n_max);

  ojson j;
  put_family_fields(j, o.fam, probe, std::nullopt);
  j["shifts"] = rep.shifts;
  j["n_max"] = rep.n_max;
  j["invariant"] = rep.invariant();
  auto profile = ojson::array();
  for (const Int& d : rep.baseline) profile.push_back(json_int(d));
  j["profile"] = std::move(profile);
  if (rep.divergence) {
    ojson d;
    d["c"] = rep.divergence->shift;
    d["n"] = rep.divergence->n;
    d["d"] = json_int(rep.divergence->d);
    d["baseline_d"] = json_int(rep.divergence->baseline_d);
    j["divergence"] = std::move(d);
  }
  auto errors = ojson::array();
  for (const auto& e : rep.errors) {
    ojson entry;
    entry["c"] = e.shift;
    entry["message"] = e.message;
    errors.push_back(std::move(entry));
  }
  j["errors"] = std::move(errors);
  j["elapsed_seconds"] = rep.elapsed_seconds;
  out << j.dump() << "\n";
  return rep.invariant() ? 0 : 1;
}

}  // namespace detail

/// Parses and runs one invocation. Returns the process exit code:
/// 0 success/verified, 1 verification failure, 2 usage or parameter error.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Integer-sequence discriminators: brute-force engine, closed forms, "
               "collision witnesses, and shift-invariance scans"};
  app.name("discrim");
  app.require_subcommand(1);

  // disc
  detail::DiscOptions disc_opts;
  CLI::App* disc_cmd = app.add_subcommand("disc", "Compute discriminator records");
  detail::add_family_options(*disc_cmd, disc_opts.fam);
  disc_cmd->add_option("--c", disc_opts.c, "shift (default 0)");
  disc_cmd->add_option("--n", disc_opts.n, "single window length");
  disc_cmd->add_option("--n-max", disc_opts.n_max, "emit records for n = 1..n_max");
  disc_cmd->add_option("--mode", disc_opts.mode, "brute | closed (closed: exp only)")
      ->check(CLI::IsMember({"brute", "closed"}));
  disc_cmd->add_option("--format", disc_opts.format, "jsonl | tsv")
      ->check(CLI::IsMember({"jsonl", "tsv"}));
  disc_cmd->add_flag("--show-terms", disc_opts.show_terms,
                     "include exact terms as decimal strings (jsonl only)");

  // witness
  detail::WitnessOptions wit_opts;
  CLI::App* wit_cmd = app.add_subcommand("witness", "Construct and verify a collision witness");
  wit_cmd->add_option("--t", wit_opts.t, "odd t with |t| >= 3")->required();
  wit_cmd->add_option("--k", wit_opts.k, "bound parameter, 0..40")
      ->required()
      ->check(CLI::Range(0u, 40u));
  wit_cmd->add_option("--m", wit_opts.m, "modulus, 1 <= m <= 2^(k+1)")->required();

  // verify
  CLI::App* verify_cmd =
      app.add_subcommand("verify", "Sweep a parameter grid and report failures");
  verify_cmd->require_subcommand(1);
  const std::string default_t = "3,5,7,9,11,15,17";

  detail::VerifyOptions theorem_opts{default_t, "1,3,5,-3", "0..8", "", 256, 0, kDefaultMaxChecks};
  CLI::App* theorem_cmd =
      verify_cmd->add_subcommand("theorem", "brute-force profile == 2^ceil(log2 n)");
  theorem_cmd->add_option("--t", theorem_opts.t, "t grid (range list)");
  theorem_cmd->add_option("--a", theorem_opts.a, "a grid (range list)");
  theorem_cmd->add_option("--c", theorem_opts.c, "shift grid (range list)");
  theorem_cmd->add_option("--n-max", theorem_opts.n_max, "window lengths 1..n_max");
  theorem_cmd->add_option("--max-checks", theorem_opts.max_checks, "grid size cap");

  detail::VerifyOptions lemma1_opts{default_t, "", "", "", 0, 0, kDefaultMaxChecks};
  CLI::App* lemma1_cmd =
      verify_cmd->add_subcommand("lemma1", "t^2 == 2^b + 1 (mod 2^(b+1))");
  lemma1_cmd->add_option("--t", lemma1_opts.t, "t grid (range list)");

  detail::VerifyOptions lemma2_opts{default_t, "", "", "", 0, 12, kDefaultMaxChecks};
  CLI::App* lemma2_cmd =
      verify_cmd->add_subcommand("lemma2", "t^(2^k) == 2^(k+b-1) + 1 (mod 2^(k+b))");
  lemma2_cmd->add_option("--t", lemma2_opts.t, "t grid (range list)");
  lemma2_cmd->add_option("--k-max", lemma2_opts.k_max, "k = 1..k_max")->check(CLI::Range(1u, 40u));

  detail::VerifyOptions coro3_opts{default_t, "", "", "", 0, 10, kDefaultMaxChecks};
  CLI::App* coro3_cmd =
      verify_cmd->add_subcommand("corollary3", "order of t^2 mod 2^(k+b) == 2^k");
  coro3_cmd->add_option("--t", coro3_opts.t, "t grid (range list)");
  coro3_cmd->add_option("--k-max", coro3_opts.k_max, "k = 1..k_max")->check(CLI::Range(1u, 30u));

  detail::VerifyOptions lemma6_opts{"3,5,7,9,15", "", "", "", 0, 8, kDefaultMaxChecks};
  CLI::App* lemma6_cmd = verify_cmd->add_subcommand(
      "lemma6", "witness totality over every m in [1, 2^(k+1)] (inclusive)");
  lemma6_cmd->add_option("--t", lemma6_opts.t, "t grid (range list)");
  lemma6_cmd->add_option("--k-max", lemma6_opts.k_max, "k = 0..k_max")->check(CLI::Range(0u, 30u));
  lemma6_cmd->add_option("--max-checks", lemma6_opts.max_checks, "grid size cap");

  detail::VerifyOptions lemma7_opts{"3,5,7", "", "", "3,-3,5,-5,7", 64, 0, kDefaultMaxChecks};
  CLI::App* lemma7_cmd = verify_cmd->add_subcommand(
      "lemma7", "scaled discriminator equals base wherever gcd(|scale|, d) == 1");
  lemma7_cmd->add_option("--t", lemma7_opts.t, "exp-base t grid (range list)");
  lemma7_cmd->add_option("--scale", lemma7_opts.scale, "scale grid (range list)");
  lemma7_cmd->add_option("--n-max", lemma7_opts.n_max, "window lengths 1..n_max");
  lemma7_cmd->add_option("--max-checks", lemma7_opts.max_checks, "grid size cap");

  // scan
  detail::ScanOptions scan_opts;
  CLI::App* scan_cmd =
      app.add_subcommand("scan", "Compare brute-force profiles across shifts");
  detail::add_family_options(*scan_cmd, scan_opts.fam);
  scan_cmd->add_option("--shifts", scan_opts.shifts, "shift grid (range list, default 0..8)");
  scan_cmd->add_option("--n-max", scan_opts.n_max, "window lengths 1..n_max (default 64)");

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("discrim");
  for (const auto& s : args) argv.push_back(s.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
    if (disc_cmd->parsed()) return detail::run_disc(*disc_cmd, disc_opts, out);
    if (wit_cmd->parsed()) return detail::run_witness(wit_opts, out);
    if (scan_cmd->parsed()) return detail::run_scan(*scan_cmd, scan_opts, out);
    if (theorem_cmd->parsed())
      return detail::emit_report(
          check_theorem(detail::to_int_list(parse_range_list(theorem_opts.t)),
                        detail::to_int_list(parse_range_list(theorem_opts.a)),
                        detail::to_shift_list(parse_range_list(theorem_opts.c)),
                        theorem_opts.n_max, theorem_opts.max_checks),
          out);
    if (lemma1_cmd->parsed())
      return detail::emit_report(check_lemma1(detail::to_int_list(parse_range_list(lemma1_opts.t))),
                                 out);
    if (lemma2_cmd->parsed())
      return detail::emit_report(
          check_lemma2(detail::to_int_list(parse_range_list(lemma2_opts.t)), lemma2_opts.k_max),
          out);
    if (coro3_cmd->parsed())
      return detail::emit_report(
          check_corollary3(detail::to_int_list(parse_range_list(coro3_opts.t)), coro3_opts.k_max),
          out);
    if (lemma6_cmd->parsed())
      return detail::emit_report(
          check_lemma6(detail::to_int_list(parse_range_list(lemma6_opts.t)), lemma6_opts.k_max,
                       lemma6_opts.max_checks),
          out);
    if (lemma7_cmd->parsed())
      return detail::emit_report(
          check_lemma7(detail::to_int_list(parse_range_list(lemma7_opts.t)),
                       detail::to_int_list(parse_range_list(lemma7_opts.scale)),
                       lemma7_opts.n_max, lemma7_opts.max_checks),
          out);
    throw std::invalid_argument("no subcommand given");
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  } catch (const invariant_error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace discrim::cli

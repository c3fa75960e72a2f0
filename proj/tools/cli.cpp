#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>

#include "lucasmon/dirichlet.hpp"
#include "lucasmon/errors.hpp"
#include "lucasmon/io.hpp"
#include "lucasmon/monoid.hpp"
#include "lucasmon/stats.hpp"

namespace lucasmon::cli {
namespace {

using nlohmann::json;

struct Global {
  std::int64_t p = 1;
  std::int64_t q = -1;
  std::string preset;
  std::string format;
  std::string output;
  unsigned threads = 1;
  int precision_bits = 53;
};

struct Options {
  int n_max = 20;
  std::uint64_t x = 0;
  std::uint64_t n = 0;
  double u = 1;
  double v = 0;
  std::vector<std::uint64_t> xs;
  std::vector<double> us;
  std::vector<double> rs;
  double height = 0;
  int truncation = 0;
  int exact_terms = 2000;
  double tol = -1;
  std::string mode = "d";
  std::uint64_t seed = LimitLawConfig{}.rng_seed;
  int samples = 100'000;
  std::string values_csv;
  std::string bfile;
  std::string stream = "monoid";
};

// Thrown by verify commands when a check fails after the output is written.
struct VerificationFailure : Error {
  using Error::Error;
};

LucasParams resolve_params(const Global& g) {
  if (g.preset == "fibonacci") return LucasParams::fibonacci();
  if (g.preset == "pell") return LucasParams::pell();
  if (g.preset == "mersenne") return LucasParams::mersenne();
  return LucasParams::make(g.p, g.q);
}

std::string format_or(const Global& g, const char* fallback) { return g.format.empty() ? fallback : g.format; }

void require_format(const std::string& fmt, std::initializer_list<const char*> allowed) {
  for (const char* a : allowed) {
    if (fmt == a) return;
  }
  throw DomainError("format '" + fmt + "' is not available for this command");
}

std::string factorization_string(const GeneratorSet& gens, std::uint64_t n, const Factorization& f) {
  if (f.parts.empty()) return std::to_string(n) + " = 1 (empty product)";
  std::string lhs, rhs;
  for (const auto& [idx, mult] : f.parts) {
    const std::string power = mult > 1 ? "^" + std::to_string(mult) : "";
    if (!lhs.empty()) {
      lhs += "·";
      rhs += "·";
    }
    lhs += "F[" + std::to_string(idx) + "]" + power;
    rhs += gens.value(idx).get_str() + power;
  }
  return std::to_string(n) + " = " + lhs + " (" + rhs + ")";
}

std::string indices_string(const Factorization& f) {
  std::string s;
  for (const auto& [idx, mult] : f.parts) {
    if (!s.empty()) s += "·";
    s += "F[" + std::to_string(idx) + "]";
    if (mult > 1) s += "^" + std::to_string(mult);
  }
  return s;
}

json summary_json(const EmpiricalSummary& s) {
  return {{"x", s.x},
          {"n_elements", s.n_elements},
          {"raw_mean", s.raw_mean},
          {"raw_variance", s.raw_variance},
          {"center", s.norm.center},
          {"scale", s.norm.scale},
          {"mean", s.mean},
          {"variance", s.variance},
          {"skewness", s.skewness},
          {"ks_distance_to_reference", s.ks_distance_to_reference}};
}

EvalConfig eval_config(const Options& o) {
  EvalConfig cfg;
  cfg.product_truncation = o.truncation;
  cfg.integral_height = o.height;
  return cfg;
}

void cmd_terms(const Global& g, const Options& o, std::ostream& out) {
  const LucasParams params = resolve_params(g);
  if (o.n_max < 1) throw DomainError("--n-max must be at least 1");
  const auto values = lucas_values(params, o.n_max);
  const std::string fmt = format_or(g, "csv");
  require_format(fmt, {"csv", "json"});
  json rows = json::array();
  std::optional<CsvWriter> csv;
  if (fmt == "csv") csv.emplace(out, std::vector<std::string>{"n", "value", "primitive_divisor"});
  for (int n = 1; n <= o.n_max; ++n) {
    const auto witness = primitive_divisor(params, n);
    const std::string w = witness ? witness->get_str() : "-";
    if (csv) {
      *csv << n << values[static_cast<std::size_t>(n)] << w;
      csv->end_row();
    } else {
      rows.push_back({{"n", n}, {"value", values[static_cast<std::size_t>(n)].get_str()}, {"primitive_divisor", w}});
    }
  }
  if (!csv) out << rows.dump(2) << '\n';
}

void cmd_generators(const Global& g, const Options& o, std::ostream& out) {
  const GeneratorSet gens = GeneratorSet::build(resolve_params(g));
  const std::string fmt = format_or(g, "csv");
  require_format(fmt, {"csv", "json"});
  if (fmt == "json") {
    out << generators_json(gens, o.n_max).dump(2) << '\n';
    return;
  }
  CsvWriter csv(out, {"index", "value", "primitive_prime"});
  auto row = [&](const Generator& gen) {
    csv << gen.term.index << gen.term.value << gen.primitive_prime;
    csv.end_row();
  };
  for (const auto& gen : gens.f0()) {
    if (gen.term.index <= o.n_max) row(gen);
  }
  for (int n = GeneratorSet::kFirstTailIndex; n <= o.n_max; ++n) row(gens.generator(n));
}

void cmd_enumerate(const Global& g, const Options& o, std::ostream& out) {
  const GeneratorSet gens = GeneratorSet::build(resolve_params(g));
  EnumConfig cfg;
  cfg.threads = g.threads;
  const auto elements = enumerate_upto(gens, o.x, cfg);
  const std::string fmt = format_or(g, "csv");
  require_format(fmt, {"csv", "json"});
  if (fmt == "csv") {
    CsvWriter csv(out, {"value", "omega", "Omega", "factorization"});
    for (const auto& e : elements) {
      csv << e.value << e.factorization.omega() << e.factorization.Omega() << indices_string(e.factorization);
      csv.end_row();
    }
    return;
  }
  json rows = json::array();
  for (const auto& e : elements) {
    json parts = json::array();
    for (const auto& [idx, mult] : e.factorization.parts) parts.push_back({idx, mult});
    rows.push_back({{"value", e.value}, {"omega", e.factorization.omega()},
                    {"Omega", e.factorization.Omega()}, {"factorization", parts}});
  }
  out << rows.dump(2) << '\n';
}

void cmd_count(const Global& g, const Options& o, std::ostream& out) {
  const GeneratorSet gens = GeneratorSet::build(resolve_params(g));
  EnumConfig cfg;
  cfg.threads = g.threads;
  const std::uint64_t c = count_upto(gens, o.x, cfg);
  const std::string fmt = format_or(g, "text");
  require_format(fmt, {"text", "json"});
  if (fmt == "json") {
    out << json{{"x", o.x}, {"count", c}}.dump(2) << '\n';
  } else {
    out << c << '\n';
  }
}

void cmd_factor(const Global& g, const Options& o, std::ostream& out) {
  const GeneratorSet gens = GeneratorSet::build(resolve_params(g));
  const Factorization f = factorize_element(gens, o.n);
  const std::string fmt = format_or(g, "text");
  require_format(fmt, {"text", "json"});
  if (fmt == "text") {
    out << factorization_string(gens, o.n, f) << '\n';
    return;
  }
  json parts = json::array();
  for (const auto& [idx, mult] : f.parts) {
    parts.push_back({{"index", idx}, {"value", gens.value(idx).get_str()}, {"multiplicity", mult}});
  }
  out << json{{"n", o.n}, {"omega", f.omega()}, {"Omega", f.Omega()}, {"factors", parts}}.dump(2) << '\n';
}

void cmd_constants(const Global& g, std::ostream& out) {
  require_format(format_or(g, "json"), {"json"});
  const GeneratorSet gens = GeneratorSet::build(resolve_params(g));
  out << to_json(constants_bundle(gens)).dump(2) << '\n';
}

void cmd_verify_mellin(const Global& g, const Options& o, std::ostream& out) {
  require_format(format_or(g, "csv"), {"csv"});
  const GeneratorSet gens = GeneratorSet::build(resolve_params(g));
  const double tol = o.tol > 0 ? o.tol : 1e-3;
  const std::vector<std::uint64_t> xs = o.xs.empty() ? std::vector<std::uint64_t>{100, 1000} : o.xs;
  const std::vector<double> us = o.us.empty() ? std::vector<double>{0.8, 1.0, 1.2} : o.us;
  const EvalConfig cfg = eval_config(o);
  CsvWriter csv(out, {"x", "u", "r", "integral", "smoothed_sum", "rel_err", "tol"});
  int failures = 0;
  for (std::uint64_t x : xs) {
    for (double u : us) {
      const double r = saddle_r(gens.params(), static_cast<double>(x), u);
      const auto m = mellin_perron_integral(gens, static_cast<double>(x), u, r, cfg);
      const double s = weighted_sum(gens, x, u, Statistic::omega, Weight::smoothed);
      const double rel = std::abs(m.integral - s) / std::abs(s);
      if (!(rel <= tol)) ++failures;
      csv << static_cast<unsigned long long>(x) << u << r << m.integral << s << rel << tol;
      csv.end_row();
    }
  }
  if (failures > 0) throw VerificationFailure(std::to_string(failures) + " Mellin-Perron rows exceed tol");
}

void cmd_verify_dirichlet(const Global& g, const Options& o, std::ostream& out) {
  require_format(format_or(g, "csv"), {"csv"});
  const GeneratorSet gens = GeneratorSet::build(resolve_params(g));
  const double tol = o.tol > 0 ? o.tol : 0.2;
  const std::vector<double> rs = o.rs.empty() ? std::vector<double>{0.2, 0.1, 0.05} : o.rs;
  for (std::size_t i = 1; i < rs.size(); ++i) {
    if (!(rs[i] < rs[i - 1])) throw DomainError("--r values must decrease");
  }
  const EvalConfig cfg = eval_config(o);
  CsvWriter csv(out, {"r", "u", "residual", "tol"});
  std::vector<double> residuals;
  for (double r : rs) {
    double res = 0;
    double u = o.u;
    if (o.mode == "D") {
      // v = log(u) / r is held fixed, so u moves with r.
      u = std::exp(o.v * r);
      res = D_central_check(gens, r, u, cfg).residual;
    } else {
      const double ld = log_d(gens, cplx(r, 0), o.u, cfg).log_value.real();
      res = ld - a_of_u(gens.params(), o.u) / r - b_const(gens) * std::log(r) - c_of_u(gens, o.u);
    }
    residuals.push_back(res);
    csv << r << u << res << tol;
    csv.end_row();
  }
  for (std::size_t i = 1; i < residuals.size(); ++i) {
    if (!(std::abs(residuals[i]) < std::abs(residuals[i - 1]))) {
      throw VerificationFailure("residuals do not decrease with r");
    }
  }
  if (!(std::abs(residuals.back()) <= tol)) throw VerificationFailure("final residual exceeds tol");
}

LimitLawConfig limit_config(const Global& g, const Options& o) {
  LimitLawConfig lc;
  lc.n_samples = o.samples;
  lc.rng_seed = o.seed;
  lc.truncation_M = o.truncation;
  lc.exact_terms = o.exact_terms;
  lc.threads = g.threads;
  return lc;
}

void cmd_stats(const Global& g, const Options& o, std::ostream& out) {
  require_format(format_or(g, "json"), {"json"});
  const GeneratorSet gens = GeneratorSet::build(resolve_params(g));
  EnumConfig cfg;
  cfg.threads = g.threads;
  const LimitLawSample lim = sample_limit_law(gens, limit_config(g, o));
  const auto w = omega_summary(gens, o.x, cfg);
  const auto W = Omega_summary(gens, o.x, lim.draws, cfg);
  json j = {{"x", o.x},
            {"omega", summary_json(w)},
            {"Omega", summary_json(W)},
            {"limit_law",
             {{"seed", lim.config.rng_seed},
              {"M", lim.config.truncation_M},
              {"exact_terms", lim.config.exact_terms},
              {"n_samples", lim.config.n_samples},
              {"variance", lim.variance}}}};
  out << j.dump(2) << '\n';
  if (!o.values_csv.empty()) {
    std::ofstream f(o.values_csv);
    if (!f) throw Error("cannot write '" + o.values_csv + "'");
    const auto zw = normalized_values(gens, o.x, Statistic::omega, cfg);
    const auto zW = normalized_values(gens, o.x, Statistic::Omega, cfg);
    CsvWriter csv(f, {"omega_normalized", "Omega_normalized"});
    for (std::size_t i = 0; i < zw.size(); ++i) {
      csv << zw[i] << zW[i];
      csv.end_row();
    }
  }
}

void cmd_simulate_limit(const Global& g, const Options& o, std::ostream& out) {
  const std::string fmt = format_or(g, "csv");
  require_format(fmt, {"csv", "json"});
  const GeneratorSet gens = GeneratorSet::build(resolve_params(g));
  const LimitLawSample s = sample_limit_law(gens, limit_config(g, o));
  if (fmt == "json") {
    out << json{{"config",
                 {{"seed", s.config.rng_seed},
                  {"M", s.config.truncation_M},
                  {"exact_terms", s.config.exact_terms},
                  {"n_samples", s.config.n_samples},
                  {"variance", s.variance}}},
                {"draws", s.draws}}
               .dump(2)
        << '\n';
    return;
  }
  out << "# seed=" << s.config.rng_seed << "\n# M=" << s.config.truncation_M
      << "\n# exact_terms=" << s.config.exact_terms << "\n# n_samples=" << s.config.n_samples
      << "\n# variance=" << format_double(s.variance) << '\n';
  CsvWriter csv(out, {"i", "draw"});
  for (std::size_t i = 0; i < s.draws.size(); ++i) {
    csv << static_cast<unsigned long long>(i) << s.draws[i];
    csv.end_row();
  }
}

void cmd_oeis_check(const Global& g, const Options& o, std::ostream& out) {
  const std::string fmt = format_or(g, "text");
  require_format(fmt, {"text", "json"});
  const auto bfile = read_bfile(o.bfile);
  const LucasParams params = resolve_params(g);
  std::vector<BigInt> stream;
  if (o.stream == "terms") {
    if (!bfile.empty()) {
      const long long first = bfile.front().index;
      const long long last = bfile.back().index;
      if (first < 0) throw DomainError("sequence indices start at 0");
      const auto values = lucas_values(params, static_cast<int>(last));
      stream.assign(values.begin() + first, values.end());
    }
  } else {
    std::uint64_t bound = o.x;
    if (bound == 0) {
      bound = 1;
      for (const auto& e : bfile) {
        if (e.value > BigInt(std::to_string(kMaxBound))) throw DomainError("b-file values too large; pass --x");
        if (e.value > 0 && e.value.get_ui() > bound) bound = e.value.get_ui();
      }
    }
    EnumConfig cfg;
    cfg.threads = g.threads;
    for (const auto& e : enumerate_upto(GeneratorSet::build(params), bound, cfg)) {
      stream.emplace_back(std::to_string(e.value));
    }
  }
  const PrefixComparison cmp = compare_prefix(bfile, stream);
  if (fmt == "json") {
    json j = {{"bfile_terms", bfile.size()},
              {"computed_terms", stream.size()},
              {"compared", cmp.compared},
              {"agreement", cmp.agreement},
              {"agrees", cmp.agrees()}};
    if (!cmp.agrees()) {
      j["mismatch"] = {{"index", *cmp.mismatch_index},
                       {"expected", cmp.expected.get_str()},
                       {"actual", cmp.actual.get_str()}};
    }
    out << j.dump(2) << '\n';
  } else if (cmp.agrees()) {
    out << "agreement over " << cmp.agreement << " terms (b-file " << bfile.size() << ", computed "
        << stream.size() << ")\n";
  } else {
    out << "mismatch at index " << *cmp.mismatch_index << ": b-file " << cmp.expected.get_str()
        << ", computed " << cmp.actual.get_str() << " (agreement over " << cmp.agreement << " terms)\n";
  }
  if (!cmp.agrees()) throw VerificationFailure("b-file disagrees with the computed stream");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Lucas sequence generator monoids: enumeration, constants and numerical checks", "lucasmon"};
  app.require_subcommand(1);
  app.fallthrough();
  Global g;
  Options o;

  auto* p_opt = app.add_option("--p", g.p, "P, the sum of the characteristic roots")->envname("LUCASMON_P");
  auto* q_opt = app.add_option("--q", g.q, "Q, the product of the characteristic roots")->envname("LUCASMON_Q");
  app.add_option("--preset", g.preset, "Named parameters")
      ->check(CLI::IsMember({"fibonacci", "pell", "mersenne"}))
      ->envname("LUCASMON_PRESET")
      ->excludes(p_opt)
      ->excludes(q_opt);
  app.add_option("--format", g.format, "Output format")
      ->check(CLI::IsMember({"csv", "json", "text"}))
      ->envname("LUCASMON_FORMAT");
  app.add_option("--output", g.output, "Write output to this file")->envname("LUCASMON_OUTPUT");
  app.add_option("--threads", g.threads, "Worker threads")
      ->check(CLI::Range(1u, 256u))
      ->envname("LUCASMON_THREADS");
  app.add_option("--precision-bits", g.precision_bits, "Working precision; only 53 is available")
      ->envname("LUCASMON_PRECISION_BITS");

  auto* terms = app.add_subcommand("terms", "Sequence terms with a primitive prime divisor or '-'");
  terms->add_option("--n-max", o.n_max, "Largest index")->envname("LUCASMON_N_MAX");

  auto* generators = app.add_subcommand("generators", "Generators with sequence index <= n-max");
  generators->add_option("--n-max", o.n_max, "Largest index")->envname("LUCASMON_N_MAX");

  auto* enumerate = app.add_subcommand("enumerate", "Monoid elements <= x with factorizations");
  enumerate->add_option("--x", o.x, "Bound")->required()->check(CLI::Range(std::uint64_t{1}, kMaxBound));

  auto* count = app.add_subcommand("count", "Number of monoid elements <= x");
  count->add_option("--x", o.x, "Bound")->required()->check(CLI::Range(std::uint64_t{1}, kMaxBound));

  auto* factor = app.add_subcommand("factor", "Factorization of a monoid element into generators");
  factor->add_option("--n", o.n, "Element")->required()->check(CLI::PositiveNumber);

  auto* constants = app.add_subcommand("constants", "Constants of the counting and limit theorems as JSON");

  auto* mellin = app.add_subcommand("verify-mellin", "Contour integral against the enumerated smoothed sum");
  mellin->add_option("--x", o.xs, "Bounds (repeatable)");
  mellin->add_option("--u", o.us, "Weights (repeatable)");
  mellin->add_option("--height", o.height, "Half-height of the integration line");
  mellin->add_option("--truncation", o.truncation, "Generators in the product");
  mellin->add_option("--tol", o.tol, "Relative tolerance (default 1e-3)");

  auto* dirichlet = app.add_subcommand("verify-dirichlet", "Residuals of the log d / log D central expansion");
  dirichlet->add_option("--r", o.rs, "Decreasing radii (repeatable)");
  dirichlet->add_option("--u", o.u, "Weight (mode d)");
  dirichlet->add_option("--v", o.v, "log(u) / r, held fixed (mode D)");
  dirichlet->add_option("--mode", o.mode, "d (omega) or D (Omega)")->check(CLI::IsMember({"d", "D"}));
  dirichlet->add_option("--truncation", o.truncation, "Generators in the product");
  dirichlet->add_option("--tol", o.tol, "Bound on the last residual (default 0.2)");

  auto* stats = app.add_subcommand("stats", "Normalized omega / Omega summaries as JSON");
  stats->add_option("--x", o.x, "Bound")->required()->check(CLI::Range(std::uint64_t{1}, kMaxBound));
  stats->add_option("--samples", o.samples, "Limit-law draws")->envname("LUCASMON_SAMPLES");
  stats->add_option("--seed", o.seed, "RNG seed")->envname("LUCASMON_SEED");
  stats->add_option("--truncation", o.truncation, "Generators in the limit-law sum");
  stats->add_option("--values-csv", o.values_csv, "Also write normalized values here");

  auto* simulate = app.add_subcommand("simulate-limit", "Draws from the shifted-exponential limit law");
  simulate->add_option("--samples", o.samples, "Number of draws")->envname("LUCASMON_SAMPLES");
  simulate->add_option("--seed", o.seed, "RNG seed")->envname("LUCASMON_SEED");
  simulate->add_option("--truncation", o.truncation, "Generators in the sum (0 = automatic)");
  simulate->add_option("--exact-terms", o.exact_terms, "Generators sampled term by term");

  auto* oeis = app.add_subcommand("oeis-check", "Compare a local OEIS b-file with computed values");
  oeis->add_option("--bfile", o.bfile, "b-file path")->required();
  oeis->add_option("--stream", o.stream, "monoid elements or sequence terms")
      ->check(CLI::IsMember({"monoid", "terms"}));
  oeis->add_option("--x", o.x, "Enumeration bound (default: largest b-file value)");

  // CLI11 takes the arguments reversed and without the program name.
  std::vector<std::string> reversed(args.begin() + (args.empty() ? 0 : 1), args.end());
  std::reverse(reversed.begin(), reversed.end());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  std::ofstream file;
  if (!g.output.empty()) {
    file.open(g.output);
    if (!file) {
      err << "error: cannot write '" << g.output << "'\n";
      return 1;
    }
  }
  std::ostream& dest = g.output.empty() ? out : file;

  try {
    if (g.precision_bits != 53) {
      throw DomainError("--precision-bits: this build evaluates in IEEE double (53 bits)");
    }
    if (app.got_subcommand(terms)) cmd_terms(g, o, dest);
    else if (app.got_subcommand(generators)) cmd_generators(g, o, dest);
    else if (app.got_subcommand(enumerate)) cmd_enumerate(g, o, dest);
    else if (app.got_subcommand(count)) cmd_count(g, o, dest);
    else if (app.got_subcommand(factor)) cmd_factor(g, o, dest);
    else if (app.got_subcommand(constants)) cmd_constants(g, dest);
    else if (app.got_subcommand(mellin)) cmd_verify_mellin(g, o, dest);
    else if (app.got_subcommand(dirichlet)) cmd_verify_dirichlet(g, o, dest);
    else if (app.got_subcommand(stats)) cmd_stats(g, o, dest);
    else if (app.got_subcommand(simulate)) cmd_simulate_limit(g, o, dest);
    else if (app.got_subcommand(oeis)) cmd_oeis_check(g, o, dest);
  } catch (const VerificationFailure& e) {
    err << "verification failed: " << e.what() << '\n';
    return 4;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const MembershipError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const ResourceError& e) {
    err << "resource limit: " << e.what() << '\n';
    return 3;
  } catch (const FactorizationError& e) {
    err << "resource limit: " << e.what() << '\n';
    return 3;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return 4;
  } catch (const ConfigError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return 4;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace lucasmon::cli

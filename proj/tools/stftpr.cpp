// stftpr: measurement synthesis, window analysis, reconstruction and counterexamples
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "acceptance/criteria.hpp"
#include "stftpr/adversary.hpp"
#include "stftpr/io.hpp"
#include "stftpr/line.hpp"
#include "stftpr/random.hpp"
#include "stftpr/recovery.hpp"

using namespace stftpr;
using io::json;

namespace {

constexpr int kExitUsage = 64;
constexpr int kExitData = 65;
constexpr int kExitSoftware = 70;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Config {
  std::size_t d = 0;
  std::size_t L = 0;
  std::optional<std::uint64_t> seed;
  Tolerances tol;
  std::string rule = "relative";
  std::string signal, window, measurement, out;
  std::string format;
  std::string mode = "auto";
  std::string kind;
  long k = 0, l = 0;
  std::size_t r = 0;
  std::optional<long> extent;
  std::optional<long> anchor;
  std::size_t terms = 5;
  bool line = false;
  std::string embedded_window;
};

std::uint64_t require_seed(const Config& c) {
  if (c.seed) return *c.seed;
  if (const char* env = std::getenv("STFTPR_SEED")) {
    char* end = nullptr;
    const auto v = std::strtoull(env, &end, 10);
    if (end && *end == '\0' && *env) return v;
    throw UsageError("STFTPR_SEED is not an unsigned integer");
  }
  throw UsageError("this command is randomized: pass --seed or set STFTPR_SEED");
}

std::size_t require_d(const Config& c) {
  if (c.d < 2) throw UsageError("--d is required (d >= 2)");
  return c.d;
}

const std::string& require(const std::string& v, const char* flag) {
  if (v.empty()) throw UsageError(std::string(flag) + " is required");
  return v;
}

MaskOptions mask_options(const Config& c) {
  MaskOptions o;
  o.rule = c.rule == "roundoff" ? ThresholdRule::Roundoff : ThresholdRule::RelativeToMax;
  o.tau_rel = c.tol.tau_rel;
  return o;
}

void emit(const Config& c, const std::string& text) {
  if (c.out.empty()) std::cout << text;
  else io::write_text_file(c.out, text);
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

int status_code(RecoveryStatus s) {
  switch (s) {
    case RecoveryStatus::UniqueUpToGlobalPhase: return 0;
    case RecoveryStatus::UniquePerComponent: return 2;
    case RecoveryStatus::Inconsistent: return 3;
    case RecoveryStatus::Undecidable: return 4;
  }
  return kExitSoftware;
}

int verdict_code(Verdict v) {
  switch (v) {
    case Verdict::Retrievable: return 0;
    case Verdict::NotRetrievable: return 2;
    case Verdict::Undecidable: return 4;
  }
  return kExitSoftware;
}

SparseLine as_line(const CyclicSignal& s) {
  SparseLine out;
  const long o = s.origin_offset().value_or(0);
  for (std::size_t j = 0; j < s.dim(); ++j)
    if (s.entries()[j] != Complex(0)) out[o + static_cast<long>(j)] = s.entries()[j];
  return out;
}

json line_to_json(const SparseLine& s) {
  json pos = json::array(), re = json::array(), im = json::array();
  for (const auto& [j, v] : s) {
    pos.push_back(j);
    re.push_back(io::round12(v.real()));
    im.push_back(io::round12(v.imag()));
  }
  return {{"positions", pos}, {"re", re}, {"im", im}};
}

int cmd_measure(const Config& c) {
  CyclicSignal f = io::read_signal_file(require(c.signal, "--signal"));
  CyclicSignal g = io::read_signal_file(require(c.window, "--window"));
  if (c.line) {
    // both inputs are finite signals on Z; origin_offset gives the first index
    const LineEmbedding e = embed_line(as_line(f), as_line(g));
    f = e.f;
    g = e.g;
    std::cerr << "line embedding: d = " << e.d << ", signal extent = " << e.f_extent << "\n";
    if (!c.embedded_window.empty()) io::write_text_file(c.embedded_window, dump(io::signal_to_json(g)));
  } else if (f.dim() != g.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "signal and window disagree on d");
  }
  const auto X = measure(f, g);
  const std::string fmt = c.format.empty() ? "csv" : c.format;
  if (fmt == "json") {
    emit(c, dump(io::measurement_to_json(X)));
  } else {
    std::ostringstream os;
    io::write_measurement_csv(os, X);
    emit(c, os.str());
  }
  return 0;
}

int cmd_window_analyze(const Config& c) {
  const CyclicSignal g = io::read_signal_file(require(c.window, "--window"));
  emit(c, dump(io::report_to_json(analyze_window(g, mask_options(c)))));
  return 0;
}

int cmd_window_construct(const Config& c) {
  const std::string& kind = require(c.kind, "--kind");
  json j{{"kind", kind}};
  if (kind == "line-difference") {
    if (c.terms < 1) throw UsageError("--terms must be positive");
    Rng rng(require_seed(c));
    std::vector<Complex> coeffs(c.terms);
    for (auto& v : coeffs) v = rng.unit();
    const SparseLine g = construct_line_difference_window(coeffs);
    std::vector<long> pos;
    for (const auto& [p, v] : g) pos.push_back(p);
    j["window"] = line_to_json(g);
    j["difference_set"] = difference_set(pos, std::nullopt).members;
    emit(c, dump(j));
    return 0;
  }
  CyclicSignal g = CyclicSignal::zeros(std::max<std::size_t>(c.d, 2));
  MaskOptions opts = mask_options(c);
  if (kind == "power") {
    g = construct_power_window(require_d(c), c.L);
  } else if (kind == "punctured-center") {
    g = construct_punctured_center_window(require_d(c));
    opts.rule = ThresholdRule::Roundoff;
  } else if (kind == "punctured-dc") {
    g = construct_punctured_dc_window(require_d(c), require_seed(c));
    opts.rule = ThresholdRule::Roundoff;
    j["lstar"] = lstar(static_cast<long>(c.d));
  } else if (kind == "vanishing") {
    Rng rng(require_seed(c));
    if (c.L < 2) throw UsageError("--L must be at least 2 for a vanishing window");
    g = construct_vanishing_window(require_d(c), random_vector(c.L, rng), c.k, c.l);
  } else if (kind == "small-d") {
    g = small_d_window(require_d(c), c.k, c.l);
    opts.rule = ThresholdRule::Roundoff;
  } else {
    throw UsageError("unknown --kind " + kind);
  }
  const json report = io::report_to_json(analyze_window(g, opts));
  for (auto it = report.begin(); it != report.end(); ++it) j[it.key()] = it.value();
  emit(c, dump(j));
  return 0;
}

std::optional<Route> parse_route(const std::string& mode) {
  if (mode == "full") return Route::Full;
  if (mode == "generic") return Route::GenericShort;
  if (mode == "center") return Route::Center;
  if (mode == "dcpair") return Route::DcPair;
  return std::nullopt;
}

int cmd_recover(const Config& c) {
  const auto X = io::read_measurement_file(require(c.measurement, "--measurement"));
  const CyclicSignal g = io::read_signal_file(require(c.window, "--window"));
  if (g.dim() != X.dim()) throw Error(ErrorCode::DimensionMismatch, "measurement and window disagree on d");
  RecoveryOutcome out;
  if (c.mode == "line") {
    if (!c.extent) throw UsageError("--mode line needs --extent");
    out = recover_line(X, g, *c.extent, c.tol);
  } else {
    const WindowReport report = analyze_window(g, mask_options(c));
    if (c.mode == "auto") {
      out = recover_auto(X, report, c.tol);
    } else if (c.mode == "hole") {
      if (c.anchor) {
        const std::size_t L = report.short_L ? *report.short_L : throw Error(ErrorCode::NotShortWindow, "hole recovery needs a short window");
        const CanonicalProblem cp = canonicalize(X, g);
        const auto b = measurement_coeffs(cp.X, L);
        const bool long_hole = std::abs(b.b[0][wrap(*c.anchor, X.dim())]) <= c.tol.tau_supp * [&] {
          double s = 0;
          for (auto v : b.b[0]) s = std::max(s, std::abs(v));
          return s;
        }();
        out = recover_with_hole(X, g, L, *c.anchor, long_hole ? L + 1 : L, c.tol);
      } else {
        out = recover_with_route(X, report, Route::HoleLong, c.tol);
        if (out.status == RecoveryStatus::Undecidable) out = recover_with_route(X, report, Route::HoleShort, c.tol);
      }
    } else if (auto route = parse_route(c.mode)) {
      out = recover_with_route(X, report, *route, c.tol);
    } else {
      throw UsageError("unknown --mode " + c.mode);
    }
  }
  out.tolerances = c.tol;
  if (c.format == "csv") {
    std::ostringstream os;
    if (out.estimate)
      for (auto v : out.estimate->entries()) os << io::fmt_complex(v) << "\n";
    emit(c, os.str());
  } else {
    emit(c, dump(io::outcome_to_json(out)));
  }
  return status_code(out.status);
}

int cmd_decide(const Config& c) {
  const auto X = io::read_measurement_file(require(c.measurement, "--measurement"));
  const CyclicSignal g = io::read_signal_file(require(c.window, "--window"));
  if (g.dim() != X.dim()) throw Error(ErrorCode::DimensionMismatch, "measurement and window disagree on d");
  const Decision dec = c.mode == "line" ? (c.extent ? decide_line(X, g, *c.extent, c.tol)
                                                    : throw UsageError("--mode line needs --extent"))
                                        : decide_retrievability(X, analyze_window(g, mask_options(c)), c.tol);
  emit(c, dump(io::decision_to_json(dec)));
  return verdict_code(dec.verdict);
}

int report_bundle(const Config& c, const CounterexampleBundle& b) {
  emit(c, dump(io::bundle_to_json(b)));
  std::cerr << "self-check " << (b.valid() ? "PASS" : "FAIL") << ": " << b.family << ", measurement gap "
            << io::fmt(b.max_measurement_gap) << ", phase distance " << io::fmt(b.pairwise_phase_err) << "\n";
  return b.valid() ? 0 : 1;
}

int cmd_counterexample(const Config& c, const std::string& family) {
  if (family == "periodic") {
    if (c.r == 0) throw UsageError("--r is required");
    return report_bundle(c, periodic_family(require_d(c), c.L, c.r));
  }
  if (family == "delta") {
    if (c.line) {
      SparseLine g;
      if (!c.window.empty()) g = as_line(io::read_signal_file(c.window));
      else g = {{0, 1.0}, {1, 1.0}};
      return report_bundle(c, delta_pair_line(c.k, g));
    }
    CyclicSignal g = CyclicSignal::zeros(require_d(c));
    if (!c.window.empty()) g = io::read_signal_file(c.window);
    else g(0) = g(1) = 1.0;
    return report_bundle(c, delta_pair_cyclic(c.k, g));
  }
  if (family == "real-even") {
    std::optional<CyclicSignal> g;
    if (!c.window.empty()) g = io::read_signal_file(c.window);
    return report_bundle(c, real_even_pair(g ? g->dim() : require_d(c), g, g ? 0 : require_seed(c)));
  }
  if (family == "small-d") return report_bundle(c, small_d_witness(require_d(c), c.k, c.l));
  throw UsageError("unknown counterexample family " + family);
}

int cmd_selftest(const Config& c) {
  const auto results = acceptance::run_all(require_seed(c), std::cout);
  int failed = 0;
  for (const auto& r : results) failed += !r.passed;
  std::cout << (results.size() - failed) << "/" << results.size() << " criteria passed\n";
  return failed ? 1 : 0;
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::MalformedInput:
    case ErrorCode::DimensionMismatch: return kExitData;
    case ErrorCode::InvalidArgument: return kExitUsage;
    case ErrorCode::RejectionExhausted:
    case ErrorCode::InvalidBundle:
    case ErrorCode::Internal: return kExitSoftware;
    default: return 4;  // the requested theorem does not apply to this input
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"STFT phase retrieval on Z_d and Z"};
  app.require_subcommand(1);
  app.fallthrough();
  Config c;

  app.add_option("--d", c.d, "dimension");
  app.add_option("--L", c.L, "window length parameter (support {0..L})");
  app.add_option("--seed", c.seed, "seed for randomized commands (fallback: STFTPR_SEED)");
  app.add_option("--tau-rel", c.tol.tau_rel, "relative threshold for zeros of the ambiguity function")
      ->check(CLI::PositiveNumber);
  app.add_option("--tau-supp", c.tol.tau_supp, "relative threshold for signal support and holes")
      ->check(CLI::PositiveNumber);
  app.add_option("--phase-tol", c.tol.phase_tol, "cycle-consistency tolerance in radians")->check(CLI::PositiveNumber);
  app.add_option("--residual-tol", c.tol.residual_tol, "relative residual that flags inconsistency")
      ->check(CLI::PositiveNumber);
  app.add_option("--threshold-rule", c.rule, "relative | roundoff")->check(CLI::IsMember({"relative", "roundoff"}));
  app.add_option("--signal", c.signal, "signal JSON");
  app.add_option("--window", c.window, "window JSON");
  app.add_option("--measurement", c.measurement, "measurement CSV (or .json)");
  app.add_option("--out", c.out, "output file (default stdout)");
  app.add_option("--format", c.format, "json | csv")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--mode", c.mode, "auto | full | generic | hole | center | dcpair | line");

  auto* measure_cmd = app.add_subcommand("measure", "spectrogram |V_g f|^2 as CSV");
  measure_cmd->add_flag("--line", c.line, "treat signal and window as finite signals on Z");
  measure_cmd->add_option("--embedded-window", c.embedded_window, "where to write the embedded window (line mode)");

  auto* window_cmd = app.add_subcommand("window", "analyze or construct windows");
  window_cmd->require_subcommand(1);
  auto* analyze_cmd = window_cmd->add_subcommand("analyze", "support, Omega(g), genericity");
  auto* construct_cmd = window_cmd->add_subcommand("construct", "build a window of a given kind");
  construct_cmd->add_option("--kind", c.kind, "power | punctured-center | punctured-dc | vanishing | small-d | line-difference");
  construct_cmd->add_option("--k", c.k, "row of the forced zero");
  construct_cmd->add_option("--l", c.l, "column of the forced zero");
  construct_cmd->add_option("--terms", c.terms, "number of terms (line-difference)");

  auto* recover_cmd = app.add_subcommand("recover", "reconstruct a signal up to phase");
  recover_cmd->add_option("--extent", c.extent, "line mode: signal lives on {0..extent} of the embedding");
  recover_cmd->add_option("--anchor", c.anchor, "hole mode: anchor index");

  auto* decide_cmd = app.add_subcommand("decide", "decide phase retrievability from the measurement");
  decide_cmd->add_option("--extent", c.extent, "line mode: signal lives on {0..extent} of the embedding");

  auto* cex_cmd = app.add_subcommand("counterexample", "generate and self-check a counterexample bundle");
  cex_cmd->require_subcommand(1);
  auto* cex_periodic = cex_cmd->add_subcommand("periodic", "comb translates under a box window");
  cex_periodic->add_option("--r", c.r, "comb spacing");
  auto* cex_delta = cex_cmd->add_subcommand("delta", "delta_0 +- delta_k with k outside D_g");
  cex_delta->add_option("--k", c.k, "shift");
  cex_delta->add_flag("--line", c.line, "window is a finite signal on Z");
  auto* cex_real = cex_cmd->add_subcommand("real-even", "f and its reflection under a real window");
  auto* cex_small = cex_cmd->add_subcommand("small-d", "witness for a punctured entry, d in {2,3}");
  cex_small->add_option("--k", c.k, "row");
  cex_small->add_option("--l", c.l, "column");

  auto* selftest_cmd = app.add_subcommand("selftest", "run the acceptance suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*measure_cmd) return cmd_measure(c);
    if (*analyze_cmd) return cmd_window_analyze(c);
    if (*construct_cmd) return cmd_window_construct(c);
    if (*recover_cmd) return cmd_recover(c);
    if (*decide_cmd) return cmd_decide(c);
    if (*cex_periodic) return cmd_counterexample(c, "periodic");
    if (*cex_delta) return cmd_counterexample(c, "delta");
    if (*cex_real) return cmd_counterexample(c, "real-even");
    if (*cex_small) return cmd_counterexample(c, "small-d");
    if (*selftest_cmd) return cmd_selftest(c);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "error (" << to_string(e.code()) << "): " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSoftware;
  }
  return kExitUsage;
}

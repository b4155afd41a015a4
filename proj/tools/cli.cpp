#include "debate/cli.hpp"

#include "debate/constructions.hpp"
#include "debate/error.hpp"
#include "debate/io.hpp"
#include "debate/qmw.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <iostream>

namespace debate {

namespace {

using io::Json;

struct Options {
  std::string source;
  std::string input;
  std::string output;
  std::string format = "text";
  std::string mode;
  std::string epsilon = "1/4";
  std::string horizon;
  std::string construction;
  std::string direction = "pre-reject";
  std::string kind;
  std::string p1_file, p0_file, emit_p1;
  std::string threshold;
  std::optional<unsigned> c, r, t, input_length, simulations;
  unsigned depth = 8;
  std::uint64_t samples = 10000, seed = 1, steps = 100'000'000;
  std::uint64_t sim_horizon = 1'000'000;
  unsigned threads = 0;
  bool exact = false;
  bool shared_menu = false;
};

// Text reports are "key: value" lines; structured reports are one JSON object.
void emit_report(const Json& report, const Options& o, std::ostream& out) {
  if (o.format == "json") {
    out << report.dump(2) << '\n';
    return;
  }
  for (const auto& [key, value] : report.items())
    out << key << ": " << (value.is_string() ? value.get<std::string>() : value.dump()) << '\n';
}

void emit_document(const Json& doc, const Options& o, std::ostream& out, Json summary) {
  if (o.output.empty() || o.output == "-") {
    out << doc.dump(2) << '\n';
    return;
  }
  io::write_json_file(o.output, doc);
  summary["written"] = o.output;
  emit_report(summary, o, out);
}

Rational epsilon_of(const Options& o) { return parse_rational(o.epsilon); }

std::optional<BigInt> horizon_of(const Options& o) {
  if (o.horizon.empty() || o.horizon == "auto") return std::nullopt;
  if (!std::all_of(o.horizon.begin(), o.horizon.end(), [](char ch) { return ch >= '0' && ch <= '9'; }))
    fail(ErrorCode::usage, "horizon must be a nonnegative integer or 'auto'");
  return BigInt(o.horizon);
}

DebateMode mode_of(const Options& o, const VerifierSpec& spec) {
  return o.mode.empty() ? spec.natural_mode() : parse_debate_mode(o.mode);
}

VerifierSpec load_verifier(const std::string& path) { return io::verifier_from_json(io::read_json_file(path)); }

MultiheadAlternatingMachine load_normalized(const Json& doc) {
  auto machine = io::automaton_from_json(doc);
  return machine.is_normalized() ? machine : normalize_alternation(machine);
}

Json summary_of(const VerifierSpec& spec) {
  Json s;
  s["verifier"] = spec.name;
  s["symbols"] = spec.symbols.size();
  s["coin_budget"] = spec.coin_budget ? std::to_string(*spec.coin_budget) : std::string("unbounded");
  s["natural_mode"] = to_string(spec.natural_mode());
  return s;
}

int cmd_compile(const Options& o, std::ostream& out) {
  const Json doc = io::read_json_file(o.source);
  const Rational eps = epsilon_of(o);
  CompiledVerifier cv;
  const std::string& k = o.construction;
  if (k == "cdeb") {
    cv = compile_cdeb_from_2afa(load_normalized(doc), o.c, eps);
  } else if (k == "zdeb") {
    cv = compile_zdeb_from_2bafa(load_normalized(doc));
  } else if (k == "pdeb") {
    cv = compile_pdeb_from_2pafa(load_normalized(doc));
  } else if (k == "window") {
    if (!o.t || !o.input_length) fail(ErrorCode::usage, "window needs --t and --input-length");
    WindowParams p;
    p.t = *o.t;
    p.epsilon = eps;
    p.simulations = o.simulations;
    if (!o.mode.empty()) {
      const DebateMode m = parse_debate_mode(o.mode);
      if (m == DebateMode::partial) fail(ErrorCode::usage, "window mode is complete or zero");
      p.mode = m == DebateMode::zero ? WindowMode::zero : WindowMode::complete;
    }
    cv = compile_window_verifier_from_atm(io::atm_from_json(doc), *o.input_length, p);
  } else if (k == "amplify") {
    cv.spec = io::verifier_from_json(doc);
  } else {
    fail(ErrorCode::usage, "unknown construction '" + k + "' (cdeb|zdeb|pdeb|window|amplify)");
  }
  if (k == "amplify" || o.r) {
    if (!o.r) fail(ErrorCode::usage, "amplify needs --r");
    AmplifierParams p;
    p.r = *o.r;
    p.direction = parse_amplify_direction(o.direction);
    cv = amplify(cv, p);
  }
  emit_document(io::to_json(cv.spec), o, out, summary_of(cv.spec));
  return 0;
}

int cmd_solve(const Options& o, std::ostream& out) {
  const VerifierSpec spec = load_verifier(o.source);
  const DebateMode mode = mode_of(o, spec);
  const Rational eps = epsilon_of(o);
  const auto horizon = horizon_of(o);
  const CheckReport strong = check_strong(spec, o.input, mode, eps, horizon);
  const CheckReport weak = check_weak(spec, o.input, mode, eps, horizon);
  Json r;
  r["verifier"] = spec.name;
  r["input"] = o.input;
  r["mode"] = to_string(mode);
  r["epsilon"] = to_string(eps);
  r["horizon"] = strong.accept.horizon_text;
  r["accept_value"] = to_string(strong.accept.value);
  r["reject_value"] = strong.reject ? to_string(strong.reject->value) : std::string("-");
  r["truncated"] = strong.accept.truncated || (strong.reject && strong.reject->truncated);
  r["strong"] = to_string(strong.side);
  r["weak"] = to_string(weak.side);
  if (!o.emit_p1.empty()) {
    DebateSolver solver(spec, o.input, mode);
    auto s1 = solver.prover_strategy(ValueKind::accept_maxmin);
    io::write_json_file(o.emit_p1, io::to_json(io::materialize(*s1, spec, o.depth), spec));
    r["p1_strategy"] = o.emit_p1;
  }
  emit_report(r, o, out);
  return 0;
}

int cmd_simulate(const Options& o, std::ostream& out) {
  const VerifierSpec spec = load_verifier(o.source);
  if (o.p1_file.empty() || o.p0_file.empty()) fail(ErrorCode::usage, "simulate needs --p1 and --p0 strategy files");
  auto s1 = io::p1_strategy_from_json(io::read_json_file(o.p1_file), spec);
  auto s0 = io::p0_strategy_from_json(io::read_json_file(o.p0_file), spec);
  if (o.samples == 0) fail(ErrorCode::usage, "--samples must be at least 1");
  MonteCarloOptions mc;
  mc.horizon = o.sim_horizon;
  mc.threads = o.threads;
  const auto result = monte_carlo_estimate(spec, o.input, *s1, *s0, o.samples, o.seed, mc);
  Json r;
  r["verifier"] = spec.name;
  r["input"] = o.input;
  r["samples"] = result.samples;
  r["seed"] = o.seed;
  r["accept"] = result.accept;
  r["reject"] = result.reject;
  r["unresolved"] = result.unresolved;
  r["accept_frequency"] = result.accept_frequency();
  r["reject_frequency"] = result.reject_frequency();
  if (o.exact) {
    const Outcome exact = acceptance_probability(spec, o.input, *s1, *s0, o.sim_horizon);
    r["exact_accept"] = to_string(exact.accept);
    r["exact_reject"] = to_string(exact.reject);
    r["exact_unresolved"] = to_string(exact.unresolved);
  }
  emit_report(r, o, out);
  return 0;
}

int cmd_qmw(const std::string& action, const Options& o, std::ostream& out) {
  if (action == "reduce") {
    if (!o.t) fail(ErrorCode::usage, "qmw reduce needs --t");
    const VerifierSpec spec = load_verifier(o.source);
    const QmwInstance q = reduce_cdeb_to_qmw(spec, o.input, *o.t, epsilon_of(o));
    Json s;
    s["instance"] = q.name;
    s["dimension"] = q.dimension;
    s["prefix"] = q.prefix;
    s["threshold"] = to_string(q.threshold);
    emit_document(io::to_json(q), o, out, s);
    return 0;
  }
  QmwInstance q = io::qmw_from_json(io::read_json_file(o.source));
  if (!o.threshold.empty()) q.threshold = parse_rational(o.threshold);
  if (o.shared_menu) q.validate_shared_menu();
  Json r;
  r["instance"] = q.name;
  r["threshold"] = to_string(q.threshold);
  if (action == "eval") {
    r["result"] = qmw_eval(q) ? "true" : "false";
  } else {
    r["omega"] = to_string(max_qmw(q));
  }
  emit_report(r, o, out);
  return 0;
}

int cmd_convert(const Options& o, std::ostream& out) {
  const Json doc = io::read_json_file(o.source);
  if (o.kind == "patm-to-verifier") {
    AlternatingTM m = io::document_type(doc) == "automaton" ? to_alternating_tm(load_normalized(doc)) : io::atm_from_json(doc);
    const CompiledVerifier cv = patm_to_verifier(m);
    emit_document(io::to_json(cv.spec), o, out, summary_of(cv.spec));
  } else if (o.kind == "verifier-to-patm" || o.kind == "verifier-to-alternating") {
    const VerifierSpec spec = io::verifier_from_json(doc);
    const AlternatingTM m =
        o.kind == "verifier-to-patm" ? verifier_to_patm(spec) : verifier_to_alternating(spec, mode_of(o, spec));
    Json s;
    s["machine"] = m.name;
    s["input_heads"] = m.input_heads;
    s["mode"] = to_string(m.mode);
    emit_document(io::to_json(m), o, out, s);
  } else {
    fail(ErrorCode::usage, "unknown conversion '" + o.kind + "' (patm-to-verifier|verifier-to-patm|verifier-to-alternating)");
  }
  return 0;
}

int cmd_bound(const Options& o, std::ostream& out) {
  const VerifierSpec spec = load_verifier(o.source);
  unsigned r = 0;
  if (o.r) r = *o.r;
  else if (spec.coin_budget) r = *spec.coin_budget;
  else fail(ErrorCode::usage, "verifier has an unbounded coin budget; pass --r");
  const EnsembleBound b = compute_ensemble_bound(spec, o.input, r);
  Json rep;
  rep["verifier"] = spec.name;
  rep["input"] = o.input;
  rep["configurations"] = b.member_configurations;
  rep["r"] = b.coins;
  rep["bound"] = "C=" + b.complete.str() + ", partial-information bound " + b.partial_text();
  emit_report(rep, o, out);
  return 0;
}

int cmd_decide(const Options& o, std::ostream& out) {
  const Json doc = io::read_json_file(o.source);
  Verdict v;
  std::string name;
  if (io::document_type(doc) == "automaton") {
    auto m = io::automaton_from_json(doc);
    name = m.name;
    v = decide_alternating(m, o.input, o.steps);
  } else {
    auto m = io::atm_from_json(doc);
    name = m.name;
    v = decide_alternating(m, o.input, o.steps);
  }
  Json r;
  r["machine"] = name;
  r["input"] = o.input;
  r["verdict"] = to_string(v);
  emit_report(r, o, out);
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact debate-game solver, verifier compilers and QMW tools", "debate"};
  app.require_subcommand(1);
  Options o;
  auto add_format = [&](CLI::App* sub) {
    sub->add_option("--format", o.format, "Report format")->check(CLI::IsMember({"text", "json"}));
  };
  auto add_input = [&](CLI::App* sub) { sub->add_option("-i,--input", o.input, "Input word (default: empty)"); };

  auto* compile = app.add_subcommand("compile", "Compile a machine (or amplify a verifier) into a verifier file");
  compile->add_option("source", o.source, "Machine or verifier file")->required();
  compile->add_option("--construction", o.construction, "cdeb|zdeb|pdeb|window|amplify")->required();
  compile->add_option("--c", o.c, "Verified accepting runs required (cdeb)");
  compile->add_option("--epsilon", o.epsilon, "Error bound p/q");
  compile->add_option("--r", o.r, "Amplifier parameter; also amplifies cdeb/zdeb/pdeb output");
  compile->add_option("--direction", o.direction, "pre-reject|pre-accept");
  compile->add_option("--t", o.t, "Window length (window)");
  compile->add_option("--input-length", o.input_length, "Input length the window verifier is built for");
  compile->add_option("--simulations", o.simulations, "Rejecting simulations before rejecting (window)");
  compile->add_option("--mode", o.mode, "complete|zero (window)");
  compile->add_option("-o,--output", o.output, "Output file (default: stdout)");
  add_format(compile);

  auto* solve = app.add_subcommand("solve", "Exact game values and strong/weak verdicts");
  solve->add_option("source", o.source, "Verifier file")->required();
  add_input(solve);
  solve->add_option("--mode", o.mode, "complete|zero|partial (default: from the alphabets)");
  solve->add_option("--epsilon", o.epsilon, "Error bound p/q, below 1/2");
  solve->add_option("--horizon", o.horizon, "Debate-symbol horizon, or 'auto'");
  solve->add_option("--emit-p1", o.emit_p1, "Write an optimal P1 strategy table here");
  solve->add_option("--depth", o.depth, "P0 symbols covered by --emit-p1");
  add_format(solve);

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo run of a strategy pair");
  simulate->add_option("source", o.source, "Verifier file")->required();
  add_input(simulate);
  simulate->add_option("--p1", o.p1_file, "P1 strategy file")->required();
  simulate->add_option("--p0", o.p0_file, "P0 strategy file")->required();
  simulate->add_option("--samples", o.samples, "Number of samples");
  simulate->add_option("--seed", o.seed, "Random seed");
  simulate->add_option("--horizon", o.sim_horizon, "Debate symbols per sample");
  simulate->add_option("--threads", o.threads, "Worker threads (0: all cores)");
  simulate->add_flag("--exact", o.exact, "Also report exact outcome probabilities");
  add_format(simulate);

  auto* qmw = app.add_subcommand("qmw", "Quantified max word problem");
  qmw->require_subcommand(1);
  std::string qmw_action;
  for (const char* action : {"eval", "max", "reduce"}) {
    auto* sub = qmw->add_subcommand(action, action == std::string("eval")      ? "Decide the quantified inequality"
                                            : action == std::string("max") ? "Compute the game value Omega"
                                                                           : "Reduce a complete-information verifier");
    sub->add_option("source", o.source, action == std::string("reduce") ? "Verifier file" : "QMW file")->required();
    if (action == std::string("reduce")) {
      add_input(sub);
      sub->add_option("--t", o.t, "Exchanges")->required();
      sub->add_option("--epsilon", o.epsilon, "Error bound p/q");
      sub->add_option("-o,--output", o.output, "Output file (default: stdout)");
    } else {
      sub->add_option("--threshold", o.threshold, "Override the threshold c");
      sub->add_flag("--shared-menu", o.shared_menu, "Require one matrix set shared by all positions");
    }
    add_format(sub);
    sub->callback([&qmw_action, action] { qmw_action = action; });
  }

  auto* convert = app.add_subcommand("convert", "Convert between verifiers and alternating machines");
  convert->add_option("kind", o.kind, "patm-to-verifier|verifier-to-patm|verifier-to-alternating")->required();
  convert->add_option("source", o.source, "Input file")->required();
  convert->add_option("--mode", o.mode, "Debate mode for verifier-to-alternating");
  convert->add_option("-o,--output", o.output, "Output file (default: stdout)");
  add_format(convert);

  auto* bound = app.add_subcommand("bound", "Ensemble configuration bounds");
  bound->add_option("source", o.source, "Verifier file")->required();
  add_input(bound);
  bound->add_option("--r", o.r, "Coins (default: the verifier's coin budget)");
  add_format(bound);

  auto* decide = app.add_subcommand("decide", "Decide a machine on an input");
  decide->add_option("source", o.source, "Automaton or ATM file")->required();
  add_input(decide);
  decide->add_option("--steps", o.steps, "Attractor round bound");
  add_format(decide);

  try {
    std::vector<std::string> reversed(args.size() > 1 ? args.begin() + 1 : args.end(), args.end());
    std::reverse(reversed.begin(), reversed.end());
    app.parse(std::move(reversed));
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return static_cast<int>(ErrorCode::usage);
  }

  try {
    if (compile->parsed()) return cmd_compile(o, out);
    if (solve->parsed()) return cmd_solve(o, out);
    if (simulate->parsed()) return cmd_simulate(o, out);
    if (qmw->parsed()) return cmd_qmw(qmw_action, o, out);
    if (convert->parsed()) return cmd_convert(o, out);
    if (bound->parsed()) return cmd_bound(o, out);
    if (decide->parsed()) return cmd_decide(o, out);
  } catch (const Error& e) {
    err << error_code_name(e.code()) << ": " << e.what() << '\n';
    return static_cast<int>(e.code());
  } catch (const std::bad_alloc&) {
    err << error_code_name(ErrorCode::limit) << ": out of memory\n";
    return static_cast<int>(ErrorCode::limit);
  }
  return static_cast<int>(ErrorCode::usage);
}

}  // namespace debate

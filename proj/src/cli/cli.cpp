#include "quadrep/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "quadrep/classgroup.hpp"
#include "quadrep/cornacchia.hpp"
#include "quadrep/error.hpp"
#include "quadrep/forms.hpp"
#include "quadrep/oracle.hpp"
#include "quadrep/solver_dp.hpp"
#include "quadrep/solver_mitm.hpp"

namespace quadrep::cli {

namespace {

using json = nlohmann::ordered_json;

// Integers go out as JSON numbers when they fit, strings otherwise.
json to_json(const Int& n) {
  if (n.fits_slong_p()) return n.get_si();
  return n.get_str();
}

json to_json(const Form& f) { return json::array({to_json(f.a()), to_json(f.b()), to_json(f.c())}); }

std::int64_t max_class_number() {
  if (const char* env = std::getenv("QUADREP_MAX_H")) {
    const Int v = parse_int(env);
    if (v < 1 || !v.fits_slong_p()) throw Error(ErrorCode::InvalidInput, "QUADREP_MAX_H must be a positive integer");
    return v.get_si();
  }
  return kDefaultMaxClassNumber;
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::DeskScaleExceeded:
    case ErrorCode::CapExceeded:
      return kDeskScaleExceeded;
    default:
      return kInvalidInput;
  }
}

json error_json(const std::string& code, const std::string& message) {
  return json{{"status", "error"}, {"error", code}, {"message", message}};
}

std::string reason_string(NoSolutionReason reason) {
  switch (reason) {
    case NoSolutionReason::InertPrime: return "inert_prime";
    case NoSolutionReason::NoSignVector: return "no_sign_vector";
    case NoSolutionReason::RootsExhausted: return "roots_exhausted";
    case NoSolutionReason::None: break;
  }
  return "none";
}

Factorization factorization_for(const Int& m, const std::string& factors, std::ostream& err) {
  if (!factors.empty()) return parse_factors(factors, m);
  err << "warning: no --factors given; factoring m internally. The solvers assume a known factorization of m.\n";
  return factor(m);
}

struct SolveRequest {
  std::string form;
  std::string m;
  std::string factors;
  std::string algo = "auto";
  bool verbose = false;
};

int cmd_solve(const SolveRequest& req, std::ostream& out, std::ostream& err) {
  const Form f = parse_form(req.form);
  const Int m = parse_int(req.m);
  if (m < 1) throw Error(ErrorCode::InvalidInput, "m must be positive");
  const Factorization F = factorization_for(m, req.factors, err);
  const SquareSplit split = square_split(F);
  const Int& m_prime = split.reduced.m;

  const QuadOrderCtx ctx = make_context(f.discriminant());
  if (gcd(m_prime, ctx.conductor) != 1) {
    throw Error(ErrorCode::ConductorNotCoprime, "square-free part " + m_prime.get_str() +
                                                    " shares a factor with the conductor " + ctx.conductor.get_str());
  }

  const std::int64_t max_h = max_class_number();
  std::string algo = req.algo;
  std::shared_ptr<const ClassGroupStructure> G;
  if (algo == "dp") G = cached_structure(ctx.D, max_h);
  if (algo == "auto") {
    // dp when h * omega < 2^ceil(omega/2) * omega, else the hashed MITM
    const std::size_t omega = split.reduced.omega();
    try {
      G = cached_structure(ctx.D, max_h);
      const double dp_cost = static_cast<double>(G->h()) * static_cast<double>(omega);
      const double mitm_cost = std::ldexp(1.0, static_cast<int>((omega + 1) / 2)) * static_cast<double>(omega);
      algo = dp_cost < mitm_cost ? "dp" : "mitm-hash";
    } catch (const Error& e) {
      if (e.code() != ErrorCode::DeskScaleExceeded) throw;
      algo = "mitm-hash";
    }
  }

  SolveOutcome outcome;
  json counters = json::object();
  if (algo == "dp") {
    outcome = solve_dp(f, m_prime, split.reduced, max_h);
    counters["states_visited"] = outcome.counters.states_visited;
  } else if (algo == "mitm" || algo == "mitm-hash") {
    outcome = algo == "mitm" ? solve_mitm(f, m_prime, split.reduced) : solve_mitm_hashed(f, m_prime, split.reduced);
    counters["compositions"] = outcome.counters.compositions;
    counters["lookups"] = outcome.counters.lookups;
  } else if (algo == "cornacchia") {
    CornacchiaResult res = cornacchia_general(f, m_prime, split.reduced);
    if (res.solution) {
      outcome.status = SolveStatus::Solution;
      outcome.x = res.solution->first;
      outcome.y = res.solution->second;
    } else {
      outcome.reason = NoSolutionReason::RootsExhausted;
    }
    outcome.counters.roots_tried = res.roots_tried;
    counters["roots_tried"] = res.roots_tried;
  } else {
    throw Error(ErrorCode::InvalidInput, "unknown algorithm '" + req.algo + "'");
  }

  json result;
  if (outcome.solved()) {
    const Int x = outcome.x * split.k;
    const Int y = outcome.y * split.k;
    if (f.evaluate(x, y) != m) throw std::logic_error("solve: scaled solution does not evaluate to m");
    result["status"] = "solution";
    result["x"] = to_json(x);
    result["y"] = to_json(y);
  } else {
    result["status"] = "no_solution";
    result["reason"] = reason_string(outcome.reason);
    if (outcome.reason == NoSolutionReason::InertPrime) result["inert_prime"] = to_json(outcome.witness_prime);
  }
  result["algo"] = algo;
  result["m"] = to_json(m);
  if (split.k != 1) {
    result["k"] = to_json(split.k);
    result["m_squarefree"] = to_json(m_prime);
    if (!outcome.solved()) {
      // Only representations k * (x', y') with f(x', y') = m' are covered.
      result["certificate"] = "square_free_part";
      err << "warning: m is not square-free; the no-solution answer covers only representations scaled from m' = "
          << m_prime.get_str() << "\n";
    }
  }
  result["counters"] = counters;
  if (G) result["classgroup"] = json{{"h", G->h()}, {"orders", G->orders()}};
  out << result.dump() << "\n";

  if (req.verbose) {
    err << "f = " << f << ", m = " << m << " = " << split.k << "^2 * " << m_prime << ", algo = " << algo << ": "
        << (outcome.solved() ? "solution" : "no solution") << "\n";
  }
  return outcome.solved() ? kSolved : kNoSolution;
}

int cmd_cornacchia(const std::string& d_text, const std::string& m_text, const std::string& factors, std::ostream& out,
                   std::ostream& err) {
  const Int d = parse_int(d_text);
  const Int m = parse_int(m_text);
  if (m < 1) throw Error(ErrorCode::InvalidInput, "m must be positive");
  const Factorization F = factorization_for(m, factors, err);
  CornacchiaResult res = cornacchia_composite(d, m, F);
  json result;
  if (res.solution) {
    result["status"] = "solution";
    result["x"] = to_json(res.solution->first);
    result["y"] = to_json(res.solution->second);
  } else {
    result["status"] = "no_solution";
  }
  result["algo"] = "cornacchia";
  result["counters"] = json{{"roots_tried", res.roots_tried}};
  out << result.dump() << "\n";
  return res.solution ? kSolved : kNoSolution;
}

int cmd_classgroup(const std::string& d_text, std::ostream& out) {
  const Int D = parse_int(d_text);
  auto G = cached_structure(D, max_class_number());
  json gens = json::array();
  for (const auto& g : G->generators()) gens.push_back(to_json(g.rep()));
  out << json{{"status", "ok"}, {"D", to_json(D)}, {"h", G->h()}, {"orders", G->orders()}, {"generators", gens}}.dump()
      << "\n";
  return kSolved;
}

int cmd_reduce(const std::string& form_text, std::ostream& out) {
  const Form f = parse_form(form_text);
  const Reduction red = reduce(f);
  const auto& u = red.transform;
  out << json{{"status", "ok"},
              {"form", to_json(f)},
              {"reduced", to_json(red.cls.rep())},
              {"transform", json::array({to_json(u.p), to_json(u.q), to_json(u.r), to_json(u.s)})}}
             .dump()
      << "\n";
  return kSolved;
}

int cmd_compose(const std::string& f_text, const std::string& g_text, std::ostream& out) {
  const FormClass f = reduced_class(parse_form(f_text));
  const FormClass g = reduced_class(parse_form(g_text));
  out << json{{"status", "ok"}, {"result", to_json(compose(f, g).rep())}}.dump() << "\n";
  return kSolved;
}

int cmd_oracle(const std::string& form_text, const std::string& m_text, bool primitive, std::ostream& out) {
  const Form f = parse_form(form_text);
  const Int m = parse_int(m_text);
  if (m < 1) throw Error(ErrorCode::InvalidInput, "m must be positive");
  json reps = json::array();
  for (const auto& [x, y] : oracle::brute_representations(f, m, primitive)) reps.push_back(json::array({to_json(x), to_json(y)}));
  const bool any = !reps.empty();
  json result{{"status", any ? "solution" : "no_solution"}, {"count", reps.size()}, {"representations", reps}};
  if (any) {
    result["x"] = reps[0][0];
    result["y"] = reps[0][1];
  }
  out << result.dump() << "\n";
  return any ? kSolved : kNoSolution;
}

struct BenchRequest {
  std::string disc = "-20";
  std::string form;
  std::vector<int> sizes{2, 4, 6, 8, 10, 12, 14, 16};
  std::string kind = "nosolution";
  std::string format = "csv";
  int cornacchia_max_r = 20;
};

// First r split primes with the last one advanced until the instance has
// the requested solvability (decided by the DP solver).
std::optional<Factorization> bench_instance(const Form& f, const QuadOrderCtx& ctx, int r, bool want_solution) {
  std::vector<Int> primes;
  Int p = 2;
  auto next_split = [&] {
    while (true) {
      mpz_nextprime(p.get_mpz_t(), p.get_mpz_t());
      if (gcd(p, ctx.conductor) == 1 && kronecker(ctx.D, p) == 1) return p;
    }
  };
  for (int i = 0; i < r; ++i) primes.push_back(next_split());
  for (int attempt = 0; attempt < 200; ++attempt) {
    Factorization F{1, {}};
    for (const auto& q : primes) {
      F.m *= q;
      F.primes.push_back({q, 1});
    }
    if (r == 0) return F;
    if (solve_dp(f, F.m, F).solved() == want_solution) return F;
    primes.back() = next_split();
  }
  return std::nullopt;
}

int cmd_bench(const BenchRequest& req, std::ostream& out, std::ostream& err) {
  using Clock = std::chrono::steady_clock;
  const Int D = parse_int(req.disc);
  const FormClass principal = identity_class(D);
  const Form f = req.form.empty() ? principal.rep() : parse_form(req.form);
  if (f.discriminant() != D) throw Error(ErrorCode::DiscriminantMismatch, "form does not have discriminant " + D.get_str());
  const QuadOrderCtx ctx = make_context(D);
  const bool want_solution = req.kind == "solution";
  if (!want_solution && req.kind != "nosolution") throw Error(ErrorCode::InvalidInput, "--kind is solution|nosolution");

  auto micros = [](Clock::time_point t0) {
    return std::chrono::duration_cast<std::chrono::microseconds>(Clock::now() - t0).count();
  };

  json rows = json::array();
  for (int r : req.sizes) {
    auto F = bench_instance(f, ctx, r, want_solution);
    if (!F) {
      err << "bench: no " << req.kind << " instance found for r = " << r << "\n";
      continue;
    }
    json row{{"D", to_json(D)}, {"form", f.str()}, {"r", r}, {"m", F->m.get_str()}};

    auto t0 = Clock::now();
    SolveOutcome dp = solve_dp(f, F->m, *F);
    row["dp_status"] = dp.solved() ? "solution" : "no_solution";
    row["dp_states_visited"] = dp.counters.states_visited;
    row["dp_us"] = micros(t0);

    t0 = Clock::now();
    SolveOutcome mitm = solve_mitm(f, F->m, *F);
    row["mitm_compositions"] = mitm.counters.compositions;
    row["mitm_lookups"] = mitm.counters.lookups;
    row["mitm_us"] = micros(t0);

    t0 = Clock::now();
    SolveOutcome hashed = solve_mitm_hashed(f, F->m, *F);
    row["mitm_hash_compositions"] = hashed.counters.compositions;
    row["mitm_hash_us"] = micros(t0);

    if (r <= req.cornacchia_max_r) {
      t0 = Clock::now();
      // x^2 + d y^2 runs the classical routine, anything else the general one
      const bool classical = f.a() == 1 && f.b() == 0;
      CornacchiaResult c = classical ? cornacchia_composite(f.c(), F->m, *F) : cornacchia_general(f, F->m, *F);
      row["cornacchia_roots_tried"] = c.roots_tried;
      row["cornacchia_us"] = micros(t0);
    } else {
      row["cornacchia_roots_tried"] = nullptr;
      row["cornacchia_us"] = nullptr;
    }
    rows.push_back(std::move(row));
  }

  if (req.format == "json") {
    out << json{{"status", "ok"}, {"rows", rows}}.dump() << "\n";
  } else if (req.format == "csv") {
    bool header = false;
    for (const auto& row : rows) {
      if (!header) {
        bool first = true;
        for (const auto& [key, _] : row.items()) {
          out << (first ? "" : ",") << key;
          first = false;
        }
        out << "\n";
        header = true;
      }
      bool first = true;
      for (const auto& [_, value] : row.items()) {
        out << (first ? "" : ",") << (value.is_string() ? value.get<std::string>() : value.is_null() ? "" : value.dump());
        first = false;
      }
      out << "\n";
    }
  } else {
    throw Error(ErrorCode::InvalidInput, "--format is csv|json");
  }
  return kSolved;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Represent integers by positive definite binary quadratic forms", "quadrep"};
  app.require_subcommand(1);

  SolveRequest solve;
  auto* solve_cmd = app.add_subcommand("solve", "Solve f(x,y) = m");
  solve_cmd->add_option("-f,--form", solve.form, "Form as a,b,c")->required();
  solve_cmd->add_option("-m", solve.m, "Target integer")->required();
  solve_cmd->add_option("--factors", solve.factors, "Factorization of m: p1,p2^e2,...");
  solve_cmd->add_option("--algo", solve.algo, "dp|mitm|mitm-hash|cornacchia|auto")
      ->check(CLI::IsMember({"dp", "mitm", "mitm-hash", "cornacchia", "auto"}));
  solve_cmd->add_flag("-v,--verbose", solve.verbose, "Summary on standard error");

  std::string corn_d, corn_m, corn_factors;
  auto* corn_cmd = app.add_subcommand("cornacchia", "Solve x^2 + d y^2 = m with Cornacchia's algorithm");
  corn_cmd->add_option("-d", corn_d, "Coefficient d >= 1")->required();
  corn_cmd->add_option("-m", corn_m, "Square-free target")->required();
  corn_cmd->add_option("--factors", corn_factors, "Factorization of m");

  std::string cg_disc;
  auto* cg_cmd = app.add_subcommand("classgroup", "Class group structure of discriminant D");
  cg_cmd->add_option("D", cg_disc, "Negative discriminant")->required();

  std::string red_form;
  auto* red_cmd = app.add_subcommand("reduce", "Reduce a form and report the transform");
  red_cmd->add_option("-f,--form", red_form, "Form as a,b,c")->required();

  std::string comp_f, comp_g;
  auto* comp_cmd = app.add_subcommand("compose", "Compose two form classes");
  comp_cmd->add_option("-f,--form", comp_f, "First form")->required();
  comp_cmd->add_option("-g", comp_g, "Second form")->required();

  std::string or_form, or_m;
  bool or_primitive = false;
  auto* or_cmd = app.add_subcommand("oracle", "Enumerate all representations by brute force");
  or_cmd->add_option("-f,--form", or_form, "Form as a,b,c")->required();
  or_cmd->add_option("-m", or_m, "Target integer")->required();
  or_cmd->add_flag("--primitive", or_primitive, "Only gcd(x,y) = 1");

  BenchRequest bench;
  auto* bench_cmd = app.add_subcommand("bench", "Operation counters on a family of split-prime instances");
  bench_cmd->add_option("--disc", bench.disc, "Discriminant (default -20)");
  bench_cmd->add_option("-f,--form", bench.form, "Form (default: principal form)");
  bench_cmd->add_option("--r", bench.sizes, "Numbers of split primes")->delimiter(',');
  bench_cmd->add_option("--kind", bench.kind, "solution|nosolution");
  bench_cmd->add_option("--format", bench.format, "csv|json");
  bench_cmd->add_option("--cornacchia-max-r", bench.cornacchia_max_r, "Skip Cornacchia above this r");

  std::vector<std::string> argv_rev(args.rbegin(), args.rend());
  try {
    app.parse(argv_rev);
  } catch (const CLI::CallForHelp&) {
    err << app.help();
    return kSolved;
  } catch (const CLI::ParseError& e) {
    out << error_json("InvalidInput", e.what()).dump() << "\n";
    err << "error: " << e.what() << "\n";
    return kInvalidInput;
  }

  try {
    if (*solve_cmd) return cmd_solve(solve, out, err);
    if (*corn_cmd) return cmd_cornacchia(corn_d, corn_m, corn_factors, out, err);
    if (*cg_cmd) return cmd_classgroup(cg_disc, out);
    if (*red_cmd) return cmd_reduce(red_form, out);
    if (*comp_cmd) return cmd_compose(comp_f, comp_g, out);
    if (*or_cmd) return cmd_oracle(or_form, or_m, or_primitive, out);
    if (*bench_cmd) return cmd_bench(bench, out, err);
  } catch (const Error& e) {
    out << error_json(std::string(to_string(e.code())), e.what()).dump() << "\n";
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  }
  return kInvalidInput;
}

}  // namespace quadrep::cli

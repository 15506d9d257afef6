#include <doctest.h>

#include <algorithm>

#include "quadrep/classgroup.hpp"
#include "quadrep/cornacchia.hpp"
#include "quadrep/error.hpp"
#include "quadrep/oracle.hpp"
#include "quadrep/solver_dp.hpp"
#include "quadrep/solver_mitm.hpp"
#include "test_support.hpp"

using namespace quadrep;
using quadrep::testing::brute_is_prime;
using quadrep::testing::rng;
using quadrep::testing::square_free;
using quadrep::testing::trial_factorization;

namespace {

using Solver = SolveOutcome (*)(const Form&, const Int&, const Factorization&);

SolveOutcome dp(const Form& f, const Int& m, const Factorization& F) { return solve_dp(f, m, F); }

const std::vector<std::pair<const char*, Solver>>& solvers() {
  static const std::vector<std::pair<const char*, Solver>> s{
      {"dp", &dp}, {"mitm", &solve_mitm}, {"mitm-hash", &solve_mitm_hashed}};
  return s;
}

// Applies the sign vector at class level and compares with [f].
bool signs_reach_target(const Form& f, const Factorization& F, const std::vector<int>& signs) {
  const Int D = f.discriminant();
  FormClass acc = identity_class(D);
  std::size_t i = 0;
  for (const auto& pp : F.primes) {
    auto pf = oracle::prime_form(D, pp.p);
    if (!pf) return false;
    const FormClass c = reduced_class(*pf);
    if (D % pp.p == 0) {
      acc = compose(acc, c);
    } else {
      if (i >= signs.size()) return false;
      acc = compose(acc, signs[i++] > 0 ? c : inverse(c));
    }
  }
  return i == signs.size() && acc == reduced_class(f);
}

long conductor_of(long d) {
  long f = 1;
  for (long k = 2; k * k <= -d; ++k) {
    while (d % (k * k) == 0) {
      const long q = d / (k * k);
      if (((q % 4) + 4) % 4 == 0 || ((q % 4) + 4) % 4 == 1) {
        d = q;
        f *= k;
      } else {
        break;
      }
    }
  }
  return f;
}

std::vector<long> non_inert_primes(long d, long bound, bool split_only) {
  std::vector<long> out;
  for (long p = 2; p < bound; ++p) {
    if (!brute_is_prime(p) || conductor_of(d) % p == 0) continue;
    if (split_only && d % p == 0) continue;
    if (oracle::prime_form(Int(d), Int(p))) out.push_back(p);
  }
  return out;
}

Factorization factorization_of(const std::vector<long>& primes) {
  Factorization F{1, {}};
  for (long p : primes) {
    F.m *= p;
    F.primes.push_back({Int(p), 1});
  }
  return F;
}

}  // namespace

TEST_CASE("solver examples") {
  for (const auto& [name, solve] : solvers()) {
    CAPTURE(name);
    auto a = solve(Form(1, 0, 5), Int(21), trial_factorization(21));
    REQUIRE(a.solved());
    CHECK(Form(1, 0, 5).evaluate(a.x, a.y) == 21);
    const auto reps = oracle::brute_representations(Form(1, 0, 5), Int(21));
    CHECK(std::find(reps.begin(), reps.end(), std::pair<Int, Int>{a.x, a.y}) != reps.end());

    auto b = solve(Form(2, 2, 3), Int(7), trial_factorization(7));
    REQUIRE(b.solved());
    CHECK(Form(2, 2, 3).evaluate(b.x, b.y) == 7);

    auto c = solve(Form(1, 0, 5), Int(3), trial_factorization(3));
    CHECK_FALSE(c.solved());
    CHECK(c.reason == NoSolutionReason::NoSignVector);

    auto d = solve(Form(1, 0, 1), Int(1), trial_factorization(1));
    REQUIRE(d.solved());
    CHECK(abs(d.x) == 1);
    CHECK(d.y == 0);

    CHECK_FALSE(solve(Form(2, 2, 3), Int(1), trial_factorization(1)).solved());

    auto inert = solve(Form(1, 0, 5), Int(33), trial_factorization(33));
    CHECK_FALSE(inert.solved());
    CHECK(inert.reason == NoSolutionReason::InertPrime);
    CHECK(inert.witness_prime == 11);
  }
}

TEST_CASE("solve_dp: hand trace at D = -20") {
  auto G = compute_structure(Int(-20));
  std::uint64_t states = 0;
  auto signs = signed_subset_sum(G, {GroupVector{{1}}, GroupVector{{1}}}, GroupVector{{0}}, states);
  REQUIRE(signs);
  CHECK(signs->size() == 2);
  CHECK(states == 3);  // {0}, {1}, {0}

  auto none = signed_subset_sum(G, {GroupVector{{1}}}, GroupVector{{0}}, states);
  CHECK_FALSE(none);
  CHECK(states == 2);

  auto out = solve_dp(Form(1, 0, 5), Int(3), trial_factorization(3));
  CHECK_FALSE(out.solved());
  CHECK(out.counters.states_visited == 2);
}

TEST_CASE("solve_mitm: counters on the small instances") {
  auto out = solve_mitm(Form(1, 0, 5), Int(3), trial_factorization(3));
  CHECK_FALSE(out.solved());
  CHECK(out.counters.lookups == 1);  // L2 holds the empty product only
  auto hashed = solve_mitm_hashed(Form(1, 0, 5), Int(3), trial_factorization(3));
  CHECK(hashed.counters.lookups == out.counters.lookups);
  CHECK(hashed.counters.compositions == out.counters.compositions);
}

TEST_CASE("signed_products enumerates in sign-mask order") {
  const std::vector<FormClass> cls{reduced_class(Form(2, 1, 3)), reduced_class(Form(2, -1, 3))};
  std::uint64_t comps = 0;
  auto list = signed_products(cls, identity_class(Int(-23)), comps);
  REQUIRE(list.size() == 4);
  for (std::uint64_t mask = 0; mask < 4; ++mask) {
    CHECK(list[mask].signs == mask);
    FormClass expect = identity_class(Int(-23));
    for (std::size_t k = 0; k < 2; ++k) expect = compose(expect, (mask >> k) & 1 ? inverse(cls[k]) : cls[k]);
    CHECK(list[mask].cls == expect);
  }
  CHECK(comps == 6);
}

TEST_CASE("solver errors") {
  for (const auto& [name, solve] : solvers()) {
    CAPTURE(name);
    try {
      solve(Form(1, 0, 5), Int(18), trial_factorization(18));
      FAIL("expected NotSquareFree");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::NotSquareFree);
    }
    try {
      solve(Form(1, 0, 5), Int(21), trial_factorization(15));
      FAIL("expected InvalidFactorization");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::InvalidFactorization);
    }
    try {
      solve(Form(1, 0, 3), Int(14), trial_factorization(14));
      FAIL("expected ConductorNotCoprime");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::ConductorNotCoprime);
    }
    Factorization fake{Int(21), {{Int(21), 1}}};
    CHECK_THROWS_AS(solve(Form(1, 0, 5), Int(21), fake), Error);
  }
  try {
    solve_dp(Form(1, 0, 5), Int(21), trial_factorization(21), 1);
    FAIL("expected DeskScaleExceeded");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DeskScaleExceeded);
  }
}

TEST_CASE("duplicate classes across primes: either stored sign vector works") {
  // 3, 7, 23, 43 all split at D = -20 into the non-principal class
  for (long p : {3L, 7L, 23L, 43L}) {
    auto pf = oracle::prime_form(Int(-20), Int(p));
    REQUIRE(pf);
    CHECK(reduced_class(*pf).rep() == Form(2, 2, 3));
  }
  for (long m : {21L, 3L * 7 * 23 * 43, 3L * 7 * 23}) {
    const auto F = trial_factorization(m);
    for (const Form& f : {Form(1, 0, 5), Form(2, 2, 3)}) {
      const bool expect = !oracle::brute_representations(f, Int(m)).empty();
      for (const auto& [name, solve] : solvers()) {
        CAPTURE(name);
        CAPTURE(m);
        auto out = solve(f, Int(m), F);
        CHECK(out.solved() == expect);
        if (out.solved()) {
          CHECK(f.evaluate(out.x, out.y) == m);
          CHECK(signs_reach_target(f, F, out.signs));
        }
      }
    }
  }
}

TEST_CASE("non-fundamental discriminants") {
  for (long d : {-12L, -36L, -63L, -75L, -99L, -180L}) {
    const long cond = conductor_of(d);
    for (const auto& cls : enumerate_reduced_forms(Int(d))) {
      const Form& f = cls.rep();
      for (long m = 1; m <= 400; ++m) {
        if (!square_free(m) || std::gcd(m, cond) != 1) continue;
        const bool expect = !oracle::brute_representations(f, Int(m)).empty();
        for (const auto& [name, solve] : solvers()) {
          CAPTURE(name);
          CAPTURE(f);
          CAPTURE(m);
          auto out = solve(f, Int(m), trial_factorization(m));
          CHECK(out.solved() == expect);
          if (out.solved()) CHECK(f.evaluate(out.x, out.y) == m);
        }
      }
    }
  }
}

TEST_CASE("differential: 300 random instances, all solvers agree") {
  const std::vector<long> ds{-20, -23, -24, -35, -47, -71, -84, -120, -231, -420, -995, -1155, -3299, -5460};
  std::uniform_int_distribution<std::size_t> pick_d(0, ds.size() - 1);
  std::uniform_int_distribution<int> pick_r(0, 9);
  int solved = 0;
  for (int i = 0; i < 300; ++i) {
    const long d = ds[pick_d(rng())];
    const auto classes = enumerate_reduced_forms(Int(d));
    std::uniform_int_distribution<std::size_t> pick_c(0, classes.size() - 1);
    const Form f = act(classes[pick_c(rng())].rep(), quadrep::testing::random_sl2(5));
    auto pool = non_inert_primes(d, 300, false);
    std::shuffle(pool.begin(), pool.end(), rng());
    pool.resize(std::min<std::size_t>(pool.size(), pick_r(rng())));
    std::sort(pool.begin(), pool.end());
    const Factorization F = factorization_of(pool);
    CAPTURE(d);
    CAPTURE(f);
    CAPTURE(F.m);

    const bool expect = oracle::brute_signs(f, F.m, F).has_value();
    for (const auto& [name, solve] : solvers()) {
      CAPTURE(name);
      auto out = solve(f, F.m, F);
      CHECK(out.solved() == expect);
      if (out.solved()) {
        CHECK(f.evaluate(out.x, out.y) == F.m);
        CHECK(signs_reach_target(f, F, out.signs));
      }
    }
    if (F.m < 100'000'000) CHECK(expect == !oracle::brute_representations(f, F.m).empty());
    solved += expect;
  }
  // both outcomes are exercised
  CHECK(solved > 30);
  CHECK(solved < 270);
}

TEST_CASE("solve_dp: exhaustive signs and state bound, r <= 12") {
  for (long d : quadrep::testing::grid_discriminants()) {
    auto split = non_inert_primes(d, 120, true);
    split.resize(std::min<std::size_t>(split.size(), 12));
    const auto G = compute_structure(Int(d));
    for (const auto& cls : G.classes()) {
      for (std::size_t r = 0; r <= split.size(); r += 3) {
        std::vector<long> ps(split.begin(), split.begin() + static_cast<long>(r));
        const Factorization F = factorization_of(ps);
        auto out = solve_dp(cls.rep(), F.m, F);
        CAPTURE(d);
        CAPTURE(F.m);
        CHECK(out.solved() == oracle::brute_signs(cls.rep(), F.m, F).has_value());
        CHECK(out.counters.states_visited <= (r + 1) * static_cast<std::uint64_t>(G.h()));
        if (out.solved()) CHECK(cls.rep().evaluate(out.x, out.y) == F.m);
      }
    }
  }
}

TEST_CASE("screen fires exactly when a prime is inert, and then no representation exists") {
  std::uniform_int_distribution<long> pick_m(2, 20000);
  int fired = 0;
  for (int i = 0; fired < 500 && i < 20000; ++i) {
    const long d = quadrep::testing::grid_discriminants()[static_cast<std::size_t>(i) % 8];
    const long m = pick_m(rng());
    if (!square_free(m) || std::gcd(m, conductor_of(d)) != 1) continue;
    const auto F = trial_factorization(m);
    bool inert = false;
    for (const auto& pp : F.primes) inert = inert || quadrep::testing::brute_legendre(d, pp.p.get_si()) == -1 ||
                                            (pp.p == 2 && ((d % 8) + 8) % 8 == 5);
    const Form f = identity_class(Int(d)).rep();
    auto out = solve_dp(f, Int(m), F);
    CHECK((out.reason == NoSolutionReason::InertPrime) == inert);
    if (inert) {
      ++fired;
      for (const auto& cls : enumerate_reduced_forms(Int(d)))
        CHECK(oracle::brute_representations(cls.rep(), Int(m)).empty());
    }
  }
  CHECK(fired == 500);
}

TEST_CASE("cornacchia_general agrees with the solvers") {
  for (long d : {-20L, -23L, -84L}) {
    for (const auto& cls : enumerate_reduced_forms(Int(d))) {
      for (long m = 1; m < 300; ++m) {
        if (!square_free(m)) continue;
        const auto F = trial_factorization(m);
        CHECK(cornacchia_general(cls.rep(), Int(m), F).solution.has_value() ==
              solve_dp(cls.rep(), Int(m), F).solved());
      }
    }
  }
}

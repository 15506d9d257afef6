#include <doctest.h>

#include <variant>

#include "quadrep/classgroup.hpp"
#include "quadrep/error.hpp"
#include "quadrep/oracle.hpp"
#include "quadrep/quadorder.hpp"
#include "test_support.hpp"

using namespace quadrep;
using quadrep::testing::brute_is_prime;
using quadrep::testing::rng;

namespace {

bool brute_fundamental(long d) {
  // d = 1 mod 4 square-free, or d = 4k with k = 2,3 mod 4 square-free.
  auto sqf = [](long n) {
    n = n < 0 ? -n : n;
    for (long p = 2; p * p <= n; ++p)
      if (n % (p * p) == 0) return false;
    return true;
  };
  const long r = ((d % 4) + 4) % 4;
  if (r == 1) return sqf(d);
  if (r != 0) return false;
  const long k = d / 4;
  const long rk = ((k % 4) + 4) % 4;
  return (rk == 2 || rk == 3) && sqf(k);
}

PrimeIdeal prime_above(const QuadOrderCtx& ctx, long p) {
  auto res = prime_ideal_above(ctx, Int(p));
  REQUIRE(std::holds_alternative<PrimeIdeal>(res));
  return std::get<PrimeIdeal>(res);
}

// Non-inert primes below `bound` coprime to the conductor.
std::vector<OIdeal> prime_ideals(const QuadOrderCtx& ctx, long bound) {
  std::vector<OIdeal> out;
  for (long p = 2; p < bound; ++p) {
    if (!brute_is_prime(p) || ctx.conductor % p == 0) continue;
    auto res = prime_ideal_above(ctx, Int(p));
    if (auto* pi = std::get_if<PrimeIdeal>(&res)) out.push_back(pi->ideal);
  }
  return out;
}

OIdeal random_ideal(const QuadOrderCtx& ctx, const std::vector<OIdeal>& primes, int factors) {
  std::uniform_int_distribution<std::size_t> pick(0, primes.size() - 1);
  std::bernoulli_distribution flip(0.5);
  OIdeal a = OIdeal::unit(ctx);
  for (int i = 0; i < factors; ++i) {
    const OIdeal& p = primes[pick(rng())];
    a = ideal_multiply(a, flip(rng()) ? conjugate(p) : p);
  }
  return a;
}

// Principal ideal (n) = nZ + n*omega*Z.
OIdeal principal(const QuadOrderCtx& ctx, const Int& n) {
  return OIdeal(ctx, n, ctx.D % 2 == 0 ? Int(0) : n, n);
}

}  // namespace

TEST_CASE("make_context examples") {
  auto c20 = make_context(Int(-20));
  CHECK(c20.fundamental == -20);
  CHECK(c20.conductor == 1);
  CHECK(brute_fundamental(-20));

  auto c12 = make_context(Int(-12));
  CHECK(c12.fundamental == -3);
  CHECK(c12.conductor == 2);
  CHECK(c12.theta_trace == 1);

  auto c23 = make_context(Int(-23));
  CHECK(c23.fundamental == -23);
  CHECK(c23.conductor == 1);

  CHECK_THROWS_AS(make_context(Int(-21)), Error);
  CHECK_THROWS_AS(make_context(Int(12)), Error);
}

TEST_CASE("make_context: decomposition is fundamental for all |D| <= 4000") {
  for (long d = -3; d >= -4000; --d) {
    const long r = ((d % 4) + 4) % 4;
    if (r == 2 || r == 3) continue;
    auto ctx = make_context(Int(d));
    CAPTURE(d);
    CHECK(ctx.conductor * ctx.conductor * ctx.fundamental == d);
    CHECK(brute_fundamental(ctx.fundamental.get_si()));
    CHECK(ctx.theta_trace == (((ctx.fundamental.get_si() % 4) + 4) % 4 == 1 ? 1 : 0));
  }
}

TEST_CASE("order element arithmetic") {
  auto ctx = make_context(Int(-20));
  // (1 + sqrt(-5)) squared = -4 + 2 sqrt(-5); elements stored as (u + v sqrt D)/2.
  const OrderElement w{0, 1};  // sqrt(-20)/2 = sqrt(-5)
  CHECK(norm(ctx, w) == 5);
  CHECK(multiply(ctx, w, w) == OrderElement{-10, 0});
  const OrderElement one_plus{2, 1};
  CHECK(multiply(ctx, one_plus, one_plus) == OrderElement{-8, 2});
  CHECK(norm(ctx, one_plus) == 6);
}

TEST_CASE("prime_ideal_above examples") {
  auto ctx = make_context(Int(-20));
  auto p3 = prime_above(ctx, 3);
  CHECK(p3.type == SplitType::Split);
  CHECK(p3.ideal == OIdeal(ctx, 3, 2, 1));
  CHECK(p3.ideal.norm() == 3);
  CHECK(ideal_to_class(p3.ideal).rep() == Form(2, 2, 3));

  auto p5 = prime_above(ctx, 5);
  CHECK(p5.type == SplitType::Ramified);
  CHECK(p5.ideal.u() == 0);  // least b in [0, 10)
  CHECK(p5.ideal == OIdeal(ctx, 5, 10, 1));  // the same ideal with b = 10
  CHECK(p5.ideal.norm() == 5);

  CHECK(std::holds_alternative<Inert>(prime_ideal_above(make_context(Int(-4)), Int(3))));
  CHECK(quadrep::testing::brute_legendre(-4, 3) == -1);

  try {
    prime_ideal_above(make_context(Int(-12)), Int(2));
    FAIL("expected ConductorNotCoprime");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ConductorNotCoprime);
  }
  CHECK_THROWS_AS(prime_ideal_above(ctx, Int(9)), Error);
}

TEST_CASE("prime_ideal_above: b_p normalization and splitting type") {
  for (long d : {-20L, -23L, -84L, -120L, -12L, -36L, -63L, -995L}) {
    auto ctx = make_context(Int(d));
    for (long p = 2; p < 200; ++p) {
      if (!brute_is_prime(p) || ctx.conductor % p == 0) continue;
      CAPTURE(d);
      CAPTURE(p);
      auto res = prime_ideal_above(ctx, Int(p));
      // splitting by counting roots of b^2 = D mod 4p with b = D mod 2
      int roots = 0;
      long least = -1;
      for (long b = 0; b < 2 * p; ++b) {
        if (((b - d) % 2) != 0) continue;
        if (((b * b - d) % (4 * p)) == 0) {
          ++roots;
          if (least < 0) least = b;
        }
      }
      if (roots == 0) {
        CHECK(std::holds_alternative<Inert>(res));
        continue;
      }
      REQUIRE(std::holds_alternative<PrimeIdeal>(res));
      const auto& pi = std::get<PrimeIdeal>(res);
      CHECK(pi.ideal.norm() == p);
      CHECK(pi.ideal.za() == p);
      CHECK(pi.ideal.u() == least);
      CHECK(pi.type == (d % p == 0 ? SplitType::Ramified : SplitType::Split));
      CHECK(ideal_multiply(pi.ideal, conjugate(pi.ideal)) == principal(ctx, Int(p)));
    }
  }
}

TEST_CASE("conjugate") {
  auto ctx = make_context(Int(-20));
  const OIdeal a(ctx, 3, 2, 1);
  CHECK(conjugate(a) == OIdeal(ctx, 3, 4, 1));
  CHECK(conjugate(a) == OIdeal(ctx, 3, -2, 1));
  CHECK(conjugate(conjugate(a)) == a);
  const OIdeal r5 = prime_above(ctx, 5).ideal;
  CHECK(ideal_to_class(conjugate(r5)) == ideal_to_class(r5));
}

TEST_CASE("ideal_to_class examples") {
  auto ctx = make_context(Int(-20));
  CHECK(ideal_form(OIdeal(ctx, 3, 2, 1)) == Form(3, 2, 2));
  CHECK(ideal_to_class(OIdeal(ctx, 3, 2, 1)).rep() == Form(2, 2, 3));
  for (long d : {-20L, -23L, -3L, -4L, -12L, -63L}) {
    auto c = make_context(Int(d));
    CHECK(ideal_to_class(OIdeal::unit(c)) == identity_class(Int(d)));
  }
  // ramified prime over 5: class of (5,10,6) ~ (5,0,1) = (1,0,5), principal
  CHECK(ideal_to_class(OIdeal(ctx, 5, 10, 1)) == identity_class(Int(-20)));
  CHECK(ideal_form(OIdeal(ctx, 5, 10, 1)) == Form(5, 0, 1));  // basis normalized to b = 0

  // an ideal sharing a factor with the conductor
  auto c12 = make_context(Int(-12));
  const OIdeal two(c12, 2, 2, 1);  // {2, 1 + sqrt(-3)}
  CHECK_FALSE(two.invertible());
  try {
    ideal_to_class(two);
    FAIL("expected NotInvertible");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotInvertible);
  }
}

TEST_CASE("ideal_form is the norm form of the basis") {
  for (long d : {-20L, -23L, -63L, -995L}) {
    auto ctx = make_context(Int(d));
    auto primes = prime_ideals(ctx, 60);
    for (int i = 0; i < 30; ++i) {
      const OIdeal a = random_ideal(ctx, primes, 3);
      const Form f = ideal_form(a);
      CHECK(f.discriminant() == d);
      for (long x = -3; x <= 3; ++x)
        for (long y = -3; y <= 3; ++y) {
          const OrderElement alpha = a.alpha(), beta = a.beta();
          const OrderElement e{x * alpha.u + y * beta.u, x * alpha.v + y * beta.v};
          CHECK(norm(ctx, e) == a.norm() * f.evaluate(x, y));
        }
    }
  }
}

TEST_CASE("ideal_multiply basics") {
  auto ctx = make_context(Int(-20));
  const OIdeal a(ctx, 3, 2, 1);
  CHECK(ideal_multiply(a, OIdeal::unit(ctx)) == a);
  const OIdeal aa = ideal_multiply(a, conjugate(a));
  CHECK(aa.norm() == 9);
  CHECK(aa == principal(ctx, Int(3)));
}

TEST_CASE("ideal/form dictionary: homomorphism, conjugate-inverse, norms") {
  for (long d : {-20L, -23L, -47L, -71L, -84L, -120L, -12L, -36L, -63L, -3299L}) {
    auto ctx = make_context(Int(d));
    auto primes = prime_ideals(ctx, 80);
    CAPTURE(d);
    for (int i = 0; i < 100; ++i) {
      const OIdeal a = random_ideal(ctx, primes, 2);
      const OIdeal b = random_ideal(ctx, primes, 2);
      const OIdeal ab = ideal_multiply(a, b);
      CHECK(ideal_to_class(ab) == compose(ideal_to_class(a), ideal_to_class(b)));
      CHECK(ideal_to_class(conjugate(a)) == inverse(ideal_to_class(a)));
      if (gcd(a.norm(), b.norm()) == 1) CHECK(ab.norm() == a.norm() * b.norm());
      CHECK(ideal_multiply(a, conjugate(a)) == principal(ctx, a.norm()));
    }
  }
}

TEST_CASE("extract_representation examples") {
  auto ctx = make_context(Int(-20));
  auto xy = extract_representation(Form(2, 2, 3), OIdeal(ctx, 3, 2, 1));
  CHECK(Form(2, 2, 3).evaluate(xy.first, xy.second) == 3);

  auto one = extract_representation(Form(1, 0, 5), OIdeal::unit(ctx));
  CHECK(Form(1, 0, 5).evaluate(one.first, one.second) == 1);

  const OIdeal p3 = prime_above(ctx, 3).ideal;
  const OIdeal p7 = prime_above(ctx, 7).ideal;
  OIdeal a = ideal_multiply(p3, p7);
  if (ideal_to_class(a) != identity_class(Int(-20))) a = ideal_multiply(p3, conjugate(p7));
  REQUIRE(a.norm() == 21);
  auto r = extract_representation(Form(1, 0, 5), a);
  const auto all = oracle::brute_representations(Form(1, 0, 5), Int(21));
  CHECK(all.size() == 8);
  CHECK(std::find(all.begin(), all.end(), r) != all.end());

  try {
    extract_representation(Form(1, 0, 5), p3);
    FAIL("expected ClassMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ClassMismatch);
  }
}

TEST_CASE("extract_representation on random ideals, every form in the class") {
  for (long d : {-20L, -23L, -84L, -63L, -36L, -995L}) {
    auto ctx = make_context(Int(d));
    auto primes = prime_ideals(ctx, 50);
    for (int i = 0; i < 60; ++i) {
      const OIdeal a = random_ideal(ctx, primes, 3);
      const FormClass cls = ideal_to_class(a);
      for (const Form& f : {cls.rep(), act(cls.rep(), quadrep::testing::random_sl2(20))}) {
        auto [x, y] = extract_representation(f, a);
        CHECK(f.evaluate(x, y) == a.norm());
      }
    }
  }
}

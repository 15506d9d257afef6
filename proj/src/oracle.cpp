#include "quadrep/oracle.hpp"

#include <algorithm>

#include "quadrep/error.hpp"

namespace quadrep::oracle {

std::vector<std::pair<Int, Int>> brute_representations(const Form& f, const Int& m, bool primitive_only) {
  const Int D = f.discriminant();
  const Int& a = f.a();
  const Int& b = f.b();
  std::vector<std::pair<Int, Int>> out;
  if (m < 1) return out;

  // 4a f(x,y) = (2ax + by)^2 + |D| y^2
  const Int bound = isqrt(4 * a * m / -D);
  const Int two_a = 2 * a;
  for (Int y = -bound; y <= bound; ++y) {
    const Int disc = D * y * y + 4 * a * m;
    if (!is_square(disc)) continue;
    const Int s = isqrt(disc);
    for (const Int& num : {Int(-b * y + s), Int(-b * y - s)}) {
      if (!mpz_divisible_p(num.get_mpz_t(), two_a.get_mpz_t())) continue;
      Int x = num / two_a;
      if (f.evaluate(x, y) != m) continue;
      if (primitive_only && gcd(x, y) != 1) continue;
      out.emplace_back(std::move(x), y);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

namespace {

struct PrimeSearch {
  std::optional<Form> form;
  int roots = 0;
};

PrimeSearch search_prime(const Int& D, const Int& p) {
  PrimeSearch out;
  const Int four_p = 4 * p;
  const Int target = floor_mod(D, four_p);
  const int parity = mpz_odd_p(D.get_mpz_t()) ? 1 : 0;
  for (Int b = parity; b < 2 * p; b += 2) {
    if (floor_mod(b * b, four_p) != target) continue;
    ++out.roots;
    if (!out.form) out.form = Form(p, b, (b * b - D) / four_p);
  }
  return out;
}

}  // namespace

std::optional<Form> prime_form(const Int& D, const Int& p) { return search_prime(D, p).form; }

std::optional<std::vector<int>> brute_signs(const Form& f, const Int& m, const Factorization& F) {
  require_valid(F);
  if (F.m != m) throw Error(ErrorCode::InvalidFactorization, "factorization is of " + F.m.get_str());
  const Int D = f.discriminant();

  std::vector<FormClass> split;
  FormClass fixed = identity_class(D);
  for (const auto& [p, e] : F.primes) {
    PrimeSearch found = search_prime(D, p);
    if (!found.form) return std::nullopt;
    const FormClass cls = reduced_class(*found.form);
    if (found.roots >= 2) {
      split.push_back(cls);
    } else {
      fixed = compose(fixed, cls);
    }
  }
  const std::size_t r = split.size();
  if (r > kMaxSignPrimes) throw Error(ErrorCode::CapExceeded, std::to_string(r) + " split primes exceeds the oracle cap");

  const FormClass target = reduced_class(f);
  std::vector<FormClass> inverses;
  for (const auto& c : split) inverses.push_back(inverse(c));

  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << r); ++mask) {
    FormClass acc = fixed;
    std::vector<int> signs(r);
    for (std::size_t i = 0; i < r; ++i) {
      const bool negative = (mask >> (r - 1 - i)) & 1;
      signs[i] = negative ? -1 : +1;
      acc = compose(acc, negative ? inverses[i] : split[i]);
    }
    if (acc == target) return signs;
  }
  return std::nullopt;
}

}  // namespace quadrep::oracle

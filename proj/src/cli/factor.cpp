#include <algorithm>
#include <string>

#include "quadrep/cli.hpp"
#include "quadrep/error.hpp"

namespace quadrep::cli {

namespace {

constexpr unsigned long kTrialBound = 10000;

// Brent's cycle-finding variant of Pollard rho. n odd composite.
Int rho(const Int& n) {
  for (unsigned long c = 1;; ++c) {
    Int y = 2, x, g = 1, q = 1, ys;
    unsigned long r = 1;
    const unsigned long batch = 128;
    auto step = [&](const Int& v) -> Int { return (v * v + c) % n; };
    do {
      x = y;
      for (unsigned long i = 0; i < r; ++i) y = step(y);
      unsigned long k = 0;
      do {
        ys = y;
        for (unsigned long i = 0; i < std::min(batch, r - k); ++i) {
          y = step(y);
          q = q * abs(x - y) % n;
        }
        g = gcd(q, n);
        k += batch;
      } while (k < r && g == 1);
      r *= 2;
    } while (g == 1);
    if (g == n) {
      do {
        ys = step(ys);
        g = gcd(abs(x - ys), n);
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

void split_into(const Int& n, std::vector<PrimePower>& out) {
  if (n == 1) return;
  if (is_prime(n)) {
    out.push_back({n, 1});
    return;
  }
  if (is_square(n)) {
    const Int s = isqrt(n);
    split_into(s, out);
    split_into(s, out);
    return;
  }
  const Int d = rho(n);
  split_into(d, out);
  split_into(n / d, out);
}

}  // namespace

Factorization factor(const Int& m) {
  if (m < 1) throw Error(ErrorCode::InvalidInput, "m must be positive");
  std::vector<PrimePower> primes;
  Int n = m;
  for (unsigned long p = 2; p < kTrialBound && Int(p) * p <= n; ++p) {
    unsigned e = 0;
    while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
      n /= p;
      ++e;
    }
    if (e > 0) primes.push_back({Int(p), e});
  }
  split_into(n, primes);
  return make_factorization(m, std::move(primes));
}

Int parse_int(std::string_view text) {
  std::string token;
  for (char ch : text) {
    if (ch != ' ' && ch != '\t') token.push_back(ch);
  }
  if (!token.empty() && token[0] == '+') token.erase(0, 1);
  Int v;
  if (token.empty() || v.set_str(token, 10) != 0) {
    throw Error(ErrorCode::InvalidInput, "not an integer: '" + std::string(text) + "'");
  }
  return v;
}

Factorization parse_factors(std::string_view text, const Int& m) {
  std::vector<PrimePower> primes;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t end = std::min(text.find(',', start), text.size());
    std::string_view item = text.substr(start, end - start);
    if (!item.empty()) {
      const std::size_t caret = item.find('^');
      PrimePower pp;
      pp.p = parse_int(item.substr(0, caret));
      if (caret != std::string_view::npos) {
        const Int e = parse_int(item.substr(caret + 1));
        if (e < 1 || !e.fits_uint_p()) throw Error(ErrorCode::InvalidInput, "bad exponent in '" + std::string(item) + "'");
        pp.e = static_cast<unsigned>(e.get_ui());
      }
      primes.push_back(std::move(pp));
    }
    start = end + 1;
  }
  Factorization F = make_factorization(m, std::move(primes));
  require_valid(F);
  return F;
}

SquareSplit square_split(const Factorization& F) {
  SquareSplit out{1, Factorization{1, {}}};
  for (const auto& [p, e] : F.primes) {
    for (unsigned i = 0; i < e / 2; ++i) out.k *= p;
    if (e % 2 == 1) {
      out.reduced.m *= p;
      out.reduced.primes.push_back({p, 1});
    }
  }
  return out;
}

}  // namespace quadrep::cli

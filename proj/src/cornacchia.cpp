#include "quadrep/cornacchia.hpp"

#include <stdexcept>
#include <vector>

#include "quadrep/error.hpp"

namespace quadrep {

namespace {

constexpr unsigned long kBruteForceModulus = 1024;

Int pow_ui(const Int& base, unsigned long e) {
  Int r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
  return r;
}

Int inverse_mod(const Int& a, const Int& n) {
  Int r;
  if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), n.get_mpz_t()) == 0) {
    throw std::logic_error("inverse_mod: " + a.get_str() + " not invertible mod " + n.get_str());
  }
  return r;
}

// All x in [0, q^k) with x^2 = -n (mod q^k).
std::vector<Int> roots_mod_prime_power(const Int& n, const Int& q, unsigned k) {
  std::vector<Int> roots;
  const Int target_q = floor_mod(-n, q);
  if (q < kBruteForceModulus) {
    for (Int x = 0; x < q; ++x) {
      if (floor_mod(x * x, q) == target_q) roots.push_back(x);
    }
  } else if (auto r = sqrt_mod_p(target_q, q)) {
    roots.push_back(*r);
    if (*r != 0) roots.push_back(q - *r);
  }

  Int qi = q;
  for (unsigned i = 1; i < k; ++i) {
    const Int next = qi * q;
    const Int target = floor_mod(-n, next);
    std::vector<Int> lifted;
    for (const Int& x : roots) {
      if (q >= kBruteForceModulus && floor_mod(x, q) != 0) {
        // Hensel: x + t q^i with t = -(x^2 + n) / q^i * (2x)^-1 mod q
        Int t = floor_mod(-((x * x + n) / qi) * inverse_mod(2 * x, q), q);
        lifted.push_back(x + t * qi);
        continue;
      }
      for (Int t = 0; t < q; ++t) {
        Int y = x + t * qi;
        if (floor_mod(y * y, next) == target) lifted.push_back(y);
      }
    }
    roots = std::move(lifted);
    qi = next;
  }
  return roots;
}

// Trial-division factorization, used only for the leading coefficient.
std::vector<PrimePower> trial_factor(Int n) {
  std::vector<PrimePower> out;
  for (Int p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
    unsigned e = 0;
    while (mpz_divisible_p(n.get_mpz_t(), p.get_mpz_t())) {
      n /= p;
      ++e;
    }
    if (e > 0) out.push_back({p, e});
  }
  if (n > 1) out.push_back({n, 1});
  return out;
}

}  // namespace

std::optional<std::pair<Int, Int>> cornacchia_descent(const Int& d, const Int& M, const Int& root) {
  Int b = floor_mod(root, M);
  if (2 * b <= M) b = M - b;  // root taken in (M/2, M]
  Int a = M;
  const Int limit = isqrt(M);
  while (b > limit) {
    Int r = a % b;
    a = b;
    b = r;
  }
  const Int rest = M - b * b;
  if (rest < 0 || !mpz_divisible_p(rest.get_mpz_t(), d.get_mpz_t())) return std::nullopt;
  const Int s2 = rest / d;
  if (!is_square(s2)) return std::nullopt;
  return std::pair<Int, Int>{b, isqrt(s2)};
}

std::optional<std::pair<Int, Int>> cornacchia_prime(const Int& d, const Int& p) {
  if (d < 1) throw Error(ErrorCode::InvalidInput, "d must be positive");
  if (!is_prime(p)) throw Error(ErrorCode::InvalidInput, p.get_str() + " is not prime");
  auto r = sqrt_mod_p(floor_mod(-d, p), p);
  if (!r) return std::nullopt;
  auto sol = cornacchia_descent(d, p, *r);
  if (sol && sol->first * sol->first + d * sol->second * sol->second != p) {
    throw std::logic_error("cornacchia_prime: descent returned a non-solution");
  }
  return sol;
}

CornacchiaResult cornacchia_composite(const Int& d, const Int& m, const Factorization& F) {
  if (d < 1) throw Error(ErrorCode::InvalidInput, "d must be positive");
  if (F.m != m) throw Error(ErrorCode::InvalidFactorization, "factorization is of " + F.m.get_str());
  require_valid(F);
  if (!F.square_free()) throw Error(ErrorCode::NotSquareFree, m.get_str() + " is not square-free");
  if (F.omega() >= 63) throw Error(ErrorCode::CapExceeded, "too many prime factors");

  CornacchiaResult result;
  if (m == 1) {
    result.roots_tried = 1;
    result.solution = std::pair<Int, Int>{1, 0};
    return result;
  }

  // CRT idempotents e_p = 1 (mod p), 0 (mod m/p), scaled by the root mod p.
  std::vector<Int> parts;
  for (const auto& [p, e] : F.primes) {
    auto r = sqrt_mod_p(floor_mod(-d, p), p);
    if (!r) return result;
    const Int cofactor = m / p;
    parts.push_back(*r * cofactor * inverse_mod(cofactor % p, p) % m);
  }

  const std::uint64_t combos = std::uint64_t{1} << parts.size();
  for (std::uint64_t mask = 0; mask < combos; ++mask) {
    Int root = 0;
    for (std::size_t i = 0; i < parts.size(); ++i) {
      if ((mask >> i) & 1) {
        root -= parts[i];
      } else {
        root += parts[i];
      }
    }
    ++result.roots_tried;
    if (auto sol = cornacchia_descent(d, m, root)) {
      if (sol->first * sol->first + d * sol->second * sol->second != m) {
        throw std::logic_error("cornacchia_composite: descent returned a non-solution");
      }
      result.solution = std::move(sol);
      return result;
    }
  }
  return result;
}

CornacchiaResult cornacchia_general(const Form& f, const Int& m, const Factorization& F) {
  if (F.m != m) throw Error(ErrorCode::InvalidFactorization, "factorization is of " + F.m.get_str());
  require_valid(F);
  if (!F.square_free()) throw Error(ErrorCode::NotSquareFree, m.get_str() + " is not square-free");

  const Int& a = f.a();
  const Int& b = f.b();
  const Int N = -f.discriminant();
  const Int M = 4 * a * m;

  std::vector<PrimePower> pieces = F.primes;
  for (auto& pp : trial_factor(4 * a)) pieces.push_back(std::move(pp));
  const Factorization full = make_factorization(M, std::move(pieces));

  CornacchiaResult result;
  const Int two_a = 2 * a;

  // g ranges over all integers with g^2 | M; for each, primitive solutions
  // of X'^2 + N Y'^2 = M / g^2 are scaled back by g.
  std::vector<unsigned> half(full.primes.size(), 0);
  while (true) {
    Int g = 1;
    for (std::size_t i = 0; i < half.size(); ++i) g *= pow_ui(full.primes[i].p, half[i]);
    const Int Mg = M / (g * g);

    std::vector<Int> roots{Int(0)};
    Int modulus = 1;
    for (std::size_t i = 0; i < full.primes.size(); ++i) {
      const unsigned k = full.primes[i].e - 2 * half[i];
      if (k == 0) continue;
      const Int& q = full.primes[i].p;
      const Int qk = pow_ui(q, k);
      std::vector<Int> local = roots_mod_prime_power(N, q, k);
      std::vector<Int> combined;
      // x = r1 (mod modulus), x = r2 (mod qk)
      const Int inv = inverse_mod(modulus % qk, qk);
      for (const Int& r1 : roots) {
        for (const Int& r2 : local) {
          Int t = floor_mod((r2 - r1) * inv, qk);
          combined.push_back(r1 + modulus * t);
        }
      }
      roots = std::move(combined);
      modulus *= qk;
    }

    for (const Int& r : roots) {
      ++result.roots_tried;
      auto sol = cornacchia_descent(N, Mg, r);
      if (!sol) continue;
      const Int X0 = sol->first * g;
      const Int Y0 = sol->second * g;
      for (int sx : {1, -1}) {
        for (int sy : {1, -1}) {
          const Int X = X0 * sx;
          const Int Y = Y0 * sy;
          const Int num = X - b * Y;
          if (!mpz_divisible_p(num.get_mpz_t(), two_a.get_mpz_t())) continue;
          Int x = num / two_a;
          if (f.evaluate(x, Y) == m) {
            result.solution = std::pair<Int, Int>{std::move(x), Y};
            return result;
          }
        }
      }
    }

    std::size_t i = 0;
    for (; i < half.size(); ++i) {
      if (2 * (half[i] + 1) <= full.primes[i].e) {
        ++half[i];
        break;
      }
      half[i] = 0;
    }
    if (i == half.size()) break;
  }
  return result;
}

}  // namespace quadrep

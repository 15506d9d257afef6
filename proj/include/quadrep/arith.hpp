#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace quadrep {

using Int = mpz_class;

struct PrimePower {
  Int p;
  unsigned e = 1;

  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

struct Factorization {
  Int m;
  std::vector<PrimePower> primes;

  bool square_free() const;
  std::size_t omega() const { return primes.size(); }
};

/// Kronecker symbol (a/n), n != 0. Binary algorithm, no GMP call.
int kronecker(const Int& a, const Int& n);

/// Square root of a modulo an odd or even prime p, 0 <= a < p.
/// Returns the root in [0, p/2] or nullopt for a non-residue.
std::optional<Int> sqrt_mod_p(const Int& a, const Int& p);

/// Deterministic for n < 3.3e24 (Miller-Rabin with the 13 primes up to 41).
/// Above that bound a further 16 fixed bases are tried, so a composite
/// slipping through would need to be a strong pseudoprime to 29 bases.
bool is_prime(const Int& n);

Int isqrt(const Int& n);
bool is_square(const Int& n);

Int floor_mod(const Int& a, const Int& n);

// Extended gcd: returns g = gcd(a, b) >= 0 with u*a + v*b = g.
Int ext_gcd(const Int& a, const Int& b, Int& u, Int& v);

/// Ok (nullopt) or a description of the first failing component.
std::optional<std::string> validate_factorization(const Factorization& f);

/// Throws Error(InvalidFactorization) when validation fails.
void require_valid(const Factorization& f);

// Sorted by prime, exponents merged. Does not check primality.
Factorization make_factorization(const Int& m, std::vector<PrimePower> primes);

// Small-integer view used where values are bounded by the class number.
std::int64_t to_i64(const Int& n);

std::size_t hash_value(const Int& n) noexcept;

}  // namespace quadrep

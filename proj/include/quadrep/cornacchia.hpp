#pragma once

#include <cstdint>
#include <optional>
#include <utility>

#include "quadrep/arith.hpp"
#include "quadrep/forms.hpp"

namespace quadrep {

struct CornacchiaResult {
  std::optional<std::pair<Int, Int>> solution;
  std::uint64_t roots_tried = 0;
};

/// x^2 + d y^2 = p for prime p, 1 <= d < p. Returns a primitive solution
/// or nullopt.
std::optional<std::pair<Int, Int>> cornacchia_prime(const Int& d, const Int& p);

/// x^2 + d y^2 = m for square-free m given its factorization.
///
/// Every one of the 2^omega(m) sign combinations of the per-prime roots of
/// -d is CRT-combined and run through the descent, in order, until one
/// yields a solution. roots_tried counts the descents performed. When some
/// prime has no root of -d nothing is tried and roots_tried is 0.
CornacchiaResult cornacchia_composite(const Int& d, const Int& m, const Factorization& F);

/// f(x, y) = m through X^2 + |D| Y^2 = 4am with X = 2ax + bY.
/// Tries every root of -|D| modulo 4am / g^2 for each g with g^2 | 4am and
/// every sign of (X, Y). roots_tried counts descents.
CornacchiaResult cornacchia_general(const Form& f, const Int& m, const Factorization& F);

// The descent itself: Euclid on (M, r) down to the first remainder below
// sqrt(M), then the square test. Exposed for tests.
std::optional<std::pair<Int, Int>> cornacchia_descent(const Int& d, const Int& M, const Int& root);

}  // namespace quadrep

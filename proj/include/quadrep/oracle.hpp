#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "quadrep/arith.hpp"
#include "quadrep/forms.hpp"

namespace quadrep::oracle {

inline constexpr std::size_t kMaxSignPrimes = 20;

/// Every (x, y) with f(x, y) = m, by scanning |y| <= sqrt(4am/|D|) and
/// solving the quadratic in x exactly. Sorted.
std::vector<std::pair<Int, Int>> brute_representations(const Form& f, const Int& m, bool primitive_only = false);

/// Prime form (p, b, c) of discriminant D with b found by direct search
/// over [0, 2p); nullopt when p is inert.
std::optional<Form> prime_form(const Int& D, const Int& p);

/// Tries all 2^r sign vectors (first prime varies slowest, +1 before -1)
/// against prod [p_i]^delta_i prod [p_j] = [f]. Returns the first match,
/// or nullopt (also for an inert prime). Throws CapExceeded for r > 20.
std::optional<std::vector<int>> brute_signs(const Form& f, const Int& m, const Factorization& F);

}  // namespace quadrep::oracle

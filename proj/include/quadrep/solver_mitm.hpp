#pragma once

#include <cstdint>
#include <vector>

#include "quadrep/solve.hpp"

namespace quadrep {

/// A reduced class product over one half of the split primes with the sign
/// vector that produced it. Bit i of signs set means delta_i = -1.
struct SignedProductEntry {
  FormClass cls;
  std::uint64_t signs = 0;
};

/// All 2^n signed products of the given classes, in sign-mask order.
/// Adds the number of compositions performed to compositions.
std::vector<SignedProductEntry> signed_products(const std::vector<FormClass>& classes, const FormClass& identity,
                                                std::uint64_t& compositions);

/// Meet in the middle over signed products of split-prime classes; the
/// first half is kept as a sorted list and probed by binary search.
SolveOutcome solve_mitm(const Form& f, const Int& m, const Factorization& F);

/// Same contract with the first half kept in a hash table.
SolveOutcome solve_mitm_hashed(const Form& f, const Int& m, const Factorization& F);

}  // namespace quadrep

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "quadrep/classgroup.hpp"
#include "quadrep/solve.hpp"

namespace quadrep {

/// Layered search for delta in {-1,+1}^r with sum delta_i v_i = target in G.
/// Layer i holds every sum reachable with the first i vectors, each with a
/// parent link for backtracking. states_visited counts all layer entries,
/// layer 0 included.
std::optional<std::vector<int>> signed_subset_sum(const ClassGroupStructure& G, const std::vector<GroupVector>& v,
                                                  const GroupVector& target, std::uint64_t& states_visited);

/// Solve f(x, y) = m through the signed subset sum in the class group.
/// Requires square-free m coprime to the conductor.
SolveOutcome solve_dp(const Form& f, const Int& m, const Factorization& F,
                      std::int64_t max_h = kDefaultMaxClassNumber);

}  // namespace quadrep

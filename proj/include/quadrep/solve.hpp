#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "quadrep/arith.hpp"
#include "quadrep/classgroup.hpp"
#include "quadrep/forms.hpp"
#include "quadrep/quadorder.hpp"

namespace quadrep {

enum class SolveStatus { Solution, NoSolution };

enum class NoSolutionReason {
  None,
  InertPrime,      // some p | m has (D/p) = -1
  NoSignVector,    // no signed product of prime classes reaches [f]
  RootsExhausted,  // Cornacchia tried every root
};

struct SolveCounters {
  std::uint64_t states_visited = 0;  // DP: sum of layer sizes
  std::uint64_t compositions = 0;    // MITM: form compositions
  std::uint64_t lookups = 0;         // MITM: probes into L1
  std::uint64_t roots_tried = 0;     // Cornacchia descents
};

struct SolveOutcome {
  SolveStatus status = SolveStatus::NoSolution;
  Int x, y;
  NoSolutionReason reason = NoSolutionReason::None;
  Int witness_prime;            // set for InertPrime
  std::vector<int> signs;       // delta_i in {-1, +1}, one per split prime
  SolveCounters counters;

  bool solved() const { return status == SolveStatus::Solution; }
};

/// Primes of m sorted into split and ramified lists with their prime ideals
/// and reduced classes, after the inert screen. Shared by the solvers.
struct PrimeData {
  Int p;
  OIdeal ideal;
  FormClass cls;
};

struct Instance {
  QuadOrderCtx ctx;
  FormClass target;             // [f]
  std::vector<PrimeData> split;     // ascending p
  std::vector<PrimeData> ramified;  // ascending p
  std::optional<Int> inert;     // first inert prime, if any
};

/// Validates (f, m, F) and classifies the primes of m.
/// Throws InvalidFactorization, NotSquareFree, ConductorNotCoprime.
Instance prepare_instance(const Form& f, const Int& m, const Factorization& F);

/// a = prod q_i prod p_j with q_i = p_i (delta = +1) or its conjugate
/// (delta = -1), then (x, y) from the ideal. Fills x, y, signs and status.
void reconstruct_solution(const Form& f, const Instance& inst, const std::vector<int>& signs, SolveOutcome& out);

}  // namespace quadrep

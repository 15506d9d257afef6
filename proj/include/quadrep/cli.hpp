#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "quadrep/arith.hpp"

namespace quadrep::cli {

enum ExitCode : int {
  kSolved = 0,
  kNoSolution = 1,
  kInvalidInput = 2,
  kDeskScaleExceeded = 3,
};

/// Factorization of m by trial division and Pollard rho (Brent). A CLI
/// convenience; the solvers take the factorization as given.
Factorization factor(const Int& m);

/// "p1,p2^e2,..." for m. Throws Error(InvalidFactorization) when the
/// factors do not multiply to m or are not prime.
Factorization parse_factors(std::string_view text, const Int& m);

Int parse_int(std::string_view text);

/// m = k^2 m' with m' square-free, read off the factorization.
struct SquareSplit {
  Int k;
  Factorization reduced;  // of m'
};
SquareSplit square_split(const Factorization& F);

/// Entry point shared by the executable and the tests. JSON goes to out,
/// diagnostics to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace quadrep::cli

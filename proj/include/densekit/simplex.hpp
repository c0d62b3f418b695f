#pragma once

#include <vector>

namespace densekit {

// Maximizes c.x subject to A x <= b, x >= 0, with b >= 0 (slack start).
// Dense simplex over exact rationals with Bland's rule, so it terminates and
// the reported optimum is exact up to the final double conversion.
// Throws PreconditionError on shape mismatch or negative b, NumericError if
// the program is unbounded.
struct SimplexResult {
    std::vector<double> x;
    double value = 0.0;
};

SimplexResult simplex_maximize(const std::vector<std::vector<double>>& a,
                               const std::vector<double>& b, const std::vector<double>& c);

}  // namespace densekit

#include "densekit/simplex.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include "densekit/errors.hpp"

namespace densekit {

namespace {
using Rational = boost::multiprecision::cpp_rational;
}

SimplexResult simplex_maximize(const std::vector<std::vector<double>>& a,
                               const std::vector<double>& b, const std::vector<double>& c) {
    const size_t m = a.size();
    const size_t n = c.size();
    if (b.size() != m) throw PreconditionError("simplex: |b| != row count");
    for (const auto& row : a)
        if (row.size() != n) throw PreconditionError("simplex: row width != |c|");
    for (double bi : b)
        if (bi < 0) throw PreconditionError("simplex: b must be nonnegative");

    // Tableau rows: [A | I | b]; basis starts at the slacks.
    const size_t width = n + m + 1;
    std::vector<std::vector<Rational>> t(m, std::vector<Rational>(width, 0));
    for (size_t i = 0; i < m; ++i) {
        for (size_t j = 0; j < n; ++j) t[i][j] = Rational(a[i][j]);
        t[i][n + i] = 1;
        t[i][width - 1] = Rational(b[i]);
    }
    std::vector<Rational> cost(width, 0);  // reduced costs for max
    for (size_t j = 0; j < n; ++j) cost[j] = Rational(c[j]);
    Rational objective = 0;
    std::vector<size_t> basis(m);
    for (size_t i = 0; i < m; ++i) basis[i] = n + i;

    while (true) {
        // Bland: entering = smallest index with positive reduced cost.
        size_t enter = width;
        for (size_t j = 0; j + 1 < width; ++j)
            if (cost[j] > 0) {
                enter = j;
                break;
            }
        if (enter == width) break;

        // Ratio test; ties resolved by smallest basis index (Bland).
        size_t leave = m;
        Rational best_ratio = 0;
        for (size_t i = 0; i < m; ++i) {
            if (t[i][enter] <= 0) continue;
            Rational ratio = t[i][width - 1] / t[i][enter];
            if (leave == m || ratio < best_ratio ||
                (ratio == best_ratio && basis[i] < basis[leave])) {
                leave = i;
                best_ratio = ratio;
            }
        }
        if (leave == m) throw NumericError("simplex: unbounded program");

        // Pivot on (leave, enter).
        const Rational pivot = t[leave][enter];
        for (auto& cell : t[leave]) cell /= pivot;
        for (size_t i = 0; i < m; ++i) {
            if (i == leave || t[i][enter] == 0) continue;
            const Rational factor = t[i][enter];
            for (size_t j = 0; j < width; ++j) t[i][j] -= factor * t[leave][j];
        }
        const Rational cost_factor = cost[enter];
        for (size_t j = 0; j < width; ++j) cost[j] -= cost_factor * t[leave][j];
        objective += cost_factor * best_ratio;
        basis[leave] = enter;
    }

    SimplexResult out;
    out.x.assign(n, 0.0);
    for (size_t i = 0; i < m; ++i)
        if (basis[i] < n) out.x[basis[i]] = static_cast<double>(t[i][width - 1]);
    out.value = static_cast<double>(objective);
    return out;
}

}  // namespace densekit

#pragma once

#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "densekit/graph.hpp"

namespace densekit {

// A dual point for (LP-D)/(LPW-D): z plus one y per vertex.
struct DualPoint {
    double z = 0.0;
    std::vector<double> y;
};

// One restricted-LP column: a vertex set (DkC family) or a bounded-edge
// subgraph (GP family) together with its edge count m(.). The dual constraint
// it represents is z + sum_{v in vertices} y_v >= m.
struct Column {
    VertexSet vertices;
    std::vector<Edge> edges;  // empty for vertex-set columns
    long m = 0;

    bool operator==(const Column&) const = default;
};

double column_slack(const Column& col, const DualPoint& p);  // z + sum y - m

// Separation callback: nullopt = accept, otherwise a violated column. The
// driver re-verifies every returned column arithmetically and throws
// OracleError if it is not actually violated.
using SeparationFn = std::function<std::optional<Column>(const DualPoint&)>;

struct EllipsoidConfig {
    double feas_tol = 1e-7;                 // relative feasibility tolerance
    double volume_floor_log2_per_dim = -64; // infeasibility certificate floor
    long iter_multiplier = 50;              // iteration cap scale
    int restricted_check_interval = 25;     // restricted-LP infeasibility probe
    int amplification = 0;                  // oracle repetitions; 0 = num_vertices
};

struct FeasiblePoint {
    DualPoint point;
    std::vector<Column> columns;  // every column the oracle ever returned
    long iterations = 0;
};

struct InfeasibleCertificate {
    std::vector<Column> columns;
    long iterations = 0;
    std::string kind;  // "volume" or "restricted-lp"
};

using FeasibilityOutcome = std::variant<FeasiblePoint, InfeasibleCertificate>;

// Ellipsoid feasibility for F(R', C): box 0 <= z, y_v <= box_bound, budget
// z_coeff*z + sum y <= budget, plus the oracle's column constraints. Box and
// budget are checked manually before consulting the oracle; the oracle is
// amplified (first violation wins, otherwise `amplification` accepts).
// Infeasibility is certified either by the volume floor or by the restricted
// primal over the collected columns exceeding the budget.
FeasibilityOutcome ellipsoid_feasibility(int num_vertices, double z_coeff, double box_bound,
                                         double budget, const SeparationFn& oracle,
                                         const EllipsoidConfig& cfg = {});

// Restricted primal (LP-P2 / LPW-P2 over a finite column family):
//   max sum m(S) x_S   s.t.  sum_{S: v in S} x_S <= 1 per vertex,
//                            sum_S x_S <= set_budget,  x >= 0.
struct RestrictedPrimal {
    std::vector<double> x;  // aligned with `columns`
    double value = 0.0;
};
RestrictedPrimal solve_restricted_primal(const std::vector<Column>& columns, int num_vertices,
                                         double set_budget);

// Budget scan of Obs. important-inequalities-for-fixed-C: tries budgets 2^C
// for C = 0..log M' (M' = least power of two above 2*N*|E|), returns the
// smallest feasible budget's accepted point lifted by beta (capped at |E|)
// and the union of the columns collected at the infeasible budgets below it.
struct DualScanResult {
    double value = 0.0;       // objective of the lifted point
    DualPoint scaled_point;
    std::vector<Column> columns;
    int c_star = 0;
    long total_iterations = 0;
    bool borderline = false;  // accepted within tolerance of the budget
};
DualScanResult maximize_via_binary_search(int num_vertices, double z_coeff, long edge_count,
                                          double beta_lift, const SeparationFn& oracle,
                                          const EllipsoidConfig& cfg = {});

}  // namespace densekit

#include "densekit/ellipsoid.hpp"

#include <algorithm>
#include <cmath>

#include "densekit/errors.hpp"
#include "densekit/simplex.hpp"

namespace densekit {

double column_slack(const Column& col, const DualPoint& p) {
    double sum = p.z;
    for (int v : col.vertices) sum += p.y[v];
    return sum - static_cast<double>(col.m);
}

namespace {

// Dual coordinates packed as x[0] = z, x[1+v] = y_v.
struct PackedCut {
    std::vector<double> grad;  // constraint grad.x <= rhs violated at center
    double rhs;
};

void append_column(std::vector<Column>& columns, const Column& col) {
    if (std::find(columns.begin(), columns.end(), col) == columns.end())
        columns.push_back(col);
}

}  // namespace

FeasibilityOutcome ellipsoid_feasibility(int num_vertices, double z_coeff, double box_bound,
                                         double budget, const SeparationFn& oracle,
                                         const EllipsoidConfig& cfg) {
    if (num_vertices < 1) throw PreconditionError("ellipsoid: dimension must be >= 1");
    if (box_bound <= 0) throw PreconditionError("ellipsoid: box bound must be positive");
    const int dim = num_vertices + 1;
    const int amplification = cfg.amplification > 0 ? cfg.amplification : num_vertices;
    const double tol = cfg.feas_tol * std::max(1.0, box_bound);

    // Origin-centered ball of radius R contains the box [0, box]^dim.
    const double radius = box_bound * (std::sqrt(static_cast<double>(dim)) + 1.0);
    std::vector<double> center(dim, 0.0);
    std::vector<std::vector<double>> shape(dim, std::vector<double>(dim, 0.0));
    for (int i = 0; i < dim; ++i) shape[i][i] = radius * radius;

    // Every central cut shrinks the volume by the fixed factor
    //   f(n) = (n/(n+1)) * (n^2/(n^2-1))^((n-1)/2),
    // so the volume certificate is an iteration count.
    const double nd = static_cast<double>(dim);
    const double log2_step =
        (std::log2(nd / (nd + 1.0))) + 0.5 * (nd - 1.0) * std::log2(nd * nd / (nd * nd - 1.0));
    // Down from the ball to floor^dim; the ball/box volume gap is absorbed
    // into the (generous) floor.
    const double log2_total =
        nd * (cfg.volume_floor_log2_per_dim - std::log2(2.0 * radius));
    const long volume_iters = static_cast<long>(std::ceil(log2_total / log2_step));
    const long iter_cap =
        cfg.iter_multiplier * static_cast<long>(dim + 1) * (dim + 1) +
        4 * std::max(volume_iters, 1L);

    std::vector<Column> columns;
    DualPoint point;
    point.y.assign(num_vertices, 0.0);

    auto unpack = [&](const std::vector<double>& x) {
        point.z = x[0];
        for (int v = 0; v < num_vertices; ++v) point.y[v] = x[1 + v];
    };

    // By weak duality, the restricted primal over the collected columns
    // (with set budget z_coeff) lower-bounds the restricted dual objective;
    // once it exceeds the budget, F over those columns alone is infeasible.
    size_t columns_at_last_probe = 0;
    auto restricted_infeasible = [&]() {
        if (columns.empty() || columns.size() == columns_at_last_probe) return false;
        columns_at_last_probe = columns.size();
        RestrictedPrimal rp = solve_restricted_primal(columns, num_vertices, z_coeff);
        return rp.value > budget + tol;
    };

    long iter = 0;
    while (true) {
        if (iter >= iter_cap)
            throw NumericError("ellipsoid: iteration cap exceeded without certificate");
        if (iter >= volume_iters)
            return InfeasibleCertificate{columns, iter, "volume"};
        if (cfg.restricted_check_interval > 0 && iter % cfg.restricted_check_interval == 0 &&
            restricted_infeasible())
            return InfeasibleCertificate{columns, iter, "restricted-lp"};

        unpack(center);
        PackedCut cut;
        bool have_cut = false;

        // Budget and box constraints are checked manually first.
        double obj = z_coeff * point.z;
        for (double yv : point.y) obj += yv;
        if (obj > budget + tol) {
            cut.grad.assign(dim, 1.0);
            cut.grad[0] = z_coeff;
            cut.rhs = budget;
            have_cut = true;
        }
        if (!have_cut) {
            for (int i = 0; i < dim && !have_cut; ++i) {
                if (center[i] < -tol) {
                    cut.grad.assign(dim, 0.0);
                    cut.grad[i] = -1.0;  // -x_i <= 0
                    cut.rhs = 0.0;
                    have_cut = true;
                } else if (center[i] > box_bound + tol) {
                    cut.grad.assign(dim, 0.0);
                    cut.grad[i] = 1.0;  // x_i <= box
                    cut.rhs = box_bound;
                    have_cut = true;
                }
            }
        }
        if (!have_cut) {
            for (int trial = 0; trial < amplification && !have_cut; ++trial) {
                std::optional<Column> hit = oracle(point);
                if (!hit) continue;
                if (column_slack(*hit, point) >= 0)
                    throw OracleError("separation oracle returned a non-violated constraint");
                append_column(columns, *hit);
                // Violated: z + sum y >= m  <=>  -(z + sum y) <= -m.
                cut.grad.assign(dim, 0.0);
                cut.grad[0] = -1.0;
                for (int v : hit->vertices) cut.grad[1 + v] = -1.0;
                cut.rhs = -static_cast<double>(hit->m);
                have_cut = true;
            }
        }
        if (!have_cut) {
            // Amplified accept. Project into the box before returning.
            point.z = std::clamp(point.z, 0.0, box_bound);
            for (auto& yv : point.y) yv = std::clamp(yv, 0.0, box_bound);
            return FeasiblePoint{point, columns, iter};
        }

        // Central-cut update for grad.x <= rhs.
        std::vector<double> pa(dim, 0.0);
        double gpg = 0.0;
        for (int i = 0; i < dim; ++i) {
            double s = 0.0;
            for (int j = 0; j < dim; ++j) s += shape[i][j] * cut.grad[j];
            pa[i] = s;
        }
        for (int i = 0; i < dim; ++i) gpg += cut.grad[i] * pa[i];
        if (!(gpg > 0.0) || !std::isfinite(gpg))
            throw NumericError("ellipsoid: shape matrix lost positive definiteness");
        const double inv_norm = 1.0 / std::sqrt(gpg);
        for (int i = 0; i < dim; ++i) center[i] -= pa[i] * inv_norm / (nd + 1.0);
        const double scale = nd * nd / (nd * nd - 1.0);
        const double shrink = 2.0 / (nd + 1.0);
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j)
                shape[i][j] = scale * (shape[i][j] - shrink * pa[i] * pa[j] / gpg);
        for (int i = 0; i < dim; ++i)  // symmetrize against drift
            for (int j = i + 1; j < dim; ++j) {
                double s = 0.5 * (shape[i][j] + shape[j][i]);
                shape[i][j] = shape[j][i] = s;
            }
        ++iter;
    }
}

RestrictedPrimal solve_restricted_primal(const std::vector<Column>& columns, int num_vertices,
                                         double set_budget) {
    if (set_budget < 0) throw PreconditionError("restricted primal: negative set budget");
    const size_t n = columns.size();
    if (n == 0) return {{}, 0.0};

    std::vector<std::vector<double>> a;
    std::vector<double> b;
    // One packing row per vertex that appears in some column.
    std::vector<char> seen(num_vertices, 0);
    for (const auto& col : columns)
        for (int v : col.vertices) {
            if (v < 0 || v >= num_vertices)
                throw PreconditionError("restricted primal: column vertex out of range");
            seen[v] = 1;
        }
    for (int v = 0; v < num_vertices; ++v) {
        if (!seen[v]) continue;
        std::vector<double> row(n, 0.0);
        for (size_t j = 0; j < n; ++j)
            if (std::binary_search(columns[j].vertices.begin(), columns[j].vertices.end(), v))
                row[j] = 1.0;
        a.push_back(std::move(row));
        b.push_back(1.0);
    }
    a.emplace_back(n, 1.0);
    b.push_back(set_budget);

    std::vector<double> c(n);
    for (size_t j = 0; j < n; ++j) c[j] = static_cast<double>(columns[j].m);

    SimplexResult res = simplex_maximize(a, b, c);
    return {std::move(res.x), res.value};
}

DualScanResult maximize_via_binary_search(int num_vertices, double z_coeff, long edge_count,
                                          double beta_lift, const SeparationFn& oracle,
                                          const EllipsoidConfig& cfg) {
    DualScanResult out;
    out.scaled_point.y.assign(num_vertices, 0.0);
    if (edge_count == 0) return out;  // edgeless: V = 0, no columns

    const double box = static_cast<double>(edge_count);
    // M' = least power of two above 2*N*|E|.
    int log_m = 1;
    while ((1L << log_m) <= 2L * num_vertices * edge_count) ++log_m;

    for (int c = 0; c <= log_m; ++c) {
        const double budget = std::ldexp(1.0, c);
        FeasibilityOutcome outcome =
            ellipsoid_feasibility(num_vertices, z_coeff, box, budget, oracle, cfg);
        if (auto* infeasible = std::get_if<InfeasibleCertificate>(&outcome)) {
            out.total_iterations += infeasible->iterations;
            for (const auto& col : infeasible->columns) append_column(out.columns, col);
            continue;
        }
        auto& feasible = std::get<FeasiblePoint>(outcome);
        out.total_iterations += feasible.iterations;
        out.c_star = c;
        // Columns met on the accepting run are kept too; extending R' past
        // the paper's union over infeasible budgets only helps the primal.
        for (const auto& col : feasible.columns) append_column(out.columns, col);

        // Lift the accepted point by beta, capped at the box.
        out.scaled_point.z = std::min(feasible.point.z * beta_lift, box);
        for (int v = 0; v < num_vertices; ++v)
            out.scaled_point.y[v] = std::min(feasible.point.y[v] * beta_lift, box);
        double value = z_coeff * out.scaled_point.z;
        for (double yv : out.scaled_point.y) value += yv;
        out.value = value;

        double raw = z_coeff * feasible.point.z;
        for (double yv : feasible.point.y) raw += yv;
        out.borderline = raw > budget - cfg.feas_tol * std::max(1.0, budget);
        return out;
    }
    throw PreconditionError("dual budget scan: every budget was infeasible");
}

}  // namespace densekit

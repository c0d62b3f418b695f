#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "densekit/ellipsoid.hpp"
#include "densekit/graph.hpp"
#include "densekit/oracles.hpp"
#include "densekit/profile.hpp"
#include "densekit/rng.hpp"

namespace densekit {

// Dual preprocessing of the separation oracles: z' = 2z and every y rounded
// to zero (below 1/4) or to a power of two near 4y, capped by the family.
struct NormalizedDual {
    double z2 = 0.0;           // z' = 2z
    std::vector<double> y2;    // each 0 or a power of two
};

// family_base: the power-of-two cap base (m-hat for the DkC family, the
// least power of two above h for the GP family).
NormalizedDual normalize_dual(double z, const std::vector<double>& y, double family_base);

// Least power of two strictly above x (x >= 0).
double pow2_above(double x);

// Randomized separation oracle for (LP-D): random bipartition, power-of-two
// buckets, one BDkS call per bucket pair and (k1,k2) split. Returns the
// violated vertex-set column after isolated-vertex cleanup, or nullopt.
std::optional<Column> separation_oracle_dkc(const DualPoint& p, const Graph& g, int k,
                                            const BdksSolver& bdks, Rng& rng);

// (LPW-D) variant: success test uses min{h, m}, and the returned subgraph is
// trimmed to exactly h edges when the induced subgraph exceeds h.
std::optional<Column> separation_oracle_gp(const DualPoint& p, const Graph& g, long h,
                                           const BdksSolver& bdks, Rng& rng);

// Integral solutions.
struct DkcSolution {
    std::vector<VertexSet> blocks;  // exact partition of V, |block| = k
    long value = 0;
};

struct GpSolution {
    std::vector<Subgraph> pieces;  // exactly r pieces (possibly empty), disjoint
    long value = 0;
};

void validate_dkc_solution(const Graph& g, int k, const DkcSolution& sol);
void validate_gp_solution(const Graph& g, long r, long h, const GpSolution& sol);

struct RoundOptions {
    bool enable_heavy_shortcut = true;
    long max_attempts = 0;  // 0 = N^2
};

// LP-rounding of Claim LP-rounding: heavy-set shortcut, else independent
// column sampling with bad-event detection and retry, top-(N/k) selection,
// random per-vertex ownership, arbitrary completion to exact block sizes.
DkcSolution round_dkc(const Graph& g, int k, const std::vector<Column>& columns,
                      const std::vector<double>& x, Rng& rng, const RoundOptions& opt = {},
                      std::vector<std::string>* events = nullptr);

// Subgraph-column analogue; ownership induces pieces H_i[V_i].
GpSolution round_gp(const Graph& g, long r, long h, const std::vector<Column>& columns,
                    const std::vector<double>& x, Rng& rng, const RoundOptions& opt = {},
                    std::vector<std::string>* events = nullptr);

// End-to-end pipelines: budget scan with the matching oracle, restricted
// primal, rounding. The graph is padded with isolated vertices until k
// divides N (DkC). The report records profile, V, |R'| and rounding events.
struct DkcPipelineResult {
    DkcSolution solution;
    nlohmann::json report;
};
struct GpPipelineResult {
    GpSolution solution;
    nlohmann::json report;
};

DkcPipelineResult approx_dkc(const Graph& g, int k, const BdksSolver& bdks,
                             const Profile& profile, Rng& rng,
                             const EllipsoidConfig& ecfg = {});
GpPipelineResult approx_gp(const Graph& g, long r, long h, const BdksSolver& bdks,
                           const Profile& profile, Rng& rng, const EllipsoidConfig& ecfg = {});

}  // namespace densekit

#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "densekit/graph.hpp"
#include "densekit/oracles.hpp"
#include "densekit/profile.hpp"
#include "densekit/rng.hpp"

namespace densekit {

// One constraint C(x, y) with its satisfying value pairs (0-based values).
struct CspConstraint {
    int x = 0, y = 0;
    std::vector<std::pair<int, int>> pairs;  // sorted, distinct
};

// Bipartite 2-CSP instance. Constraints are kept sorted by (x, y), so the
// constraint graph's edge order matches the constraint order.
struct Csp2Instance {
    int num_x = 0, num_y = 0, alphabet = 0;
    std::vector<CspConstraint> constraints;

    static Csp2Instance make(int num_x, int num_y, int alphabet,
                             std::vector<CspConstraint> constraints);
    long size() const {
        return static_cast<long>(constraints.size()) * alphabet * alphabet + num_x + num_y;
    }
    // d: the largest degree of any value in any constraint's pair graph.
    int pair_degree() const;
};

// File format: header "|X| |Y| A |C|"; per constraint "x y p" then p lines
// "a a'" with 1-based values.
Csp2Instance parse_csp(const std::string& text);
std::string serialize_csp(const Csp2Instance& inst);

// Assignment: values (0-based) for x-variables then y-variables.
using Assignment = std::vector<int>;
long count_satisfied(const Csp2Instance& inst, const std::vector<int>& constraint_ids,
                     const Assignment& a);

struct CspConfig {
    double d = 0.0;       // per-assignment degree bound; 0 = derive from instance
    double gamma = 4.0;   // bad-set denominator
    double beta = 2.0;    // goodness base (desk floor; paper: 2^(8 (log n)^(1/2+eps)))
    double eta = 0.0;     // 0 = 256 * d * gamma * alpha * log^e4 n
    long rounds = 0;      // 0 = ceil(beta * log n)
    long samples = 0;     // 0 = max(200, 20 * beta^3)
    long size_bound = 0;  // n; 0 = size(I)
    long verify_ceiling = 4'000'000;
    Profile profile;
    double epsilon = 0.5;  // conjecture parameter; documentation only
    // s(n) of the conjecture; never consumed by any operation.
    double s_of_n(long n) const {
        return std::pow(2.0, -64.0 * std::pow(Profile::clog2(n), 0.5 + epsilon));
    }

    static CspConfig desk() { return {}; }
    static CspConfig paper() {
        CspConfig cfg;
        cfg.profile = Profile::paper();
        cfg.beta = 0;  // derived from n at use: 2^(8 (log n)^(1/2+eps))
        return cfg;
    }
    double beta_at(long n) const {
        if (beta > 0) return beta;
        return std::pow(2.0, 8.0 * std::pow(Profile::clog2(n), 0.5 + epsilon));
    }
};

// Constraint graph H(I): one edge per constraint, aligned with the
// constraint order. Throws on duplicate (x, y) pairs at construction.
BipartiteGraph constraint_graph(const Csp2Instance& inst);

// Nice subgraph of the constraint subgraph spanned by `constraint_ids`:
// degree-dyadic selection on X, bad-Y removal at deg < deg/(4 log n),
// degree-dyadic selection on Y.
struct NiceSubgraph {
    long d1 = 1, d2 = 1;
    std::vector<int> constraint_ids;
};
NiceSubgraph nice_subgraph(const Csp2Instance& inst, const std::vector<int>& constraint_ids,
                           long n_bound);

// Assignment graph over the retained constraints: one cloud of `alphabet`
// vertices per touched variable, one edge per satisfying pair.
struct AssignmentGraph {
    BipartiteGraph graph;
    std::vector<int> x_vars, y_vars;  // cloud owners, in side order
    // Vertex (xi * A + a) on side A is (x_vars[xi], value a); same on side B.
    std::vector<int> edge_constraint;  // per graph edge: constraint id
};
AssignmentGraph assignment_graph(const Csp2Instance& inst,
                                 const std::vector<int>& constraint_ids);

// Dyadic regularization of a BDkS solution on the assignment graph.
struct RegularizationReport {
    long d1 = 1, d2 = 1;          // nice-subgraph degrees
    int q = 0, q_prime = 0, r = 0;
    std::vector<int> x_star, y_star;        // variable ids
    std::vector<int> c_star;                // constraint ids
    std::map<int, std::vector<int>> clouds_x, clouds_y;  // surviving values
    double c_star_floor_ratio = 0.0;  // |C*| vs the claim's lower bound
};
RegularizationReport regularize_solution(const Csp2Instance& inst, const AssignmentGraph& ag,
                                         const BipartiteSet& solution, long n_bound,
                                         double alpha);

// Uniform draw from the surviving clouds; unstarred variables get value 0
// (the file format's value 1).
struct SampledAssignment {
    Assignment assignment;
    long satisfied = 0;  // over the constraint set handed in
};
SampledAssignment sample_assignment(const Csp2Instance& inst,
                                    const RegularizationReport& reg,
                                    const std::vector<int>& count_over, Rng& rng);

// The three outcomes of the inner theorem.
struct BadSetOutcome {
    std::vector<int> constraint_ids;
};
struct GoodOutcome {
    Assignment witness;
    long satisfied = 0;  // over the subgraph it certifies
};
struct SubgraphOutcome {
    std::vector<int> constraint_ids;  // E* = C*
    std::vector<int> x_star, y_star;
    double volume_ratio = 0.0;  // measured against the 128 d gamma alpha log^4 n bound
};
using DecompositionOutcome = std::variant<BadSetOutcome, GoodOutcome, SubgraphOutcome>;

DecompositionOutcome partition_or_subgraph(const Csp2Instance& inst,
                                           const std::vector<int>& constraint_ids,
                                           const BdksSolver& bdks, const CspConfig& cfg,
                                           Rng& rng);

// Bad-edge stripping loop (Corollary general-partition-of-solution).
struct StripResult {
    std::vector<int> bad_ids;   // E1
    std::vector<int> rest_ids;  // E2
    std::optional<GoodOutcome> good;          // set when E2 was certified good
    std::optional<SubgraphOutcome> subgraph;  // set when the loop stopped on a subgraph
};
StripResult strip_bad_edges(const Csp2Instance& inst, const std::vector<int>& constraint_ids,
                            const BdksSolver& bdks, const CspConfig& cfg, Rng& rng);

// Budget/level charging decomposition (one phase of the outer theorem).
struct OuterResult {
    std::vector<int> good_ids, bad_ids, deleted_ids;
    std::vector<GoodOutcome> witnesses;
    int max_level = 0;
};
OuterResult outer_decompose(const Csp2Instance& inst, const std::vector<int>& constraint_ids,
                            const BdksSolver& bdks, const CspConfig& cfg, Rng& rng);

// Full partition (E^b, E_1..E_r) of Theorem DkS-reduction-main.
struct MainDecomposition {
    std::vector<int> bad_ids;                 // E^b
    std::vector<std::vector<int>> round_ids;  // E_1..E_r (possibly empty tails)
    std::vector<GoodOutcome> witnesses;       // per round, aligned
};
MainDecomposition main_decompose(const Csp2Instance& inst, const BdksSolver& bdks,
                                 const CspConfig& cfg, Rng& rng);

enum class CspVerdict { YES, NO };
CspVerdict decide_yes_no(const Csp2Instance& inst, const BdksSolver& bdks, const CspConfig& cfg,
                         Rng& rng, nlohmann::json* report = nullptr);

// Exhaustive check that at most |C'|/gamma constraints of C' are
// simultaneously satisfiable. Throws CeilingError past the ceiling.
bool verify_bad_set(const Csp2Instance& inst, const std::vector<int>& constraint_ids,
                    double gamma, long ceiling = 4'000'000);

// Counts the witness's satisfied constraints against |E'|/beta^3.
bool verify_good_witness(const Csp2Instance& inst, const std::vector<int>& constraint_ids,
                         const Assignment& witness, double beta);

// Exhaustive optimum over all assignments (tiny instances only).
long max_satisfiable(const Csp2Instance& inst, const std::vector<int>& constraint_ids,
                     long ceiling = 4'000'000);

}  // namespace densekit

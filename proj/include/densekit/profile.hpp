#pragma once

#include <algorithm>
#include <cmath>
#include <string>

namespace densekit {

// Threshold/constant presets shared by the reduction pipelines. The paper
// preset keeps the polylog exponents of the theorem statements (report math);
// the desk preset zeroes them so preconditions are attainable at small N.
struct Profile {
    std::string name = "desk";
    double beta_c = 4.0;  // c in beta(N) = c * alpha(N^2) * log^2 N
    int e2 = 0;           // balanced-cut stop test exponent
    int e3 = 0;           // mbcs_via_gp thinning exponent
    int e4 = 0;           // csp eta exponent
    int e6 = 0;           // density/eligibility exponent
    int e7 = 0;           // gp_via_mbcs case threshold exponent
    int e8 = 0;           // h'' pruning exponent

    static Profile desk() { return {}; }
    static Profile paper() { return {"paper", 4.0, 2, 3, 4, 6, 7, 8}; }

    // log2 clamped to >= 1 so tiny instances never divide by zero.
    static double clog2(long n) {
        return std::max(1.0, std::log2(std::max<long>(n, 2)));
    }

    double polylog(long n, int exponent) const {
        return std::pow(clog2(n), exponent);
    }

    // beta(N) = c * alpha(N^2) * log^2 N, the separation oracle's factor.
    double beta(long n, double alpha_n2) const {
        return beta_c * alpha_n2 * clog2(n) * clog2(n);
    }
};

inline Profile profile_by_name(const std::string& name) {
    if (name == "desk") return Profile::desk();
    if (name == "paper") return Profile::paper();
    throw std::invalid_argument("unknown profile: " + name);
}

}  // namespace densekit

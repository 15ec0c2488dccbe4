#ifndef TOPSTMIN_TEST_UTIL_HPP
#define TOPSTMIN_TEST_UTIL_HPP

#include <cstdint>
#include <vector>

#include "topstmin/formulations.hpp"
#include "topstmin/generator.hpp"
#include "topstmin/instance.hpp"
#include "topstmin/support_graph.hpp"

namespace topstmin {
namespace testutil {

struct RandomInstanceOpts {
    int customers = 6;
    int m = 2;
    double budget_factor = 0.8;   // of a loose route-length scale
    double service_level = 0.15;  // average service as a share of the budget
    double physical_pair_prob = 0.0;
    double logical_pair_prob = 0.0;
    int mandatory_count = 0;
    Variant variant = Variant::P;
};

/// Seeded Euclidean instance on a 100x100 board; mandatory nodes are chosen
/// among customers whose direct closure fits the budget.
Instance random_instance(uint64_t seed, const RandomInstanceOpts &opts);

/// Support-graph fixture with three customers a,b,c (ids 2,3,4) carrying the
/// given node weights and arcs; entries are (i,j,value) with node ids.
struct FixturePoint {
    Instance instance;
    BuiltModel built;
    std::vector<double> point;
};

FixturePoint three_customer_point(const std::vector<double> &node_weights,
                                  const std::vector<std::tuple<int, int, double>> &arcs);

/// Random fractional point satisfying the degree-balance rows: a seeded
/// superposition of source-to-destination paths and customer cycles.
FixturePoint random_flow_point(uint64_t seed, int customers, int paths, int cycles);

/// All feasible solutions of a small instance by direct enumeration
/// (exponential; keep the instance tiny).
std::vector<Solution> enumerate_feasible_solutions(const Instance &inst, int max_count = 100000);

}  // namespace testutil
}  // namespace topstmin

#endif

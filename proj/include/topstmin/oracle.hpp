#ifndef TOPSTMIN_ORACLE_HPP
#define TOPSTMIN_ORACLE_HPP

#include <optional>
#include <vector>

#include "topstmin/cuts.hpp"
#include "topstmin/instance.hpp"
#include "topstmin/support_graph.hpp"

namespace topstmin {
namespace oracle {

struct OracleResult {
    std::optional<double> profit;  // empty: no feasible solution exists
    std::optional<Solution> best;
    long enumerated = 0;

    bool infeasible() const { return !profit.has_value(); }
};

/// Exhaustive optimum by subset dynamic programming: minimum route duration
/// per customer subset, then partition into at most m feasible routes.
/// Guarded to 10 customers and fleet size 3.
OracleResult brute_force_solve(const Instance &inst);

/// Independent cross-check: direct recursive enumeration of route sets in a
/// different construction order. Returns the optimal profit, or empty when
/// infeasible. Intended for small corpora only.
std::optional<double> brute_force_solve_alt(const Instance &inst);

/// Minimum duration of a route visiting exactly the given customers, over all
/// permutations respecting the allowed arcs; +inf when none exists.
/// Guarded to 8 customers.
double brute_force_tsp_path(const Instance &inst, const std::vector<int> &customers);

struct SecWitness {
    std::vector<int> set;  // customer subset U
    int anchor = 0;        // the y-node subtracted on the right-hand side
    double violation = 0.0;
};

/// Classical subtour-cut separation: one max-flow per customer, on the graph
/// of positive arc values with the destination folded into the source side.
/// Returns every violated witness found.
std::vector<SecWitness> secs_maxflow_separation(const SupportGraph &sg,
                                                double viol_tol = kViolTol);

/// Instance encoding of an undirected graph such that a feasible solution
/// exists iff the graph has a Hamiltonian path: zero times, zero budget,
/// every node mandatory, a physical ban on every non-edge, one vehicle.
Instance hpp_reduce(int num_vertices, const std::vector<std::pair<int, int>> &edges);

/// Direct permutation/DP test for a Hamiltonian path in an undirected graph.
bool hamiltonian_path_exists(int num_vertices, const std::vector<std::pair<int, int>> &edges);

}  // namespace oracle
}  // namespace topstmin

#endif

#ifndef TOPSTMIN_TOUR_BOUND_HPP
#define TOPSTMIN_TOUR_BOUND_HPP

#include <vector>

#include "topstmin/instance.hpp"

namespace topstmin {

/// Symmetric TSP relaxation of the minimum-duration route over a node set.
///
/// The source and destination are merged into a single depot (index 0) whose
/// edge to customer i costs min(t(1,i), t(i,n)) + s_i/2; customer-customer
/// edges cost min(t(i,j), t(j,i)) + (s_i + s_j)/2. A tour through the merged
/// depot then never costs more than the corresponding route duration, so any
/// tour lower bound is a route-duration lower bound. Arcs banned in both
/// directions get infinite cost.
struct TourSubproblem {
    int count = 0;                // nodes including the depot at index 0
    std::vector<double> cost;     // dense symmetric, count x count
    std::vector<int> labels;      // original node ids, labels[0] == 0 (depot)

    double at(int i, int j) const { return cost[i * count + j]; }
};

/// Sub-problem over the given customers of `inst` (ascending order kept).
TourSubproblem build_tour_subproblem(const Instance &inst, const std::vector<int> &customers);

struct OneTreeResult {
    double value = 0.0;           // penalized tree value minus 2*sum(penalties)
    std::vector<int> degree;      // per sub-problem node
    bool connected = false;
};

/// Minimum spanning tree over the non-depot nodes plus the two cheapest depot
/// edges, on costs c_ij + pi_i + pi_j. With fewer than three nodes the
/// trivial loop through the depot is returned.
OneTreeResult one_tree(const TourSubproblem &sub, const std::vector<double> &penalties);

struct HelsgaunBound {
    double value = 0.0;           // +inf when the sub-problem is disconnected
    bool tour = false;            // final tree had all degrees equal to 2
    int iterations = 0;
};

/// Iterated subgradient ascent over one-tree penalties; the best value seen
/// is returned and is never larger than the optimal tour cost.
HelsgaunBound helsgaun_lower_bound(const TourSubproblem &sub, int iteration_budget = 50);

}  // namespace topstmin

#endif

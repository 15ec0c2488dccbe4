#ifndef TOPSTMIN_CUTS_HPP
#define TOPSTMIN_CUTS_HPP

#include <optional>
#include <string>
#include <vector>

#include "topstmin/instance.hpp"
#include "topstmin/linear_model.hpp"
#include "topstmin/support_graph.hpp"

namespace topstmin {

inline constexpr double kViolTol = 1e-6;

enum class CutFamily { RI, SI, SPiLeft, SPiRight, SEC, LI };

const char *cut_family_name(CutFamily f);

/// One linear inequality (terms <= rhs) over the single-index model, tagged
/// with the structure that produced it.
struct Cut {
    CutFamily family;
    Terms terms;
    double rhs = 0.0;
    std::vector<int> witness;  // route / subpath / cycle node ids
    double violation = 0.0;    // at the producing point

    double lhs_at(const std::vector<double> &point) const;
    /// Canonical key for pool de-duplication.
    std::string key() const;
};

/// Infeasible-route cut: the arcs of the route cannot all be used unless one
/// of its interior customers is skipped. Requires duration > t_max.
std::optional<Cut> separate_route_inequality(const Instance &inst, const Route &route,
                                             const VariableMap &vmap,
                                             const std::vector<double> &point,
                                             double viol_tol = kViolTol);

/// Node-set strengthening of the route cut, valid once `tour_bound` certifies
/// that no single feasible route can cover all customers of the route.
/// Returns nothing when tour_bound <= t_max (the caller falls back to the
/// route cut). Fewer than two customers is a contract breach.
std::optional<Cut> separate_set_inequality(const Instance &inst, const Route &route,
                                           const VariableMap &vmap,
                                           const std::vector<double> &point, double tour_bound,
                                           double viol_tol = kViolTol);

/// Feasible-subpath connectivity cuts for an infeasible route: each feasible
/// customer subpath must be preceded (followed) by a node that keeps its
/// closure feasible. Left and right cuts are returned when violated.
std::vector<Cut> separate_subpath_inequalities(const Instance &inst, const Route &route,
                                               const VariableMap &vmap,
                                               const std::vector<double> &point,
                                               double viol_tol = kViolTol);

/// Customer subpaths whose endpoints are logically incompatible cannot stay
/// on one route; same structure as the set inequality. Empty in variant P.
std::vector<Cut> separate_logical_inequalities(const Instance &inst, const Route &route,
                                               const VariableMap &vmap,
                                               const std::vector<double> &point,
                                               double viol_tol = kViolTol);

/// Cycle-based subtour cuts: x(U,U) <= y(U) - y_k with k the maximum-weight
/// node of U. Candidate sets are the elementary cycles plus cycle unions
/// inside each strongly connected customer component: a maximally violated
/// set can always be chosen strongly connected in the subgraph it induces, so
/// scanning those unions makes the separation exact whenever every component
/// fits under `exact_scan_limit` (larger components fall back to a greedy
/// node-peeling refinement and the separation turns best-effort).
std::vector<Cut> separate_secs(const std::vector<std::vector<int>> &cycles,
                               const SupportGraph &sg, const VariableMap &vmap,
                               double viol_tol = kViolTol, int exact_scan_limit = 12);

}  // namespace topstmin

#endif

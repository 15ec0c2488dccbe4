#ifndef TOPSTMIN_SUPPORT_GRAPH_HPP
#define TOPSTMIN_SUPPORT_GRAPH_HPP

#include <vector>

#include "topstmin/instance.hpp"
#include "topstmin/linear_model.hpp"

namespace topstmin {

/// Default threshold below which a relaxation arc value is treated as zero.
inline constexpr double kSupportTol = 1e-6;

/// Graph induced by the strictly positive arc values of a fractional point,
/// with per-node visit weights.
struct SupportGraph {
    int n = 0;
    std::vector<double> node_weight;                       // 1-based, customers carry y-bar
    std::vector<std::vector<std::pair<int, double>>> out;  // ascending neighbours
    std::vector<std::vector<std::pair<int, double>>> in;

    double arc(int i, int j) const;
    bool has_arc(int i, int j) const;
    int num_arcs() const;
};

/// Builds the graph from a point over the single-index model; arcs with value
/// <= tol are excluded (strict inequality).
SupportGraph build_support_graph(const Instance &inst, const VariableMap &vmap,
                                 const std::vector<double> &point, double tol = kSupportTol);

struct EnumCaps {
    int max_routes = 5000;
    int max_cycles = 20000;
    int max_route_len = 0;  // 0: defaults to n
};

struct RouteSet {
    std::vector<Route> routes;
    bool truncated = false;
};

/// All elementary source-to-destination paths of the support graph, in
/// depth-first order with ascending neighbour expansion. Truncation beyond
/// the caps sets the flag; separation then runs best-effort.
RouteSet enumerate_routes(const Instance &inst, const SupportGraph &sg, const EnumCaps &caps);

struct CycleSet {
    std::vector<std::vector<int>> cycles;  // each starts at its minimum node
    bool truncated = false;
};

/// All elementary directed cycles among the customers of the support graph
/// (the source has no incoming and the destination no outgoing arcs, so no
/// cycle can touch them).
CycleSet enumerate_elementary_cycles(const SupportGraph &sg, const EnumCaps &caps);

}  // namespace topstmin

#endif

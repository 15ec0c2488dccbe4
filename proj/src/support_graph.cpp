#include "topstmin/support_graph.hpp"

#include <algorithm>

namespace topstmin {

double SupportGraph::arc(int i, int j) const {
    for (auto [k, w] : out[i])
        if (k == j) return w;
    return 0.0;
}

bool SupportGraph::has_arc(int i, int j) const {
    for (auto [k, w] : out[i]) {
        (void)w;
        if (k == j) return true;
    }
    return false;
}

int SupportGraph::num_arcs() const {
    int total = 0;
    for (const auto &adj : out) total += static_cast<int>(adj.size());
    return total;
}

SupportGraph build_support_graph(const Instance &inst, const VariableMap &vmap,
                                 const std::vector<double> &point, double tol) {
    SupportGraph sg;
    sg.n = inst.n();
    sg.node_weight.assign(sg.n + 1, 0.0);
    sg.out.assign(sg.n + 1, {});
    sg.in.assign(sg.n + 1, {});
    for (int k = 2; k <= sg.n - 1; ++k) sg.node_weight[k] = point[vmap.node_y(k)];
    for (int i = 1; i <= sg.n - 1; ++i)
        for (int j = 2; j <= sg.n; ++j) {
            if (!inst.traversable(i, j)) continue;
            auto id = vmap.try_arc_x(i, j);
            if (!id) continue;
            const double v = point[*id];
            if (v > tol) {
                sg.out[i].push_back({j, v});
                sg.in[j].push_back({i, v});
            }
        }
    return sg;
}

namespace {

struct RouteSearch {
    const Instance &inst;
    const SupportGraph &sg;
    int max_len;
    int max_routes;
    RouteSet &rs;
    std::vector<int> path;
    std::vector<char> seen;

    bool dfs(int cur) {  // false once the route cap fires
        if (cur == sg.n) {
            if (static_cast<int>(rs.routes.size()) >= max_routes) {
                rs.truncated = true;
                return false;
            }
            rs.routes.push_back(Route::of(inst, path));
            return true;
        }
        if (static_cast<int>(path.size()) >= max_len) return true;
        for (auto [next, w] : sg.out[cur]) {
            (void)w;
            if (next != sg.n && seen[next]) continue;
            path.push_back(next);
            if (next != sg.n) seen[next] = 1;
            const bool keep_going = dfs(next);
            if (next != sg.n) seen[next] = 0;
            path.pop_back();
            if (!keep_going) return false;
        }
        return true;
    }
};

/// Elementary-cycle search over the customer subgraph: for each anchor s in
/// ascending order, enumerate the cycles whose minimum node is s.
struct CycleSearch {
    const SupportGraph &sg;
    int max_cycles;
    CycleSet &cs;
    int anchor = 0;
    std::vector<int> path;
    std::vector<char> on_path;

    bool dfs(int cur) {
        for (auto [next, w] : sg.out[cur]) {
            (void)w;
            if (next < anchor || next > sg.n - 1) continue;
            if (next == anchor) {
                if (static_cast<int>(cs.cycles.size()) >= max_cycles) {
                    cs.truncated = true;
                    return false;
                }
                cs.cycles.push_back(path);
            } else if (!on_path[next]) {
                on_path[next] = 1;
                path.push_back(next);
                const bool keep_going = dfs(next);
                path.pop_back();
                on_path[next] = 0;
                if (!keep_going) return false;
            }
        }
        return true;
    }
};

}  // namespace

RouteSet enumerate_routes(const Instance &inst, const SupportGraph &sg, const EnumCaps &caps) {
    RouteSet rs;
    const int max_len = caps.max_route_len > 0 ? caps.max_route_len : sg.n;
    RouteSearch search{inst, sg, max_len, caps.max_routes, rs, {1}, std::vector<char>(sg.n + 1, 0)};
    search.seen[1] = 1;
    search.dfs(1);
    return rs;
}

CycleSet enumerate_elementary_cycles(const SupportGraph &sg, const EnumCaps &caps) {
    CycleSet cs;
    CycleSearch search{sg, caps.max_cycles, cs, 0, {}, std::vector<char>(sg.n + 1, 0)};
    for (int s = 2; s <= sg.n - 1; ++s) {
        if (sg.out[s].empty() || sg.in[s].empty()) continue;
        search.anchor = s;
        search.path.assign(1, s);
        search.on_path.assign(sg.n + 1, 0);
        search.on_path[s] = 1;
        if (!search.dfs(s)) break;
    }
    return cs;
}

}  // namespace topstmin

#include "topstmin/cuts.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace topstmin {

const char *cut_family_name(CutFamily f) {
    switch (f) {
        case CutFamily::RI: return "RI";
        case CutFamily::SI: return "SI";
        case CutFamily::SPiLeft: return "SPI-left";
        case CutFamily::SPiRight: return "SPI-right";
        case CutFamily::SEC: return "SEC";
        case CutFamily::LI: return "LI";
    }
    return "?";
}

double Cut::lhs_at(const std::vector<double> &point) const {
    double v = 0.0;
    for (auto [var, c] : terms) v += c * point[var];
    return v;
}

std::string Cut::key() const {
    std::ostringstream os;
    os << cut_family_name(family);
    for (int v : witness) os << ":" << v;
    return os.str();
}

namespace {

/// sum of x over all model arcs with both endpoints inside `nodes`
void add_intra_set_terms(const Instance &inst, const VariableMap &vmap,
                         const std::vector<int> &nodes, Terms &terms) {
    for (int a : nodes)
        for (int b : nodes) {
            if (a == b || !inst.traversable(a, b)) continue;
            if (auto id = vmap.try_arc_x(a, b)) terms.push_back({*id, 1.0});
        }
}

}  // namespace

std::optional<Cut> separate_route_inequality(const Instance &inst, const Route &route,
                                             const VariableMap &vmap,
                                             const std::vector<double> &point, double viol_tol) {
    if (inst.within_budget(route.duration))
        throw std::logic_error("route inequality separation requires an infeasible route");
    Cut cut{CutFamily::RI, {}, 0.0, route.nodes, 0.0};
    double lhs = 0.0;
    for (size_t i = 0; i + 1 < route.nodes.size(); ++i) {
        const int id = vmap.arc_x(route.nodes[i], route.nodes[i + 1]);
        cut.terms.push_back({id, 1.0});
        lhs += point[id];
    }
    for (size_t k = 1; k + 1 < route.nodes.size(); ++k) {
        const int id = vmap.node_y(route.nodes[k]);
        cut.terms.push_back({id, -1.0});
        lhs -= point[id];
    }
    cut.violation = lhs;  // rhs is 0
    if (cut.violation <= viol_tol) return std::nullopt;
    return cut;
}

std::optional<Cut> separate_set_inequality(const Instance &inst, const Route &route,
                                           const VariableMap &vmap,
                                           const std::vector<double> &point, double tour_bound,
                                           double viol_tol) {
    std::vector<int> customers(route.nodes.begin() + 1, route.nodes.end() - 1);
    if (customers.size() < 2)
        throw std::invalid_argument("set inequality needs at least two customers");
    if (tour_bound <= inst.t_max()) return std::nullopt;  // gate: fall back to the route cut

    Cut cut{CutFamily::SI, {}, double(customers.size()) - 2.0, customers, 0.0};
    add_intra_set_terms(inst, vmap, customers, cut.terms);
    cut.violation = cut.lhs_at(point) - cut.rhs;
    if (cut.violation <= viol_tol) return std::nullopt;
    return cut;
}

namespace {

/// Nodes that can prepend (append) the subpath while its closure through the
/// depot stays feasible on every constraint class.
struct FlankSets {
    std::vector<int> left;   // may contain the source
    std::vector<int> right;  // may contain the destination
};

FlankSets build_flank_sets(const Instance &inst, const std::vector<int> &path,
                           double inner_time) {
    FlankSets fs;
    const int first = path.front(), last = path.back();
    const bool pl = inst.variant() == Variant::PL;
    auto conflicts_with_path = [&](int v) {
        if (!pl) return false;
        for (int u : path)
            if (inst.logically_incompatible(v, u)) return true;
        return false;
    };

    if (inst.allowed(1, first)) fs.left.push_back(1);
    for (int v = 2; v <= inst.n() - 1; ++v) {
        if (std::find(path.begin(), path.end(), v) != path.end()) continue;
        if (!inst.allowed(v, first)) continue;
        if (conflicts_with_path(v)) continue;
        const double d = inst.travel(1, v) + inst.service(v) + inst.travel(v, first) +
                         inner_time + inst.travel(last, inst.n());
        if (inst.within_budget(d)) fs.left.push_back(v);
    }
    for (int v = 2; v <= inst.n() - 1; ++v) {
        if (std::find(path.begin(), path.end(), v) != path.end()) continue;
        if (!inst.allowed(last, v)) continue;
        if (conflicts_with_path(v)) continue;
        const double d = inst.travel(1, first) + inner_time + inst.travel(last, v) +
                         inst.service(v) + inst.travel(v, inst.n());
        if (inst.within_budget(d)) fs.right.push_back(v);
    }
    if (inst.allowed(last, inst.n())) fs.right.push_back(inst.n());
    return fs;
}

/// service and travel inside the subpath, including endpoint services
double inner_path_time(const Instance &inst, const std::vector<int> &path) {
    double t = 0.0;
    for (size_t i = 0; i + 1 < path.size(); ++i) t += inst.travel(path[i], path[i + 1]);
    for (int v : path) t += inst.service(v);
    return t;
}

}  // namespace

std::vector<Cut> separate_subpath_inequalities(const Instance &inst, const Route &route,
                                               const VariableMap &vmap,
                                               const std::vector<double> &point,
                                               double viol_tol) {
    std::vector<Cut> cuts;
    const auto &nodes = route.nodes;
    const int len = static_cast<int>(nodes.size());
    for (int start = 1; start + 1 < len; ++start) {
        for (int stop = start + 1; stop + 1 < len; ++stop) {
            std::vector<int> path(nodes.begin() + start, nodes.begin() + stop + 1);
            const double inner = inner_path_time(inst, path);
            const double closure = inst.travel(1, path.front()) + inner +
                                   inst.travel(path.back(), inst.n());
            if (!inst.within_budget(closure)) continue;
            const FlankSets fs = build_flank_sets(inst, path, inner);

            Terms base;
            double base_lhs = 0.0;
            for (size_t i = 0; i + 1 < path.size(); ++i) {
                const int id = vmap.arc_x(path[i], path[i + 1]);
                base.push_back({id, 1.0});
                base_lhs += point[id];
            }
            for (size_t k = 1; k + 1 < path.size(); ++k) {
                const int id = vmap.node_y(path[k]);
                base.push_back({id, -1.0});
                base_lhs -= point[id];
            }

            {
                Cut cut{CutFamily::SPiLeft, base, 0.0, path, 0.0};
                double lhs = base_lhs;
                for (int v : fs.left)
                    if (auto id = vmap.try_arc_x(v, path.front())) {
                        cut.terms.push_back({*id, -1.0});
                        lhs -= point[*id];
                    }
                cut.violation = lhs;
                if (cut.violation > viol_tol) cuts.push_back(std::move(cut));
            }
            {
                Cut cut{CutFamily::SPiRight, std::move(base), 0.0, path, 0.0};
                double lhs = base_lhs;
                for (int v : fs.right)
                    if (auto id = vmap.try_arc_x(path.back(), v)) {
                        cut.terms.push_back({*id, -1.0});
                        lhs -= point[*id];
                    }
                cut.violation = lhs;
                if (cut.violation > viol_tol) cuts.push_back(std::move(cut));
            }
        }
    }
    return cuts;
}

std::vector<Cut> separate_logical_inequalities(const Instance &inst, const Route &route,
                                               const VariableMap &vmap,
                                               const std::vector<double> &point,
                                               double viol_tol) {
    std::vector<Cut> cuts;
    if (inst.variant() != Variant::PL) return cuts;
    const auto &nodes = route.nodes;
    const int len = static_cast<int>(nodes.size());
    for (int start = 1; start + 1 < len; ++start)
        for (int stop = start + 1; stop + 1 < len; ++stop) {
            if (!inst.logically_incompatible(nodes[start], nodes[stop])) continue;
            std::vector<int> path(nodes.begin() + start, nodes.begin() + stop + 1);
            Cut cut{CutFamily::LI, {}, double(path.size()) - 2.0, path, 0.0};
            add_intra_set_terms(inst, vmap, path, cut.terms);
            cut.violation = cut.lhs_at(point) - cut.rhs;
            if (cut.violation > viol_tol) cuts.push_back(std::move(cut));
        }
    return cuts;
}

namespace {

/// x(U,U) - (y(U) - y_anchor) with anchor = max-weight node, ties low id.
struct SecEval {
    double violation = 0.0;
    int anchor = 0;
};

SecEval eval_sec(const SupportGraph &sg, const std::vector<int> &set) {
    SecEval ev;
    ev.anchor = set.front();
    double lhs = 0.0, ysum = 0.0;
    for (int v : set) {
        ysum += sg.node_weight[v];
        if (sg.node_weight[v] > sg.node_weight[ev.anchor]) ev.anchor = v;
    }
    for (int a : set)
        for (auto [b, w] : sg.out[a])
            if (std::find(set.begin(), set.end(), b) != set.end()) lhs += w;
    ev.violation = lhs - (ysum - sg.node_weight[ev.anchor]);
    return ev;
}

void emit_sec(const SupportGraph &sg, const VariableMap &vmap, std::vector<int> set,
              double viol_tol, std::set<std::vector<int>> &seen, std::vector<Cut> &out) {
    std::sort(set.begin(), set.end());
    if (!seen.insert(set).second) return;
    const SecEval ev = eval_sec(sg, set);
    if (ev.violation <= viol_tol) return;
    Cut cut{CutFamily::SEC, {}, 0.0, set, ev.violation};
    for (int a : set)
        for (int b : set) {
            if (a == b) continue;
            if (auto id = vmap.try_arc_x(a, b)) cut.terms.push_back({*id, 1.0});
        }
    for (int v : set)
        if (v != ev.anchor) cut.terms.push_back({vmap.node_y(v), -1.0});
    out.push_back(std::move(cut));
}

/// Tarjan components of the customer subgraph, each sorted ascending.
std::vector<std::vector<int>> customer_components(const SupportGraph &sg) {
    const int n = sg.n;
    std::vector<int> index(n + 1, -1), low(n + 1, 0), stack;
    std::vector<char> on_stack(n + 1, 0);
    std::vector<std::vector<int>> comps;
    int counter = 0;

    auto strong = [&](auto &&self, int v) -> void {
        index[v] = low[v] = counter++;
        stack.push_back(v);
        on_stack[v] = 1;
        for (auto [w, val] : sg.out[v]) {
            (void)val;
            if (w < 2 || w > n - 1) continue;
            if (index[w] == -1) {
                self(self, w);
                low[v] = std::min(low[v], low[w]);
            } else if (on_stack[w]) {
                low[v] = std::min(low[v], index[w]);
            }
        }
        if (low[v] == index[v]) {
            std::vector<int> comp;
            while (true) {
                const int w = stack.back();
                stack.pop_back();
                on_stack[w] = 0;
                comp.push_back(w);
                if (w == v) break;
            }
            if (comp.size() >= 2) {
                std::sort(comp.begin(), comp.end());
                comps.push_back(std::move(comp));
            }
        }
    };
    for (int v = 2; v <= n - 1; ++v)
        if (index[v] == -1 && !sg.out[v].empty()) strong(strong, v);
    std::sort(comps.begin(), comps.end());
    return comps;
}

}  // namespace

std::vector<Cut> separate_secs(const std::vector<std::vector<int>> &cycles,
                               const SupportGraph &sg, const VariableMap &vmap,
                               double viol_tol, int exact_scan_limit) {
    std::vector<Cut> cuts;
    std::set<std::vector<int>> seen;
    for (const auto &cycle : cycles) emit_sec(sg, vmap, cycle, viol_tol, seen, cuts);

    for (const std::vector<int> &comp : customer_components(sg)) {
        const int sz = static_cast<int>(comp.size());
        if (sz <= exact_scan_limit) {
            for (int mask = 1; mask < (1 << sz); ++mask) {
                if (__builtin_popcount(static_cast<unsigned>(mask)) < 2) continue;
                std::vector<int> set;
                for (int b = 0; b < sz; ++b)
                    if (mask & (1 << b)) set.push_back(comp[b]);
                emit_sec(sg, vmap, std::move(set), viol_tol, seen, cuts);
            }
        } else {
            // greedy peel: drop the node whose removal helps violation most
            std::vector<int> set = comp;
            while (static_cast<int>(set.size()) >= 2) {
                emit_sec(sg, vmap, set, viol_tol, seen, cuts);
                double best = eval_sec(sg, set).violation;
                int drop = -1;
                for (size_t i = 0; i < set.size(); ++i) {
                    std::vector<int> trial = set;
                    trial.erase(trial.begin() + i);
                    if (trial.size() < 2) continue;
                    const double v = eval_sec(sg, trial).violation;
                    if (v > best + 1e-12) {
                        best = v;
                        drop = static_cast<int>(i);
                    }
                }
                if (drop == -1) break;
                set.erase(set.begin() + drop);
            }
        }
    }
    return cuts;
}

}  // namespace topstmin

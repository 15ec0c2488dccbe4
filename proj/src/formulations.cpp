#include "topstmin/formulations.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace topstmin {

namespace {

std::string arc_name(const char *base, int i, int j, int r = 0) {
    std::string s = base;
    s += "_" + std::to_string(i) + "_" + std::to_string(j);
    if (r > 0) s += "_" + std::to_string(r);
    return s;
}

std::string node_name(const char *base, int k, int r = 0) {
    std::string s = base;
    s += "_" + std::to_string(k);
    if (r > 0) s += "_" + std::to_string(r);
    return s;
}

/// Arcs of the model in deterministic (i, j) order.
std::vector<Arc> model_arcs(const Instance &inst) {
    std::vector<Arc> arcs;
    for (int i = 1; i <= inst.n() - 1; ++i)
        for (int j = 2; j <= inst.n(); ++j)
            if (inst.traversable(i, j)) arcs.push_back({i, j});
    return arcs;
}

}  // namespace

BuiltModel build_compact(const Instance &inst) {
    if (inst.n() < 2) throw std::invalid_argument("instance too small");
    if (inst.m() < 1) throw std::invalid_argument("fleet size must be positive");

    BuiltModel bm;
    LinearModel &lm = bm.model;
    VariableMap &vm = bm.vmap;
    const int n = inst.n();
    const int m = inst.m();
    const double big = n - 2;  // route-identifier span
    const std::vector<Arc> arcs = model_arcs(inst);

    for (auto [i, j] : arcs) {
        const bool depot_arc = (i == 1 && j == n);
        // physically incompatible arcs are zeroed through their bounds
        const double ub = inst.forbidden(i, j) ? 0.0 : (depot_arc ? double(m) : 1.0);
        const int id = lm.add_var(depot_arc ? VarKind::Integer : VarKind::Binary, 0.0, ub, 0.0,
                                  arc_name("x", i, j));
        vm.insert({VarRole::ArcX, i, j, 0}, id);
    }
    for (int k = 2; k <= n - 1; ++k) {
        const int id = lm.add_var(VarKind::Binary, 0.0, 1.0, inst.profit(k), node_name("y", k));
        vm.insert({VarRole::NodeY, k, 0, 0}, id);
    }
    for (auto [i, j] : arcs) {
        const int id = lm.add_var(VarKind::Continuous, 0.0,
                                  std::numeric_limits<double>::infinity(), 0.0,
                                  arc_name("z", i, j));
        vm.insert({VarRole::FlowZ, i, j, 0}, id);
    }

    {
        Terms out, in;
        for (auto [i, j] : arcs) {
            if (i == 1) out.push_back({vm.arc_x(i, j), 1.0});
            if (j == n) in.push_back({vm.arc_x(i, j), 1.0});
        }
        lm.add_row(std::move(out), Rel::EQ, m, RowTag::Structural, "start");
        lm.add_row(std::move(in), Rel::EQ, m, RowTag::Structural, "end");
    }
    for (int k = 2; k <= n - 1; ++k) {
        Terms in{{vm.node_y(k), -1.0}}, out{{vm.node_y(k), -1.0}};
        for (auto [i, j] : arcs) {
            if (j == k) in.push_back({vm.arc_x(i, j), 1.0});
            if (i == k) out.push_back({vm.arc_x(i, j), 1.0});
        }
        lm.add_row(std::move(in), Rel::EQ, 0.0, RowTag::Structural, node_name("deg_in", k));
        lm.add_row(std::move(out), Rel::EQ, 0.0, RowTag::Structural, node_name("deg_out", k));
    }
    for (int k = 2; k <= n - 1; ++k) {
        Terms t;
        for (auto [i, j] : arcs) {
            if (i == k) {
                t.push_back({vm.flow_z(i, j), 1.0});
                t.push_back({vm.arc_x(i, j), -(inst.travel(k, j) + inst.service(k))});
            }
            if (j == k) t.push_back({vm.flow_z(i, j), -1.0});
        }
        lm.add_row(std::move(t), Rel::EQ, 0.0, RowTag::Structural, node_name("flow", k));
    }
    for (auto [i, j] : arcs) {
        const double cap = inst.t_max() - inst.service(j) - (j == n ? 0.0 : inst.travel(j, n));
        lm.add_row({{vm.flow_z(i, j), 1.0}, {vm.arc_x(i, j), -cap}}, Rel::LE, 0.0,
                   RowTag::Structural, arc_name("tub", i, j));
        const double floor_time =
            (i == 1 ? 0.0 : inst.travel(1, i)) + inst.service(i) + inst.travel(i, j);
        lm.add_row({{vm.flow_z(i, j), 1.0}, {vm.arc_x(i, j), -floor_time}}, Rel::GE, 0.0,
                   RowTag::Structural, arc_name("tlb", i, j));
    }
    for (int k = 2; k <= n - 1; ++k)
        lm.add_row({{vm.flow_z(1, k), 1.0}, {vm.arc_x(1, k), -inst.travel(1, k)}}, Rel::EQ, 0.0,
                   RowTag::Structural, node_name("depot", k));
    for (int k : inst.mandatory())
        lm.add_row({{vm.node_y(k), 1.0}}, Rel::EQ, 1.0, RowTag::Structural,
                   node_name("mand", k));

    if (inst.variant() == Variant::PL) {
        for (int k = 2; k <= n - 1; ++k) {
            const int id = lm.add_var(VarKind::Continuous, 0.0,
                                      std::numeric_limits<double>::infinity(), 0.0,
                                      node_name("v", k));
            vm.insert({VarRole::RouteV, k, 0, 0}, id);
        }
        for (auto [i, j] : inst.logical()) {
            const int id = lm.add_var(VarKind::Binary, 0.0, 1.0, 0.0, arc_name("u", i, j));
            vm.insert({VarRole::PairU, i, j, 0}, id);
        }
        for (int k = 2; k <= n - 1; ++k) {
            lm.add_row({{vm.route_v(k), 1.0}, {vm.arc_x(1, k), -double(k)}}, Rel::GE, 0.0,
                       RowTag::Structural, node_name("vfirst_lo", k));
            // v_k <= k x_1k - big (x_1k - 1)
            lm.add_row({{vm.route_v(k), 1.0}, {vm.arc_x(1, k), -(double(k) - big)}}, Rel::LE, big,
                       RowTag::Structural, node_name("vfirst_hi", k));
        }
        for (auto [i, j] : arcs) {
            if (!inst.is_customer(i) || !inst.is_customer(j)) continue;
            lm.add_row({{vm.route_v(j), 1.0}, {vm.route_v(i), -1.0}, {vm.arc_x(i, j), -big}},
                       Rel::GE, -big, RowTag::Structural, arc_name("vfwd_lo", i, j));
            lm.add_row({{vm.route_v(j), 1.0}, {vm.route_v(i), -1.0}, {vm.arc_x(i, j), big}},
                       Rel::LE, big, RowTag::Structural, arc_name("vfwd_hi", i, j));
        }
        for (auto [i, j] : inst.logical()) {
            // u = 1 -> v_i >= v_j + 1 ; u = 0 -> v_i <= v_j - 1
            lm.add_row({{vm.route_v(i), 1.0}, {vm.route_v(j), -1.0}, {vm.pair_u(i, j), -big}},
                       Rel::GE, 1.0 - big, RowTag::Structural, arc_name("conf_lo", i, j));
            lm.add_row({{vm.route_v(i), 1.0}, {vm.route_v(j), -1.0}, {vm.pair_u(i, j), -big}},
                       Rel::LE, -1.0, RowTag::Structural, arc_name("conf_hi", i, j));
        }
    }
    return bm;
}

BuiltModel build_mixed(const Instance &inst) {
    if (inst.n() < 2) throw std::invalid_argument("instance too small");
    if (inst.m() < 1) throw std::invalid_argument("fleet size must be positive");

    BuiltModel bm;
    LinearModel &lm = bm.model;
    VariableMap &vm = bm.vmap;
    const int n = inst.n();
    const int m = inst.m();
    const std::vector<Arc> arcs = model_arcs(inst);

    for (int r = 1; r <= m; ++r)
        for (auto [i, j] : arcs) {
            const bool depot_arc = (i == 1 && j == n);
            const double ub = inst.forbidden(i, j) ? 0.0 : (depot_arc ? double(m) : 1.0);
            const int id = lm.add_var(depot_arc ? VarKind::Integer : VarKind::Binary, 0.0, ub,
                                      0.0, arc_name("x", i, j, r));
            vm.insert({VarRole::ArcX, i, j, r}, id);
        }
    for (int r = 1; r <= m; ++r)
        for (int k = 2; k <= n - 1; ++k) {
            const int id =
                lm.add_var(VarKind::Binary, 0.0, 1.0, inst.profit(k), node_name("y", k, r));
            vm.insert({VarRole::NodeY, k, 0, r}, id);
        }
    for (int r = 1; r <= m; ++r)
        for (auto [i, j] : arcs) {
            const int id = lm.add_var(VarKind::Continuous, 0.0,
                                      std::numeric_limits<double>::infinity(), 0.0,
                                      arc_name("z", i, j, r));
            vm.insert({VarRole::FlowZ, i, j, r}, id);
        }

    {
        Terms out, in;
        for (int r = 1; r <= m; ++r)
            for (auto [i, j] : arcs) {
                if (i == 1) out.push_back({vm.arc_x(i, j, r), 1.0});
                if (j == n) in.push_back({vm.arc_x(i, j, r), 1.0});
            }
        lm.add_row(std::move(out), Rel::EQ, m, RowTag::Structural, "start");
        lm.add_row(std::move(in), Rel::EQ, m, RowTag::Structural, "end");
    }
    for (int r = 1; r <= m; ++r)
        for (int k = 2; k <= n - 1; ++k) {
            Terms in{{vm.node_y(k, r), -1.0}}, out{{vm.node_y(k, r), -1.0}};
            for (auto [i, j] : arcs) {
                if (j == k) in.push_back({vm.arc_x(i, j, r), 1.0});
                if (i == k) out.push_back({vm.arc_x(i, j, r), 1.0});
            }
            lm.add_row(std::move(in), Rel::EQ, 0.0, RowTag::Structural,
                       node_name("deg_in", k, r));
            lm.add_row(std::move(out), Rel::EQ, 0.0, RowTag::Structural,
                       node_name("deg_out", k, r));
        }
    for (int k = 2; k <= n - 1; ++k) {
        Terms t;
        for (int r = 1; r <= m; ++r) t.push_back({vm.node_y(k, r), 1.0});
        lm.add_row(std::move(t), inst.is_mandatory(k) ? Rel::EQ : Rel::LE, 1.0,
                   RowTag::Structural, node_name(inst.is_mandatory(k) ? "mand" : "once", k));
    }
    for (int r = 1; r <= m; ++r) {
        for (int k = 2; k <= n - 1; ++k) {
            Terms t;
            for (auto [i, j] : arcs) {
                if (i == k) {
                    t.push_back({vm.flow_z(i, j, r), 1.0});
                    t.push_back({vm.arc_x(i, j, r), -(inst.travel(k, j) + inst.service(k))});
                }
                if (j == k) t.push_back({vm.flow_z(i, j, r), -1.0});
            }
            lm.add_row(std::move(t), Rel::EQ, 0.0, RowTag::Structural, node_name("flow", k, r));
        }
        for (auto [i, j] : arcs) {
            const double cap =
                inst.t_max() - inst.service(j) - (j == n ? 0.0 : inst.travel(j, n));
            lm.add_row({{vm.flow_z(i, j, r), 1.0}, {vm.arc_x(i, j, r), -cap}}, Rel::LE, 0.0,
                       RowTag::Structural, arc_name("tub", i, j, r));
            const double floor_time =
                (i == 1 ? 0.0 : inst.travel(1, i)) + inst.service(i) + inst.travel(i, j);
            lm.add_row({{vm.flow_z(i, j, r), 1.0}, {vm.arc_x(i, j, r), -floor_time}}, Rel::GE,
                       0.0, RowTag::Structural, arc_name("tlb", i, j, r));
        }
        for (int k = 2; k <= n - 1; ++k)
            lm.add_row({{vm.flow_z(1, k, r), 1.0}, {vm.arc_x(1, k, r), -inst.travel(1, k)}},
                       Rel::EQ, 0.0, RowTag::Structural, node_name("depot", k, r));
    }

    if (inst.variant() == Variant::PL) {
        for (int r = 1; r <= m; ++r)
            for (int k = 2; k <= n - 1; ++k) {
                const auto &ck = inst.conflicts_of(k);
                if (ck.empty()) continue;
                // |C_k| (1 - y_kr) >= sum_{i in C_k} y_ir
                Terms t{{vm.node_y(k, r), -double(ck.size())}};
                for (int i : ck) t.push_back({vm.node_y(i, r), -1.0});
                lm.add_row(std::move(t), Rel::GE, -double(ck.size()), RowTag::Structural,
                           node_name("confl", k, r));
            }
    }
    return bm;
}

namespace {

int int_value(double v, double eps, const char *what) {
    const double r = std::round(v);
    if (std::abs(v - r) > eps)
        throw ExtractionError(std::string("non-integral ") + what + " value " +
                              std::to_string(v));
    return static_cast<int>(r);
}

}  // namespace

Solution extract_solution(const Instance &inst, const VariableMap &vmap,
                          const std::vector<double> &assignment, double int_eps) {
    const int n = inst.n();
    auto arc_val = [&](int i, int j, int r) -> int {
        auto id = vmap.try_arc_x(i, j, r);
        if (!id || *id >= static_cast<int>(assignment.size())) return 0;
        return int_value(assignment[*id], int_eps, "arc");
    };

    const bool mixed = vmap.try_arc_x(1, n, 1).has_value();
    const int r_lo = mixed ? 1 : 0;
    const int r_hi = mixed ? inst.m() : 0;

    std::vector<Route> routes;
    std::vector<char> used(n + 1, 0);
    for (int r = r_lo; r <= r_hi; ++r) {
        for (int cnt = arc_val(1, n, r); cnt > 0; --cnt)
            routes.push_back(Route::of(inst, {1, n}));
        for (int j = 2; j <= n - 1; ++j) {
            if (arc_val(1, j, r) == 0) continue;
            std::vector<int> seq{1, j};
            int cur = j;
            while (cur != n) {
                if (used[cur])
                    throw ExtractionError("arc values revisit node " + std::to_string(cur));
                used[cur] = 1;
                int next = -1;
                for (int k = 2; k <= n; ++k) {
                    if (k == cur || !inst.traversable(cur, k)) continue;
                    if (arc_val(cur, k, r) >= 1) {
                        if (next != -1)
                            throw ExtractionError("node " + std::to_string(cur) +
                                                  " has two outgoing unit arcs");
                        next = k;
                    }
                }
                if (next == -1)
                    throw ExtractionError("flow is disconnected at node " + std::to_string(cur));
                seq.push_back(next);
                cur = next;
            }
            routes.push_back(Route::of(inst, std::move(seq)));
        }
    }
    if (static_cast<int>(routes.size()) != inst.m())
        throw ExtractionError("assignment decodes into " + std::to_string(routes.size()) +
                              " routes, expected " + std::to_string(inst.m()));
    return Solution::of(inst, std::move(routes));
}

}  // namespace topstmin

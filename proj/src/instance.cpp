#include "topstmin/instance.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace topstmin {

namespace {

void require(bool cond, const std::string &msg) {
    if (!cond) throw std::invalid_argument(msg);
}

}  // namespace

Instance Instance::from_coords(int m, double t_max, std::vector<Coord> coords,
                               std::vector<double> profits, std::vector<double> services,
                               std::vector<int> mandatory, std::vector<Arc> physical,
                               std::vector<Arc> logical, Variant variant) {
    const int n = static_cast<int>(coords.size()) - 1;  // coords is 1-based
    require(n >= 2, "instance needs at least source and destination");
    std::vector<double> travel(static_cast<size_t>(n + 1) * (n + 1), 0.0);
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j) travel[i * (n + 1) + j] = euclid(coords[i], coords[j]);

    Instance inst = from_matrix(n, m, t_max, std::move(travel), std::move(profits),
                                std::move(services), std::move(mandatory), std::move(physical),
                                std::move(logical), variant, false);
    inst.coords_ = std::move(coords);
    return inst;
}

Instance Instance::from_matrix(int n, int m, double t_max, std::vector<double> travel,
                               std::vector<double> profits, std::vector<double> services,
                               std::vector<int> mandatory, std::vector<Arc> physical,
                               std::vector<Arc> logical, Variant variant, bool exact_time) {
    require(n >= 2, "instance needs at least source and destination");
    require(m >= 1, "fleet size must be at least 1");
    require(t_max >= 0.0, "time budget must be nonnegative");
    require(travel.size() == static_cast<size_t>(n + 1) * (n + 1), "travel matrix size mismatch");
    require(profits.size() == static_cast<size_t>(n + 1), "profit vector size mismatch");
    require(services.size() == static_cast<size_t>(n + 1), "service vector size mismatch");
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j)
            require(travel[i * (n + 1) + j] >= 0.0, "travel times must be nonnegative");
    for (int k = 2; k < n; ++k) {
        require(profits[k] >= 0.0, "profits must be nonnegative");
        require(services[k] >= 0.0, "service times must be nonnegative");
    }
    require(profits[1] == 0.0 && profits[n] == 0.0, "source/destination must carry zero profit");
    require(services[1] == 0.0 && services[n] == 0.0, "source/destination must carry zero service");

    Instance inst;
    inst.n_ = n;
    inst.m_ = m;
    inst.t_max_ = t_max;
    inst.travel_ = std::move(travel);
    inst.profit_ = std::move(profits);
    inst.service_ = std::move(services);
    inst.variant_ = variant;
    inst.exact_time_ = exact_time;

    std::sort(mandatory.begin(), mandatory.end());
    require(std::adjacent_find(mandatory.begin(), mandatory.end()) == mandatory.end(),
            "duplicate mandatory node");
    for (int k : mandatory) require(k >= 2 && k <= n - 1, "mandatory node must be a customer");
    inst.mandatory_ = std::move(mandatory);

    std::sort(physical.begin(), physical.end());
    physical.erase(std::unique(physical.begin(), physical.end()), physical.end());
    for (auto [i, j] : physical) {
        require(i >= 1 && i <= n && j >= 1 && j <= n, "physical arc id out of range");
        require(i != j, "physical arc cannot be a self loop");
    }
    inst.physical_ = std::move(physical);

    for (auto &[i, j] : logical) {
        if (i > j) std::swap(i, j);
        require(i >= 2 && i <= n - 1 && j >= 2 && j <= n - 1, "logical pair must join customers");
        require(i != j, "logical pair must join distinct customers");
    }
    std::sort(logical.begin(), logical.end());
    logical.erase(std::unique(logical.begin(), logical.end()), logical.end());
    inst.logical_ = std::move(logical);

    inst.finalize();
    return inst;
}

void Instance::finalize() {
    const size_t sq = static_cast<size_t>(n_ + 1) * (n_ + 1);
    forbidden_.assign(sq, 0);
    for (auto [i, j] : physical_) forbidden_[i * (n_ + 1) + j] = 1;
    logical_mask_.assign(sq, 0);
    conflict_adj_.assign(n_ + 1, {});
    for (auto [i, j] : logical_) {
        logical_mask_[i * (n_ + 1) + j] = 1;
        logical_mask_[j * (n_ + 1) + i] = 1;
        conflict_adj_[i].push_back(j);
        conflict_adj_[j].push_back(i);
    }
    for (auto &adj : conflict_adj_) std::sort(adj.begin(), adj.end());
    mandatory_mask_.assign(n_ + 1, 0);
    for (int k : mandatory_) mandatory_mask_[k] = 1;
}

double route_duration(const Instance &inst, const std::vector<int> &nodes) {
    if (nodes.size() < 2) throw RouteError("route needs at least source and destination");
    for (int v : nodes)
        if (v < 1 || v > inst.n()) throw RouteError("unknown node id " + std::to_string(v));
    double total = 0.0;
    for (size_t i = 0; i + 1 < nodes.size(); ++i) {
        const int a = nodes[i], b = nodes[i + 1];
        if (!inst.traversable(a, b))
            throw RouteError("arc (" + std::to_string(a) + "," + std::to_string(b) +
                             ") is not in the graph");
        total += inst.travel(a, b);
        if (i > 0) total += inst.service(a);
    }
    return total;
}

Route Route::of(const Instance &inst, std::vector<int> nodes) {
    Route r;
    r.duration = route_duration(inst, nodes);
    r.nodes = std::move(nodes);
    return r;
}

Solution Solution::of(const Instance &inst, std::vector<Route> routes) {
    Solution s;
    std::set<int> visited;
    for (const Route &r : routes)
        for (size_t i = 1; i + 1 < r.nodes.size(); ++i)
            if (inst.is_customer(r.nodes[i])) visited.insert(r.nodes[i]);
    s.profit = 0.0;
    for (int k : visited) s.profit += inst.profit(k);
    s.routes = std::move(routes);
    return s;
}

std::string Violation::to_string() const {
    std::ostringstream os;
    switch (kind) {
        case Kind::DurationExceeded:
            os << "duration-exceeded(route " << route << ", " << value << ")";
            break;
        case Kind::MandatoryMissing:
            os << "mandatory-missing(" << i << ")";
            break;
        case Kind::Revisit:
            os << "revisit(" << i << ")";
            break;
        case Kind::PhysicalArc:
            os << "physical-arc(" << i << "," << j << ")";
            break;
        case Kind::LogicalPair:
            os << "logical-pair(" << i << "," << j << ")";
            break;
        case Kind::BadEndpoint:
            os << "bad-endpoint(route " << route << ")";
            break;
    }
    return os.str();
}

FeasibilityReport check_solution(const Instance &inst, const Solution &sol) {
    FeasibilityReport rep;
    std::vector<int> visit_count(inst.n() + 1, 0);

    for (size_t ri = 0; ri < sol.routes.size(); ++ri) {
        const Route &r = sol.routes[ri];
        const int route_idx = static_cast<int>(ri);
        bool endpoints_ok = r.nodes.size() >= 2 && r.nodes.front() == inst.source() &&
                            r.nodes.back() == inst.destination();
        for (size_t i = 1; i + 1 < r.nodes.size(); ++i)
            if (!inst.is_customer(r.nodes[i])) endpoints_ok = false;
        if (!endpoints_ok) {
            rep.violations.push_back({Violation::Kind::BadEndpoint, route_idx, 0, 0, 0.0});
            continue;
        }
        if (!inst.within_budget(r.duration))
            rep.violations.push_back(
                {Violation::Kind::DurationExceeded, route_idx, 0, 0, r.duration});
        for (size_t i = 0; i + 1 < r.nodes.size(); ++i) {
            const int a = r.nodes[i], b = r.nodes[i + 1];
            if (inst.forbidden(a, b))
                rep.violations.push_back({Violation::Kind::PhysicalArc, route_idx, a, b, 0.0});
        }
        for (size_t i = 1; i + 1 < r.nodes.size(); ++i) ++visit_count[r.nodes[i]];
        if (inst.variant() == Variant::PL) {
            for (size_t i = 1; i + 1 < r.nodes.size(); ++i)
                for (size_t j = i + 1; j + 1 < r.nodes.size(); ++j) {
                    int a = r.nodes[i], b = r.nodes[j];
                    if (inst.logically_incompatible(a, b))
                        rep.violations.push_back({Violation::Kind::LogicalPair, route_idx,
                                                  std::min(a, b), std::max(a, b), 0.0});
                }
        }
    }

    for (int k = 2; k <= inst.n() - 1; ++k)
        if (visit_count[k] > 1)
            rep.violations.push_back({Violation::Kind::Revisit, -1, k, 0, 0.0});
    for (int k : inst.mandatory())
        if (visit_count[k] == 0)
            rep.violations.push_back({Violation::Kind::MandatoryMissing, -1, k, 0, 0.0});

    return rep;
}

}  // namespace topstmin

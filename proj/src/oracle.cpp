#include "topstmin/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>

namespace topstmin {
namespace oracle {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

OracleResult brute_force_solve(const Instance &inst) {
    const int nc = inst.num_customers();
    const int m = inst.m();
    if (nc > 10 || m > 3)
        throw std::invalid_argument("brute force guard: at most 10 customers and 3 routes");

    OracleResult out;
    const int full = 1 << nc;
    auto cust = [&](int bit) { return bit + 2; };

    // logical conflicts inside one subset rule it out as a single route
    std::vector<char> conflict_free(full, 1);
    if (inst.variant() == Variant::PL) {
        for (int mask = 0; mask < full; ++mask)
            for (int a = 0; a < nc && conflict_free[mask]; ++a) {
                if (!(mask & (1 << a))) continue;
                for (int b = a + 1; b < nc; ++b)
                    if ((mask & (1 << b)) &&
                        inst.logically_incompatible(cust(a), cust(b))) {
                        conflict_free[mask] = 0;
                        break;
                    }
            }
    }

    // dp[mask][last]: cheapest time from the source through mask, ending at last
    std::vector<std::vector<double>> dp(full, std::vector<double>(nc, kInf));
    std::vector<std::vector<int>> parent(full, std::vector<int>(nc, -1));
    for (int a = 0; a < nc; ++a)
        if (inst.allowed(1, cust(a)))
            dp[1 << a][a] = inst.travel(1, cust(a)) + inst.service(cust(a));
    for (int mask = 1; mask < full; ++mask)
        for (int last = 0; last < nc; ++last) {
            if (dp[mask][last] == kInf) continue;
            ++out.enumerated;
            for (int nxt = 0; nxt < nc; ++nxt) {
                if (mask & (1 << nxt)) continue;
                if (!inst.allowed(cust(last), cust(nxt))) continue;
                const double t =
                    dp[mask][last] + inst.travel(cust(last), cust(nxt)) + inst.service(cust(nxt));
                const int nm = mask | (1 << nxt);
                if (t < dp[nm][nxt]) {
                    dp[nm][nxt] = t;
                    parent[nm][nxt] = last;
                }
            }
        }

    // cheapest feasible route per subset
    std::vector<double> route_time(full, kInf);
    std::vector<int> route_end(full, -1);
    route_time[0] = inst.travel(1, inst.n());
    if (!inst.allowed(1, inst.n())) route_time[0] = kInf;
    for (int mask = 1; mask < full; ++mask) {
        if (!conflict_free[mask]) continue;
        for (int last = 0; last < nc; ++last) {
            if (dp[mask][last] == kInf || !inst.allowed(cust(last), inst.n())) continue;
            const double t = dp[mask][last] + inst.travel(cust(last), inst.n());
            if (t < route_time[mask]) {
                route_time[mask] = t;
                route_end[mask] = last;
            }
        }
    }
    std::vector<char> route_ok(full, 0);
    for (int mask = 0; mask < full; ++mask)
        route_ok[mask] = route_time[mask] < kInf && inst.within_budget(route_time[mask]);

    // cover[k][mask]: mask splits into exactly k usable routes (empty allowed
    // only when the direct source-destination hop is itself feasible)
    std::vector<std::vector<char>> cover(m + 1, std::vector<char>(full, 0));
    std::vector<std::vector<int>> pick(m + 1, std::vector<int>(full, -1));
    cover[0][0] = 1;
    for (int k = 1; k <= m; ++k)
        for (int mask = 0; mask < full; ++mask) {
            if (route_ok[0] && cover[k - 1][mask]) {
                cover[k][mask] = 1;
                pick[k][mask] = 0;
                continue;
            }
            for (int sub = mask; sub > 0; sub = (sub - 1) & mask)
                if (route_ok[sub] && cover[k - 1][mask ^ sub]) {
                    cover[k][mask] = 1;
                    pick[k][mask] = sub;
                    break;
                }
        }

    int mand_mask = 0;
    for (int k : inst.mandatory()) mand_mask |= 1 << (k - 2);

    int best_mask = -1;
    double best_profit = -1.0;
    for (int mask = 0; mask < full; ++mask) {
        if ((mask & mand_mask) != mand_mask || !cover[m][mask]) continue;
        double p = 0.0;
        for (int a = 0; a < nc; ++a)
            if (mask & (1 << a)) p += inst.profit(cust(a));
        if (p > best_profit) {
            best_profit = p;
            best_mask = mask;
        }
    }
    if (best_mask < 0) return out;

    // rebuild one optimal route set
    std::vector<Route> routes;
    int mask = best_mask;
    for (int k = m; k >= 1; --k) {
        const int sub = pick[k][mask];
        if (sub == 0) {
            routes.push_back(Route::of(inst, {1, inst.n()}));
        } else {
            std::vector<int> seq;
            int cur = route_end[sub], rest = sub;
            while (cur != -1) {
                seq.push_back(cust(cur));
                const int prev = parent[rest][cur];
                rest ^= 1 << cur;
                cur = prev;
            }
            std::reverse(seq.begin(), seq.end());
            seq.insert(seq.begin(), 1);
            seq.push_back(inst.n());
            routes.push_back(Route::of(inst, std::move(seq)));
            mask ^= sub;
        }
    }
    out.profit = best_profit;
    out.best = Solution::of(inst, std::move(routes));
    return out;
}

namespace {

struct AltSearch {
    const Instance &inst;
    std::vector<char> used;       // customers visited anywhere
    std::vector<int> cur_route;   // customers on the route under construction
    double best = -1.0;
    bool any = false;

    void solve(int routes_left) {
        if (routes_left == 0) {
            for (int k : inst.mandatory())
                if (!used[k]) return;
            double p = 0.0;
            for (int v = 2; v <= inst.n() - 1; ++v)
                if (used[v]) p += inst.profit(v);
            any = true;
            best = std::max(best, p);
            return;
        }
        grow(routes_left, 1, 0.0);
    }

    // descending node order, route by route: a construction order independent
    // of the subset dynamic program
    void grow(int routes_left, int cur, double time) {
        if (inst.allowed(cur, inst.n()) &&
            inst.within_budget(time + inst.travel(cur, inst.n()))) {
            std::vector<int> saved;
            saved.swap(cur_route);
            solve(routes_left - 1);
            cur_route.swap(saved);
        }
        if (!inst.within_budget(time)) return;  // times only grow
        for (int v = inst.n() - 1; v >= 2; --v) {
            if (used[v] || !inst.allowed(cur, v)) continue;
            if (inst.variant() == Variant::PL) {
                bool clash = false;
                for (int u : cur_route)
                    if (inst.logically_incompatible(u, v)) {
                        clash = true;
                        break;
                    }
                if (clash) continue;
            }
            const double t = time + inst.travel(cur, v) + inst.service(v);
            used[v] = 1;
            cur_route.push_back(v);
            grow(routes_left, v, t);
            cur_route.pop_back();
            used[v] = 0;
        }
    }
};

}  // namespace

std::optional<double> brute_force_solve_alt(const Instance &inst) {
    AltSearch s{inst, std::vector<char>(inst.n() + 1, 0), {}, -1.0, false};
    s.solve(inst.m());
    if (!s.any) return std::nullopt;
    return s.best;
}

double brute_force_tsp_path(const Instance &inst, const std::vector<int> &customers) {
    if (customers.size() > 8)
        throw std::invalid_argument("tsp path guard: at most 8 customers");
    if (customers.empty())
        return inst.allowed(1, inst.n()) ? inst.travel(1, inst.n()) : kInf;
    std::vector<int> perm = customers;
    std::sort(perm.begin(), perm.end());
    double best = kInf;
    do {
        double t = 0.0;
        bool ok = inst.allowed(1, perm.front());
        t += inst.travel(1, perm.front()) + inst.service(perm.front());
        for (size_t i = 0; i + 1 < perm.size() && ok; ++i) {
            ok = inst.allowed(perm[i], perm[i + 1]);
            t += inst.travel(perm[i], perm[i + 1]) + inst.service(perm[i + 1]);
        }
        if (ok && inst.allowed(perm.back(), inst.n())) {
            t += inst.travel(perm.back(), inst.n());
            best = std::min(best, t);
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

namespace {

/// Edmonds-Karp max flow on a small dense capacity matrix.
double max_flow(std::vector<std::vector<double>> &cap, int s, int t) {
    const int n = static_cast<int>(cap.size());
    double flow = 0.0;
    while (true) {
        std::vector<int> prev(n, -1);
        prev[s] = s;
        std::queue<int> q;
        q.push(s);
        while (!q.empty() && prev[t] == -1) {
            const int u = q.front();
            q.pop();
            for (int v = 0; v < n; ++v)
                if (prev[v] == -1 && cap[u][v] > 1e-12) {
                    prev[v] = u;
                    q.push(v);
                }
        }
        if (prev[t] == -1) return flow;
        double aug = kInf;
        for (int v = t; v != s; v = prev[v]) aug = std::min(aug, cap[prev[v]][v]);
        for (int v = t; v != s; v = prev[v]) {
            cap[prev[v]][v] -= aug;
            cap[v][prev[v]] += aug;
        }
        flow += aug;
    }
}

}  // namespace

std::vector<SecWitness> secs_maxflow_separation(const SupportGraph &sg, double viol_tol) {
    std::vector<SecWitness> found;
    const int n = sg.n;
    for (int k = 2; k <= n - 1; ++k) {
        if (sg.node_weight[k] <= viol_tol) continue;
        // capacities over nodes 1..n-1; the destination has no outgoing arcs
        // and is irrelevant to inflow, so it is simply dropped.
        std::vector<std::vector<double>> cap(n, std::vector<double>(n, 0.0));
        for (int i = 1; i <= n - 1; ++i)
            for (auto [j, w] : sg.out[i])
                if (j <= n - 1) cap[i][j] = w;
        std::vector<std::vector<double>> residual = cap;
        const double cut_value = max_flow(residual, 1, k);
        if (sg.node_weight[k] - cut_value <= viol_tol) continue;

        // min cut: customers unreachable from the source in the residual graph
        std::vector<char> reach(n, 0);
        std::queue<int> q;
        q.push(1);
        reach[1] = 1;
        while (!q.empty()) {
            const int u = q.front();
            q.pop();
            for (int v = 1; v <= n - 1; ++v)
                if (!reach[v] && residual[u][v] > 1e-12) {
                    reach[v] = 1;
                    q.push(v);
                }
        }
        SecWitness w;
        for (int v = 2; v <= n - 1; ++v)
            if (!reach[v]) w.set.push_back(v);
        w.anchor = k;
        w.violation = sg.node_weight[k] - cut_value;
        found.push_back(std::move(w));
    }
    return found;
}

Instance hpp_reduce(int num_vertices, const std::vector<std::pair<int, int>> &edges) {
    const int n = num_vertices + 2;  // source, the graph, destination
    std::vector<std::vector<char>> adj(num_vertices + 1, std::vector<char>(num_vertices + 1, 0));
    for (auto [u, v] : edges) {
        adj[u][v] = 1;
        adj[v][u] = 1;
    }
    std::vector<double> travel(static_cast<size_t>(n + 1) * (n + 1), 0.0);
    std::vector<double> profits(n + 1, 0.0), services(n + 1, 0.0);
    std::vector<int> mandatory;
    std::vector<Arc> physical;
    for (int u = 1; u <= num_vertices; ++u) {
        mandatory.push_back(u + 1);
        for (int v = 1; v <= num_vertices; ++v)
            if (u != v && !adj[u][v]) physical.push_back({u + 1, v + 1});
    }
    return Instance::from_matrix(n, 1, 0.0, std::move(travel), std::move(profits),
                                 std::move(services), std::move(mandatory), std::move(physical),
                                 {}, Variant::P, /*exact_time=*/true);
}

bool hamiltonian_path_exists(int num_vertices, const std::vector<std::pair<int, int>> &edges) {
    if (num_vertices <= 1) return true;
    std::vector<std::vector<char>> adj(num_vertices + 1, std::vector<char>(num_vertices + 1, 0));
    for (auto [u, v] : edges) {
        adj[u][v] = 1;
        adj[v][u] = 1;
    }
    const int full = 1 << num_vertices;
    std::vector<std::vector<char>> dp(full, std::vector<char>(num_vertices, 0));
    for (int v = 0; v < num_vertices; ++v) dp[1 << v][v] = 1;
    for (int mask = 1; mask < full; ++mask)
        for (int last = 0; last < num_vertices; ++last) {
            if (!dp[mask][last]) continue;
            if (mask == full - 1) return true;
            for (int nxt = 0; nxt < num_vertices; ++nxt)
                if (!(mask & (1 << nxt)) && adj[last + 1][nxt + 1])
                    dp[mask | (1 << nxt)][nxt] = 1;
        }
    return false;
}

}  // namespace oracle
}  // namespace topstmin

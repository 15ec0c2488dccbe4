#include "topstmin/tour_bound.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace topstmin {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

TourSubproblem build_tour_subproblem(const Instance &inst, const std::vector<int> &customers) {
    TourSubproblem sub;
    sub.count = static_cast<int>(customers.size()) + 1;
    sub.labels.assign(sub.count, 0);
    for (int i = 0; i < sub.count - 1; ++i) sub.labels[i + 1] = customers[i];
    sub.cost.assign(static_cast<size_t>(sub.count) * sub.count, kInf);

    auto dir_cost = [&](int a, int b) -> double {
        return inst.allowed(a, b) ? inst.travel(a, b) : kInf;
    };
    for (int i = 1; i < sub.count; ++i) {
        const int a = sub.labels[i];
        const double depot = std::min(dir_cost(1, a), dir_cost(a, inst.n()));
        sub.cost[0 * sub.count + i] = sub.cost[i * sub.count + 0] =
            depot == kInf ? kInf : depot + inst.service(a) / 2.0;
        for (int j = i + 1; j < sub.count; ++j) {
            const int b = sub.labels[j];
            const double t = std::min(dir_cost(a, b), dir_cost(b, a));
            const double c = t == kInf ? kInf : t + (inst.service(a) + inst.service(b)) / 2.0;
            sub.cost[i * sub.count + j] = sub.cost[j * sub.count + i] = c;
        }
    }
    return sub;
}

OneTreeResult one_tree(const TourSubproblem &sub, const std::vector<double> &penalties) {
    OneTreeResult res;
    const int n = sub.count;
    res.degree.assign(n, 0);
    auto pcost = [&](int i, int j) {
        const double c = sub.at(i, j);
        return c == kInf ? kInf : c + penalties[i] + penalties[j];
    };

    if (n <= 1) {
        res.value = 0.0;
        res.connected = true;
        return res;
    }
    if (n == 2) {
        // trivial loop: out and back over the single depot edge
        const double c = pcost(0, 1);
        res.connected = c < kInf;
        res.value = res.connected ? 2.0 * c - 2.0 * (penalties[0] + penalties[1]) : kInf;
        res.degree = {2, 2};
        return res;
    }

    // Prim over the non-depot nodes
    std::vector<double> best(n, kInf);
    std::vector<int> parent(n, -1);
    std::vector<char> in_tree(n, 0);
    best[1] = 0.0;
    double tree_cost = 0.0;
    for (int step = 0; step < n - 1; ++step) {
        int pick = -1;
        for (int v = 1; v < n; ++v)
            if (!in_tree[v] && (pick == -1 || best[v] < best[pick])) pick = v;
        if (pick == -1 || best[pick] == kInf) {
            res.value = kInf;
            return res;
        }
        in_tree[pick] = 1;
        tree_cost += best[pick];
        if (parent[pick] != -1) {
            ++res.degree[pick];
            ++res.degree[parent[pick]];
        }
        for (int v = 1; v < n; ++v)
            if (!in_tree[v] && pcost(pick, v) < best[v]) {
                best[v] = pcost(pick, v);
                parent[v] = pick;
            }
    }

    // two cheapest depot edges, to distinct nodes
    int e1 = -1, e2 = -1;
    for (int v = 1; v < n; ++v) {
        const double c = pcost(0, v);
        if (c == kInf) continue;
        if (e1 == -1 || c < pcost(0, e1)) {
            e2 = e1;
            e1 = v;
        } else if (e2 == -1 || c < pcost(0, e2)) {
            e2 = v;
        }
    }
    if (e2 == -1) {
        res.value = kInf;
        return res;
    }
    tree_cost += pcost(0, e1) + pcost(0, e2);
    res.degree[0] = 2;
    ++res.degree[e1];
    ++res.degree[e2];

    double pen_sum = 0.0;
    for (double p : penalties) pen_sum += p;
    res.value = tree_cost - 2.0 * pen_sum;
    res.connected = true;
    return res;
}

namespace {

/// Nearest-neighbour tour cost from the depot; +inf when stuck.
double nearest_neighbour_estimate(const TourSubproblem &sub) {
    const int n = sub.count;
    if (n <= 2) return n == 2 ? 2.0 * sub.at(0, 1) : 0.0;
    std::vector<char> used(n, 0);
    used[0] = 1;
    int cur = 0;
    double total = 0.0;
    for (int step = 0; step < n - 1; ++step) {
        int pick = -1;
        for (int v = 1; v < n; ++v)
            if (!used[v] && (pick == -1 || sub.at(cur, v) < sub.at(cur, pick))) pick = v;
        if (pick == -1 || sub.at(cur, pick) == kInf) return kInf;
        total += sub.at(cur, pick);
        used[pick] = 1;
        cur = pick;
    }
    if (sub.at(cur, 0) == kInf) return kInf;
    return total + sub.at(cur, 0);
}

}  // namespace

HelsgaunBound helsgaun_lower_bound(const TourSubproblem &sub, int iteration_budget) {
    HelsgaunBound out;
    const int n = sub.count;
    std::vector<double> pi(n, 0.0);

    OneTreeResult tree = one_tree(sub, pi);
    if (tree.value == kInf) {
        out.value = kInf;
        return out;
    }
    out.value = tree.value;
    out.tour = std::all_of(tree.degree.begin(), tree.degree.end(),
                           [](int d) { return d == 2; });
    if (n <= 3 || out.tour) return out;

    double ub_est = nearest_neighbour_estimate(sub);
    if (ub_est == kInf) ub_est = 2.0 * std::max(tree.value, 1.0);
    double step = ub_est / (2.0 * n);
    std::vector<int> prev_degree = tree.degree;
    int non_improving = 0;

    for (int it = 1; it <= iteration_budget; ++it) {
        for (int v = 1; v < n; ++v)
            pi[v] += step * (0.7 * (tree.degree[v] - 2) + 0.3 * (prev_degree[v] - 2));
        prev_degree = tree.degree;
        tree = one_tree(sub, pi);
        out.iterations = it;
        if (tree.value == kInf) break;  // penalties cannot disconnect; guard anyway
        if (tree.value > out.value + 1e-12) {
            out.value = tree.value;
            non_improving = 0;
        } else if (++non_improving >= 10) {
            step *= 0.5;
            non_improving = 0;
        }
        if (std::all_of(tree.degree.begin(), tree.degree.end(),
                        [](int d) { return d == 2; })) {
            out.value = std::max(out.value, tree.value);
            out.tour = true;
            break;
        }
    }
    return out;
}

}  // namespace topstmin

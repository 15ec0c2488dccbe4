#include "topstmin/generator.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace topstmin {
namespace forge {

namespace {

std::vector<int> customer_ids(const Instance &inst) {
    std::vector<int> ids(inst.num_customers());
    std::iota(ids.begin(), ids.end(), 2);
    return ids;
}

std::vector<Coord> customer_coords(const Instance &inst) {
    std::vector<Coord> pts;
    for (int k = 2; k <= inst.n() - 1; ++k) pts.push_back(inst.coord(k));
    return pts;
}

std::vector<NodePair> all_pairs(int n) {
    std::vector<NodePair> pairs;
    for (int i = 1; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j) pairs.push_back({i, j});
    return pairs;
}

}  // namespace

GenScheme GenScheme::from_id(const std::string &id) {
    GenScheme s;
    std::stringstream ss(id);
    std::string tok;
    std::vector<std::string> toks;
    while (std::getline(ss, tok, '-')) toks.push_back(tok);
    if (toks.size() != 2 && toks.size() != 3) throw GenError("bad scheme id '" + id + "'");
    if (toks[0] == "sm") s.mandatory = MandatoryMethod::Scattered;
    else if (toks[0] == "cm") s.mandatory = MandatoryMethod::Clustered;
    else throw GenError("bad mandatory method in scheme '" + id + "'");
    if (toks[1] == "cpi") s.physical = PhysicalMethod::ClusterBased;
    else if (toks[1] == "dpi") s.physical = PhysicalMethod::DegreeBased;
    else throw GenError("bad physical method in scheme '" + id + "'");
    if (toks.size() == 3) {
        if (toks[2] == "fli") s.logical = LogicalMethod::Farthest;
        else if (toks[2] == "nli") s.logical = LogicalMethod::Nearest;
        else throw GenError("bad logical method in scheme '" + id + "'");
    }
    return s;
}

std::string GenScheme::id() const {
    std::string out = mandatory == MandatoryMethod::Scattered ? "sm" : "cm";
    out += physical == PhysicalMethod::ClusterBased ? "-cpi" : "-dpi";
    if (logical == LogicalMethod::Farthest) out += "-fli";
    else if (logical == LogicalMethod::Nearest) out += "-nli";
    return out;
}

std::vector<std::string> GenScheme::all_ids() {
    std::vector<std::string> ids;
    for (const char *mnd : {"sm", "cm"})
        for (const char *phy : {"cpi", "dpi"})
            for (const char *log : {"", "fli", "nli"}) {
                std::string id = std::string(mnd) + "-" + phy;
                if (*log) id += std::string("-") + log;
                ids.push_back(std::move(id));
            }
    return ids;
}

int removed_arc_target(int n, double fraction) {
    const long total = static_cast<long>(n) * (n - 1);
    return 2 * static_cast<int>(std::floor(fraction * total / 2.0));
}

int mandatory_target(int customers, double fraction) {
    return static_cast<int>(std::floor(fraction * customers + 0.5));
}

std::vector<int> select_mandatory(const Instance &inst, MandatoryMethod method,
                                  double fraction) {
    const std::vector<int> ids = customer_ids(inst);
    const int want = mandatory_target(static_cast<int>(ids.size()), fraction);
    if (want < 1) throw GenError("mandatory fraction rounds to zero nodes");
    if (want > static_cast<int>(ids.size())) throw GenError("fewer customers than mandatory target");
    const bool maximize = method == MandatoryMethod::Scattered;
    auto dist = [&](int a, int b) { return euclid(inst.coord(a), inst.coord(b)); };

    std::vector<int> sel;
    if (want == 1) {
        // degenerate: extremize the total distance to every other customer
        int best = ids[0];
        double best_v = 0.0;
        for (int a : ids) {
            double v = 0.0;
            for (int b : ids)
                if (b != a) v += dist(a, b);
            if (best == a || (maximize ? v > best_v : v < best_v)) {
                best = a;
                best_v = v;
            }
        }
        return {best};
    }

    int pa = ids[0], pb = ids[1];
    double pv = dist(pa, pb);
    for (size_t i = 0; i < ids.size(); ++i)
        for (size_t j = i + 1; j < ids.size(); ++j) {
            const double v = dist(ids[i], ids[j]);
            if (maximize ? v > pv : v < pv) {
                pa = ids[i];
                pb = ids[j];
                pv = v;
            }
        }
    sel = {pa, pb};
    while (static_cast<int>(sel.size()) < want) {
        int best = -1;
        double best_v = 0.0;
        for (int a : ids) {
            if (std::find(sel.begin(), sel.end(), a) != sel.end()) continue;
            double v = 0.0;
            for (int s : sel) v += dist(a, s);
            if (best == -1 || (maximize ? v > best_v : v < best_v)) {
                best = a;
                best_v = v;
            }
        }
        sel.push_back(best);
    }

    // first-improvement pairwise swaps until stable
    auto total = [&](const std::vector<int> &set) {
        double v = 0.0;
        for (size_t i = 0; i < set.size(); ++i)
            for (size_t j = i + 1; j < set.size(); ++j) v += dist(set[i], set[j]);
        return v;
    };
    bool improved = true;
    while (improved) {
        improved = false;
        double cur = total(sel);
        for (size_t si = 0; si < sel.size() && !improved; ++si)
            for (int a : ids) {
                if (std::find(sel.begin(), sel.end(), a) != sel.end()) continue;
                std::vector<int> alt = sel;
                alt[si] = a;
                const double v = total(alt);
                if (maximize ? v > cur + 1e-12 : v < cur - 1e-12) {
                    sel = std::move(alt);
                    improved = true;
                    break;
                }
            }
    }
    std::sort(sel.begin(), sel.end());
    return sel;
}

std::vector<int> kmeans_clusters(const std::vector<Coord> &points, int c) {
    const int n = static_cast<int>(points.size());
    if (n < c) throw GenError("fewer points than clusters");
    auto d2 = [&](const Coord &a, const Coord &b) {
        return (a.x - b.x) * (a.x - b.x) + (a.y - b.y) * (a.y - b.y);
    };

    // farthest-spread initialization: start from the widest pair, then add
    // the point maximizing the distance sum to the chosen centres
    std::vector<int> centres;
    {
        int pa = 0, pb = n > 1 ? 1 : 0;
        double pv = -1.0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (d2(points[i], points[j]) > pv) {
                    pv = d2(points[i], points[j]);
                    pa = i;
                    pb = j;
                }
        centres = {pa, pb};
        while (static_cast<int>(centres.size()) < c) {
            int best = -1;
            double best_v = -1.0;
            for (int i = 0; i < n; ++i) {
                if (std::find(centres.begin(), centres.end(), i) != centres.end()) continue;
                double v = 0.0;
                for (int s : centres) v += std::sqrt(d2(points[i], points[s]));
                if (v > best_v) {
                    best = i;
                    best_v = v;
                }
            }
            centres.push_back(best);
        }
        centres.resize(c);
    }

    std::vector<Coord> mean(c);
    for (int k = 0; k < c; ++k) mean[k] = points[centres[k]];
    std::vector<int> owner(n, 0);
    for (int round = 0; round < 100; ++round) {
        bool changed = false;
        for (int i = 0; i < n; ++i) {
            int best = 0;
            for (int k = 1; k < c; ++k)
                if (d2(points[i], mean[k]) < d2(points[i], mean[best])) best = k;
            if (owner[i] != best) {
                owner[i] = best;
                changed = true;
            }
        }
        std::vector<Coord> sum(c, {0.0, 0.0});
        std::vector<int> cnt(c, 0);
        for (int i = 0; i < n; ++i) {
            sum[owner[i]].x += points[i].x;
            sum[owner[i]].y += points[i].y;
            ++cnt[owner[i]];
        }
        for (int k = 0; k < c; ++k) {
            if (cnt[k] > 0) {
                mean[k] = {sum[k].x / cnt[k], sum[k].y / cnt[k]};
                continue;
            }
            // re-seed an empty cluster with the point farthest from every mean
            int far = 0;
            double far_v = -1.0;
            for (int i = 0; i < n; ++i) {
                double v = d2(points[i], mean[0]);
                for (int w = 1; w < c; ++w) v = std::min(v, d2(points[i], mean[w]));
                if (v > far_v) {
                    far_v = v;
                    far = i;
                }
            }
            mean[k] = points[far];
            changed = true;
        }
        if (!changed) break;
    }
    return owner;
}

ClusterAssignment assign_clusters(const Instance &inst, int c, Rng &rng) {
    ClusterAssignment ca;
    ca.membership = kmeans_clusters(customer_coords(inst), c);
    ca.incompatible.assign(c, std::vector<char>(c, 0));
    for (int a = 0; a < c; ++a)
        for (int b = a + 1; b < c; ++b) {
            const char inc = rng.uniform() < 0.5 ? 1 : 0;
            ca.incompatible[a][b] = ca.incompatible[b][a] = inc;
        }
    return ca;
}

namespace {

/// cluster of a node id, or -1 for source/destination
int cluster_of(const Instance &inst, const ClusterAssignment &ca, int node) {
    if (!inst.is_customer(node)) return -1;
    return ca.membership[node - 2];
}

struct ClusterTally {
    const Instance &inst;
    const ClusterAssignment &ca;
    long violations = 0;
    std::vector<int> out_arcs;   // per cluster, directed
    std::vector<int> intra_arcs; // per cluster, directed

    explicit ClusterTally(const Instance &i, const ClusterAssignment &a)
        : inst(i), ca(a), out_arcs(a.incompatible.size(), 0),
          intra_arcs(a.incompatible.size(), 0) {}

    void apply(const NodePair &p, int sign) {
        const int ci = cluster_of(inst, ca, p.first), cj = cluster_of(inst, ca, p.second);
        if (ci >= 0 && cj >= 0 && ca.incompatible[ci][cj]) violations += 2L * sign;
        if (ci >= 0) out_arcs[ci] += sign;
        if (cj >= 0) out_arcs[cj] += sign;
        if (ci >= 0 && ci == cj) intra_arcs[ci] += 2 * sign;
    }
    ClusterScore score() const {
        ClusterScore s;
        s.violations = violations;
        for (size_t k = 0; k < out_arcs.size(); ++k)
            s.balance = std::max({s.balance, out_arcs[k], intra_arcs[k]});
        return s;
    }

    // violations first, then all cluster loads sorted descending: strictly
    // finer than (violations, max load), which gives the exchange phase a
    // gradient across plateaus of the max
    std::vector<long> refined() const {
        std::vector<long> v;
        for (size_t k = 0; k < out_arcs.size(); ++k) {
            v.push_back(out_arcs[k]);
            v.push_back(intra_arcs[k]);
        }
        std::sort(v.begin(), v.end(), std::greater<long>());
        v.insert(v.begin(), violations);
        return v;
    }
};

}  // namespace

ClusterScore score_cluster_selection(const Instance &inst, const ClusterAssignment &clusters,
                                     const std::vector<NodePair> &kept) {
    ClusterTally tally(inst, clusters);
    for (const NodePair &p : kept) tally.apply(p, +1);
    return tally.score();
}

int max_out_degree(int n, const std::vector<NodePair> &kept) {
    std::vector<int> deg(n + 1, 0);
    for (auto [i, j] : kept) {
        ++deg[i];
        ++deg[j];
    }
    return *std::max_element(deg.begin(), deg.end());
}

std::vector<NodePair> select_arcs_cluster_based(const Instance &inst,
                                                const ClusterAssignment &clusters,
                                                int kept_pairs,
                                                const std::vector<NodePair> &forced) {
    const std::vector<NodePair> pairs = all_pairs(inst.n());
    if (kept_pairs > static_cast<int>(pairs.size()))
        throw GenError("kept pair target exceeds the pair universe");
    std::vector<char> picked(pairs.size(), 0);
    std::vector<char> locked(pairs.size(), 0);
    ClusterTally tally(inst, clusters);
    int preset = 0;
    for (const NodePair &f : forced) {
        const auto it = std::lower_bound(pairs.begin(), pairs.end(), f);
        const size_t idx = static_cast<size_t>(it - pairs.begin());
        if (picked[idx]) continue;
        picked[idx] = locked[idx] = 1;
        tally.apply(f, +1);
        ++preset;
    }
    if (preset > kept_pairs) throw GenError("forced pairs exceed the kept target");

    for (int step = preset; step < kept_pairs; ++step) {
        int best = -1;
        ClusterScore best_score;
        for (size_t p = 0; p < pairs.size(); ++p) {
            if (picked[p]) continue;
            tally.apply(pairs[p], +1);
            const ClusterScore s = tally.score();
            tally.apply(pairs[p], -1);
            if (best == -1 || s < best_score) {
                best = static_cast<int>(p);
                best_score = s;
            }
        }
        picked[best] = 1;
        tally.apply(pairs[best], +1);
    }

    // pairwise exchange, first improvement on the refined score
    for (int pass = 0; pass < 60; ++pass) {
        bool improved = false;
        const std::vector<long> base = tally.refined();
        for (size_t s = 0; s < pairs.size() && !improved; ++s) {
            if (!picked[s] || locked[s]) continue;
            for (size_t u = 0; u < pairs.size(); ++u) {
                if (picked[u]) continue;
                tally.apply(pairs[s], -1);
                tally.apply(pairs[u], +1);
                const std::vector<long> cur = tally.refined();
                if (cur < base) {
                    picked[s] = 0;
                    picked[u] = 1;
                    improved = true;
                    break;
                }
                tally.apply(pairs[u], -1);
                tally.apply(pairs[s], +1);
            }
        }
        if (!improved) break;
    }

    std::vector<NodePair> kept;
    for (size_t p = 0; p < pairs.size(); ++p)
        if (picked[p]) kept.push_back(pairs[p]);
    return kept;
}

std::vector<NodePair> select_arcs_degree_based(const Instance &inst, int kept_pairs,
                                               const std::vector<NodePair> &forced) {
    const std::vector<NodePair> pairs = all_pairs(inst.n());
    if (kept_pairs > static_cast<int>(pairs.size()))
        throw GenError("kept pair target exceeds the pair universe");
    std::vector<char> picked(pairs.size(), 0);
    std::vector<char> locked(pairs.size(), 0);
    std::vector<int> deg(inst.n() + 1, 0);
    int preset = 0;
    for (const NodePair &f : forced) {
        const auto it = std::lower_bound(pairs.begin(), pairs.end(), f);
        const size_t idx = static_cast<size_t>(it - pairs.begin());
        if (picked[idx]) continue;
        picked[idx] = locked[idx] = 1;
        ++deg[f.first];
        ++deg[f.second];
        ++preset;
    }
    if (preset > kept_pairs) throw GenError("forced pairs exceed the kept target");

    for (int step = preset; step < kept_pairs; ++step) {
        int best = -1;
        int best_max = 0, best_sum = 0;
        for (size_t p = 0; p < pairs.size(); ++p) {
            if (picked[p]) continue;
            const int di = deg[pairs[p].first] + 1, dj = deg[pairs[p].second] + 1;
            const int mx = std::max(di, dj), sm = di + dj;
            if (best == -1 || mx < best_max || (mx == best_max && sm < best_sum)) {
                best = static_cast<int>(p);
                best_max = mx;
                best_sum = sm;
            }
        }
        picked[best] = 1;
        ++deg[pairs[best].first];
        ++deg[pairs[best].second];
    }

    for (int pass = 0; pass < 10; ++pass) {
        bool improved = false;
        const int alpha = *std::max_element(deg.begin(), deg.end());
        for (size_t s = 0; s < pairs.size() && !improved; ++s) {
            if (!picked[s] || locked[s]) continue;
            if (deg[pairs[s].first] != alpha && deg[pairs[s].second] != alpha) continue;
            for (size_t u = 0; u < pairs.size(); ++u) {
                if (picked[u]) continue;
                --deg[pairs[s].first];
                --deg[pairs[s].second];
                ++deg[pairs[u].first];
                ++deg[pairs[u].second];
                const int nalpha = *std::max_element(deg.begin(), deg.end());
                if (nalpha < alpha) {
                    picked[s] = 0;
                    picked[u] = 1;
                    improved = true;
                    break;
                }
                --deg[pairs[u].first];
                --deg[pairs[u].second];
                ++deg[pairs[s].first];
                ++deg[pairs[s].second];
            }
        }
        if (!improved) break;
    }

    std::vector<NodePair> kept;
    for (size_t p = 0; p < pairs.size(); ++p)
        if (picked[p]) kept.push_back(pairs[p]);
    return kept;
}

std::vector<Arc> select_logical(const Instance &inst, LogicalMethod method, double fraction) {
    std::vector<Arc> out;
    if (method == LogicalMethod::None) return out;
    const std::vector<int> ids = customer_ids(inst);
    const int nc = static_cast<int>(ids.size());
    if (nc < 2) return out;
    const int per_node = static_cast<int>(std::ceil(fraction * (nc - 1)));

    std::set<Arc> dedup;
    for (int a : ids) {
        std::vector<int> others;
        for (int b : ids)
            if (b != a) others.push_back(b);
        std::stable_sort(others.begin(), others.end(), [&](int u, int v) {
            const double du = euclid(inst.coord(a), inst.coord(u));
            const double dv = euclid(inst.coord(a), inst.coord(v));
            if (du != dv) return method == LogicalMethod::Farthest ? du > dv : du < dv;
            return u < v;
        });
        for (int t = 0; t < per_node && t < static_cast<int>(others.size()); ++t) {
            const int b = others[t];
            dedup.insert({std::min(a, b), std::max(a, b)});
        }
    }
    out.assign(dedup.begin(), dedup.end());
    return out;
}

ServiceTimes assign_service_times(const Instance &inst, double share, double stretch, Rng &rng) {
    ServiceTimes st;
    st.service.assign(inst.n() + 1, 0.0);
    const double total = share * inst.m() * inst.t_max();
    std::vector<double> draws;
    double sum = 0.0;
    for (int k = 2; k <= inst.n() - 1; ++k) {
        draws.push_back(rng.uniform());
        sum += draws.back();
    }
    for (int k = 2; k <= inst.n() - 1; ++k)
        st.service[k] = sum > 0.0 ? total * draws[k - 2] / sum : 0.0;
    st.new_t_max = stretch * inst.t_max();
    return st;
}

int ensure_mandatory_access(const Instance &base, const std::vector<int> &mandatory,
                            const std::vector<double> &service, double new_t_max,
                            std::set<NodePair> &kept) {
    int restored = 0;
    const int n = base.n();
    for (int k : mandatory) {
        for (const NodePair p : {NodePair{1, k}, NodePair{k, n}})
            if (kept.insert(p).second) ++restored;
        const double direct = base.travel(1, k) + service[k] + base.travel(k, n);
        if (direct > new_t_max + kFeasEps)
            throw GenError("mandatory node " + std::to_string(k) +
                           " cannot fit the time budget; instance unrepairable");
    }
    return restored;
}

GenResult generate(const Instance &base, const GenScheme &scheme) {
    if (!base.has_coords()) throw GenError("generation needs a coordinate instance");
    const int n = base.n();
    Rng rng(scheme.seed);

    std::vector<int> mandatory =
        select_mandatory(base, scheme.mandatory, scheme.mandatory_fraction);

    const int removed_target = removed_arc_target(n, scheme.arc_removal_fraction);
    const int kept_pairs = (static_cast<int>(static_cast<long>(n) * (n - 1)) - removed_target) / 2;
    std::vector<NodePair> forced;
    for (int k : mandatory) {
        forced.push_back({1, k});
        forced.push_back({k, n});
    }
    std::vector<NodePair> kept;
    if (scheme.physical == PhysicalMethod::ClusterBased) {
        const ClusterAssignment ca = assign_clusters(base, scheme.cluster_count, rng);
        kept = select_arcs_cluster_based(base, ca, kept_pairs, forced);
    } else {
        kept = select_arcs_degree_based(base, kept_pairs, forced);
    }
    std::set<NodePair> kept_set(kept.begin(), kept.end());

    std::vector<Arc> logical = select_logical(base, scheme.logical, scheme.logical_fraction);

    const ServiceTimes st =
        assign_service_times(base, scheme.service_share, scheme.tmax_stretch, rng);

    GenResult result{base, false, false};
    result.repaired =
        ensure_mandatory_access(base, mandatory, st.service, st.new_t_max, kept_set) > 0;

    // conflict pairs inside the mandatory set: greedy colouring estimate
    if (!logical.empty()) {
        std::set<Arc> lg(logical.begin(), logical.end());
        std::vector<int> colour(n + 1, -1);
        int colours_used = 0;
        for (int k : mandatory) {
            std::set<int> used;
            for (int o : mandatory) {
                if (colour[o] < 0 || o == k) continue;
                if (lg.count({std::min(k, o), std::max(k, o)})) used.insert(colour[o]);
            }
            int c = 0;
            while (used.count(c)) ++c;
            colour[k] = c;
            colours_used = std::max(colours_used, c + 1);
        }
        if (colours_used > base.m()) result.conflict_warning = true;
    }

    std::vector<Arc> removed;
    for (int i = 1; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j)
            if (!kept_set.count({i, j})) {
                removed.push_back({i, j});
                removed.push_back({j, i});
            }
    std::sort(removed.begin(), removed.end());

    std::vector<Coord> coords(n + 1);
    std::vector<double> profits(n + 1, 0.0);
    for (int k = 1; k <= n; ++k) {
        coords[k] = base.coord(k);
        profits[k] = base.profit(k);
    }
    result.instance = Instance::from_coords(base.m(), st.new_t_max, std::move(coords),
                                            std::move(profits), st.service, std::move(mandatory),
                                            std::move(removed), std::move(logical),
                                            scheme.variant());
    return result;
}

}  // namespace forge
}  // namespace topstmin

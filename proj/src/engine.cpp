#include "topstmin/engine.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <queue>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "topstmin/simplex.hpp"
#include "topstmin/support_graph.hpp"
#include "topstmin/tour_bound.hpp"

namespace topstmin {
namespace engine {

const char *status_name(Status s) {
    switch (s) {
        case Status::Opt: return "OPT";
        case Status::NoOpt: return "NO-OPT";
        case Status::Infs: return "INFS";
        case Status::NoSols: return "NO-SOLS";
    }
    return "?";
}

unsigned parse_families(const std::string &spec) {
    if (spec == "all") return kAllFamilies;
    if (spec == "none" || spec.empty()) return 0;
    unsigned out = 0;
    std::stringstream ss(spec);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok == "RI") out |= kFamilyRI;
        else if (tok == "SI") out |= kFamilySI;
        else if (tok == "SPI") out |= kFamilySPI;
        else if (tok == "SEC") out |= kFamilySEC;
        else if (tok == "LI") out |= kFamilyLI;
        else throw std::invalid_argument("unknown cut family '" + tok + "'");
    }
    return out;
}

std::string families_to_string(unsigned families) {
    if (families == kAllFamilies) return "all";
    if (families == 0) return "none";
    std::string out;
    auto put = [&](unsigned bit, const char *name) {
        if (families & bit) {
            if (!out.empty()) out += ",";
            out += name;
        }
    };
    put(kFamilyRI, "RI");
    put(kFamilySI, "SI");
    put(kFamilySPI, "SPI");
    put(kFamilySEC, "SEC");
    put(kFamilyLI, "LI");
    return out;
}

SolverConfig parse_config(const std::string &text) {
    SolverConfig cfg;
    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::stringstream ls(line);
        std::string key, eq, value;
        if (!(ls >> key)) continue;
        if (!(ls >> eq >> value) || eq != "=")
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": expected 'key = value'");
        if (key == "time_limit_s") cfg.time_limit_s = std::stod(value);
        else if (key == "node_limit") cfg.node_limit = std::stol(value);
        else if (key == "eps_feas") cfg.eps_feas = std::stod(value);
        else if (key == "support_tol") cfg.support_tol = std::stod(value);
        else if (key == "viol_tol") cfg.viol_tol = std::stod(value);
        else if (key == "integrality_tol") cfg.integrality_tol = std::stod(value);
        else if (key == "max_routes") cfg.max_routes = std::stoi(value);
        else if (key == "max_cycles") cfg.max_cycles = std::stoi(value);
        else if (key == "cut_rounds_per_node") cfg.cut_rounds_per_node = std::stoi(value);
        else if (key == "cuts_per_round") cfg.cuts_per_round = std::stoi(value);
        else if (key == "max_total_cuts") cfg.max_total_cuts = std::stoi(value);
        else if (key == "helsgaun_iterations") cfg.helsgaun_iterations = std::stoi(value);
        else if (key == "cut_families") cfg.families = parse_families(value);
        else if (key == "preprocessing") cfg.preprocessing = value == "true" || value == "1";
        else if (key == "deterministic") cfg.deterministic = value == "true" || value == "1";
        else throw std::invalid_argument("unknown config key '" + key + "'");
    }
    return cfg;
}

SolverConfig read_config_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

Fixings preprocess(const Instance &inst) {
    Fixings fix;
    const int n = inst.n();
    std::vector<char> dead(n + 1, 0);
    for (int k = 2; k <= n - 1; ++k) {
        const bool no_in = !inst.allowed(1, k);
        const bool no_out = !inst.allowed(k, n);
        const double direct = inst.travel(1, k) + inst.service(k) + inst.travel(k, n);
        if (no_in || no_out || !inst.within_budget(direct)) {
            fix.nodes.push_back(k);
            dead[k] = 1;
            if (inst.is_mandatory(k)) fix.mandatory_unreachable = true;
        }
    }
    for (int i = 1; i <= n - 1; ++i)
        for (int j = 2; j <= n; ++j) {
            if (!inst.allowed(i, j)) continue;
            const double through = (i == 1 ? 0.0 : inst.travel(1, i)) + inst.service(i) +
                                   inst.travel(i, j) + inst.service(j) +
                                   (j == n ? 0.0 : inst.travel(j, n));
            const bool logical_ban = inst.variant() == Variant::PL && inst.is_customer(i) &&
                                     inst.is_customer(j) && inst.logically_incompatible(i, j);
            if (!inst.within_budget(through) || logical_ban) fix.arcs.push_back({i, j});
        }
    return fix;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct BoundChange {
    int var;
    double lo, hi;
};

struct Node {
    long id = 0;
    double est = kInf;  // bound inherited from the parent relaxation
    std::vector<BoundChange> path;
};

struct NodeOrder {
    bool operator()(const Node &a, const Node &b) const {
        if (a.est != b.est) return a.est < b.est;  // max-heap on the bound
        return a.id > b.id;                        // ties: oldest first
    }
};

class Search {
public:
    Search(const Instance &inst, const SolverConfig &config, BuiltModel bm, bool with_cuts)
        : inst_(inst), cfg_(config), bm_(std::move(bm)), with_cuts_(with_cuts) {}

    SolveResult run();

private:
    const Instance &inst_;
    const SolverConfig &cfg_;
    BuiltModel bm_;
    bool with_cuts_;

    DenseSimplex lp_;
    std::vector<double> base_lo_, base_hi_;
    std::unordered_map<int, std::pair<double, double>> applied_;
    std::unordered_set<std::string> cut_pool_;
    CutCounters counters_{0, 0, 0, 0, 0};
    long total_cuts_ = 0;

    double lb_ = -kInf;
    std::optional<Solution> incumbent_;
    long next_id_ = 0;
    long nodes_processed_ = 0;
    std::priority_queue<Node, std::vector<Node>, NodeOrder> open_;
    std::optional<Node> plunge_;

    std::chrono::steady_clock::time_point start_;

    double elapsed() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }
    bool gap_closed(double ub) const {
        return ub - lb_ <= cfg_.integrality_tol * std::max(1.0, std::abs(ub));
    }

    void apply_node(const Node &node);
    std::pair<int, double> pick_branch_var(const std::vector<double> &point) const;
    bool try_incumbent(const std::vector<double> &point, double obj);
    int separation_round(const std::vector<double> &point);
    std::vector<Cut> collect_cuts(const std::vector<double> &point);
    double open_bound() const;
};

void Search::apply_node(const Node &node) {
    std::unordered_map<int, std::pair<double, double>> target;
    for (const BoundChange &bc : node.path) target[bc.var] = {bc.lo, bc.hi};
    for (const auto &[var, b] : applied_) {
        (void)b;
        if (!target.count(var)) lp_.set_var_bounds(var, base_lo_[var], base_hi_[var]);
    }
    for (const auto &[var, b] : target) {
        auto it = applied_.find(var);
        if (it == applied_.end() || it->second != b) lp_.set_var_bounds(var, b.first, b.second);
    }
    applied_ = std::move(target);
}

std::pair<int, double> Search::pick_branch_var(const std::vector<double> &point) const {
    // most fractional visit variable first, then arcs, then conflict
    // indicators; ties to the lowest variable index
    const auto &vars = bm_.model.vars;
    int best = -1;
    double best_score = cfg_.integrality_tol;
    auto scan = [&](VarRole role) {
        for (int v = 0; v < bm_.model.num_vars(); ++v) {
            if (vars[v].kind == VarKind::Continuous) continue;
            if (bm_.vmap.key_of(v).role != role) continue;
            const double f = point[v] - std::floor(point[v]);
            const double score = std::min(f, 1.0 - f);
            if (score > best_score + 1e-12) {
                best = v;
                best_score = score;
            }
        }
        return best != -1;
    };
    if (scan(VarRole::NodeY)) return {best, point[best]};
    if (scan(VarRole::ArcX)) return {best, point[best]};
    if (scan(VarRole::PairU)) return {best, point[best]};
    return {-1, 0.0};
}

bool Search::try_incumbent(const std::vector<double> &point, double obj) {
    Solution sol = extract_solution(inst_, bm_.vmap, point, cfg_.integrality_tol);
    if (!check_solution(inst_, sol).feasible()) return false;
    if (sol.profit > lb_) {
        lb_ = sol.profit;
        incumbent_ = std::move(sol);
    }
    (void)obj;
    return true;
}

std::vector<Cut> Search::collect_cuts(const std::vector<double> &point) {
    std::vector<Cut> found;
    const SupportGraph sg = build_support_graph(inst_, bm_.vmap, point, cfg_.support_tol);
    EnumCaps caps{cfg_.max_routes, cfg_.max_cycles, inst_.n()};
    const RouteSet rs = enumerate_routes(inst_, sg, caps);

    for (const Route &r : rs.routes) {
        if (!inst_.within_budget(r.duration)) {
            if (cfg_.family_enabled(kFamilySPI)) {
                auto cuts = separate_subpath_inequalities(inst_, r, bm_.vmap, point, cfg_.viol_tol);
                for (auto &c : cuts) found.push_back(std::move(c));
            }
            bool set_cut_applies = false;
            if (cfg_.family_enabled(kFamilySI) && r.length() >= 4) {
                std::vector<int> customers(r.nodes.begin() + 1, r.nodes.end() - 1);
                const TourSubproblem sub = build_tour_subproblem(inst_, customers);
                const HelsgaunBound hb = helsgaun_lower_bound(sub, cfg_.helsgaun_iterations);
                if (hb.value > inst_.t_max()) {
                    set_cut_applies = true;
                    if (auto c = separate_set_inequality(inst_, r, bm_.vmap, point, hb.value,
                                                         cfg_.viol_tol))
                        found.push_back(std::move(*c));
                }
            }
            if (!set_cut_applies && cfg_.family_enabled(kFamilyRI)) {
                if (auto c = separate_route_inequality(inst_, r, bm_.vmap, point, cfg_.viol_tol))
                    found.push_back(std::move(*c));
            }
        }
        if (cfg_.family_enabled(kFamilyLI)) {
            auto cuts = separate_logical_inequalities(inst_, r, bm_.vmap, point, cfg_.viol_tol);
            for (auto &c : cuts) found.push_back(std::move(c));
        }
    }
    if (cfg_.family_enabled(kFamilySEC)) {
        const CycleSet cyc = enumerate_elementary_cycles(sg, caps);
        auto cuts = separate_secs(cyc.cycles, sg, bm_.vmap, cfg_.viol_tol);
        for (auto &c : cuts) found.push_back(std::move(c));
    }
    return found;
}

int Search::separation_round(const std::vector<double> &point) {
    if (total_cuts_ >= cfg_.max_total_cuts) return 0;
    std::vector<Cut> found = collect_cuts(point);
    std::vector<int> order(found.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return found[a].violation > found[b].violation; });

    std::vector<LpRow> rows;
    int added = 0;
    for (int idx : order) {
        if (added >= cfg_.cuts_per_round || total_cuts_ + added >= cfg_.max_total_cuts) break;
        Cut &c = found[idx];
        if (!cut_pool_.insert(c.key()).second) continue;
        rows.push_back({std::move(c.terms), Rel::LE, c.rhs});
        switch (c.family) {
            case CutFamily::RI: ++counters_[0]; break;
            case CutFamily::SI: ++counters_[1]; break;
            case CutFamily::SPiLeft:
            case CutFamily::SPiRight: ++counters_[2]; break;
            case CutFamily::SEC: ++counters_[3]; break;
            case CutFamily::LI: ++counters_[4]; break;
        }
        ++added;
    }
    lp_.add_rows(rows);
    total_cuts_ += added;
    return added;
}

double Search::open_bound() const {
    double ub = lb_;
    if (plunge_) ub = std::max(ub, plunge_->est);
    if (!open_.empty()) ub = std::max(ub, open_.top().est);
    return ub;
}

SolveResult Search::run() {
    start_ = std::chrono::steady_clock::now();
    SolveResult res;

    lp_.load(bm_.model);
    base_lo_.resize(bm_.model.num_vars());
    base_hi_.resize(bm_.model.num_vars());
    for (int v = 0; v < bm_.model.num_vars(); ++v) {
        base_lo_[v] = bm_.model.vars[v].lower;
        base_hi_[v] = bm_.model.vars[v].upper;
    }

    double profit_sum = 0.0;
    for (int k = 2; k <= inst_.n() - 1; ++k) profit_sum += inst_.profit(k);

    Node root;
    root.id = next_id_++;
    root.est = profit_sum;
    plunge_ = root;

    bool limit_hit = false;
    while (true) {
        std::optional<Node> node;
        if (plunge_) {
            node = std::move(plunge_);
            plunge_.reset();
        } else {
            while (!open_.empty()) {
                if (open_.top().est <= lb_ + cfg_.integrality_tol * std::max(1.0, std::abs(lb_))) {
                    open_.pop();  // cannot improve
                    continue;
                }
                node = open_.top();
                open_.pop();
                break;
            }
        }
        if (!node) break;
        if (nodes_processed_ >= cfg_.node_limit || elapsed() >= cfg_.time_limit_s) {
            // the popped node is still open; account for its bound
            limit_hit = true;
            plunge_ = std::move(node);
            break;
        }

        apply_node(*node);
        LpStatus st = lp_.solve();
        ++nodes_processed_;
        if (st == LpStatus::IterLimit) throw EngineError("relaxation iteration limit hit");
        if (st == LpStatus::Infeasible) continue;

        double obj = lp_.objective();
        if (gap_closed(obj)) continue;

        // cutting-plane rounds at fractional optima
        bool pruned = false;
        for (int round = 0; with_cuts_ && round < cfg_.cut_rounds_per_node; ++round) {
            auto [var, value] = pick_branch_var(lp_.point());
            (void)value;
            if (var == -1) break;  // integral: no separation at integral points
            if (separation_round(lp_.point()) == 0) break;
            st = lp_.solve();
            if (st == LpStatus::IterLimit) throw EngineError("relaxation iteration limit hit");
            if (st == LpStatus::Infeasible) {
                pruned = true;
                break;
            }
            obj = lp_.objective();
            if (gap_closed(obj)) {
                pruned = true;
                break;
            }
        }
        if (pruned) continue;

        auto [var, value] = pick_branch_var(lp_.point());
        if (var == -1) {
            if (!try_incumbent(lp_.point(), obj))
                throw EngineError("integral relaxation point failed feasibility check");
            continue;
        }

        const double cur_lo = applied_.count(var) ? applied_[var].first : base_lo_[var];
        const double cur_hi = applied_.count(var) ? applied_[var].second : base_hi_[var];
        Node down, up;
        down.id = next_id_++;
        up.id = next_id_++;
        down.est = up.est = obj;
        down.path = node->path;
        up.path = node->path;
        down.path.push_back({var, cur_lo, std::floor(value)});
        up.path.push_back({var, std::ceil(value), cur_hi});

        const double frac = value - std::floor(value);
        if (frac >= 0.5) {
            plunge_ = std::move(up);
            open_.push(std::move(down));
        } else {
            plunge_ = std::move(down);
            open_.push(std::move(up));
        }
    }

    res.nodes = nodes_processed_;
    res.wall_s = elapsed();
    res.cuts = counters_;
    res.lp_pivots = lp_.iterations();
    if (incumbent_) {
        res.best = incumbent_;
        res.profit = lb_;
    }
    if (!limit_hit) {
        res.status = incumbent_ ? Status::Opt : Status::Infs;
        res.bound = incumbent_ ? lb_ : 0.0;
        res.gap_pct = 0.0;
    } else {
        const double ub = open_bound();
        res.bound = ub;
        if (incumbent_) {
            res.status = Status::NoOpt;
            res.gap_pct = ub > 1e-9 ? 100.0 * (ub - lb_) / std::abs(ub) : 0.0;
        } else {
            res.status = Status::NoSols;
            res.gap_pct = 0.0;
        }
    }
    return res;
}

}  // namespace

SolveResult solve(const Instance &inst, const SolverConfig &config) {
    const auto t0 = std::chrono::steady_clock::now();
    BuiltModel bm = build_compact(inst);
    if (config.preprocessing) {
        const Fixings fix = preprocess(inst);
        if (fix.mandatory_unreachable) {
            SolveResult res;
            res.status = Status::Infs;
            res.nodes = 0;
            res.wall_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            return res;
        }
        for (int k : fix.nodes) bm.model.vars[bm.vmap.node_y(k)].upper = 0.0;
        for (auto [i, j] : fix.arcs) bm.model.vars[bm.vmap.arc_x(i, j)].upper = 0.0;
    }
    Search search(inst, config, std::move(bm), /*with_cuts=*/config.families != 0);
    return search.run();
}

SolveResult solve_mixed(const Instance &inst, const SolverConfig &config) {
    Search search(inst, config, build_mixed(inst), /*with_cuts=*/false);
    return search.run();
}

}  // namespace engine
}  // namespace topstmin

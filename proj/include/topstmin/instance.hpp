#ifndef TOPSTMIN_INSTANCE_HPP
#define TOPSTMIN_INSTANCE_HPP

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace topstmin {

/// Tolerance used for all route duration vs. time budget comparisons.
inline constexpr double kFeasEps = 1e-6;

struct Coord {
    double x = 0.0;
    double y = 0.0;
};

inline double euclid(const Coord &a, const Coord &b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

using Arc = std::pair<int, int>;

enum class Variant { P, PL };

inline const char *variant_name(Variant v) { return v == Variant::P ? "P" : "PL"; }

/// A routing instance on a directed graph. Node 1 is the source, node n the
/// destination, nodes 2..n-1 are the customers. Immutable after construction.
class Instance {
public:
    /// Build from Euclidean coordinates; travel times are exact point distances.
    static Instance from_coords(int m, double t_max, std::vector<Coord> coords,
                                std::vector<double> profits, std::vector<double> services,
                                std::vector<int> mandatory, std::vector<Arc> physical,
                                std::vector<Arc> logical, Variant variant);

    /// Build from an explicit travel time matrix (row-major, (n+1)^2, 1-based).
    static Instance from_matrix(int n, int m, double t_max, std::vector<double> travel,
                                std::vector<double> profits, std::vector<double> services,
                                std::vector<int> mandatory, std::vector<Arc> physical,
                                std::vector<Arc> logical, Variant variant,
                                bool exact_time = false);

    int n() const { return n_; }
    int m() const { return m_; }
    double t_max() const { return t_max_; }
    int num_customers() const { return n_ - 2; }
    int source() const { return 1; }
    int destination() const { return n_; }
    bool is_customer(int k) const { return k >= 2 && k <= n_ - 1; }

    double profit(int k) const { return profit_[k]; }
    double service(int k) const { return service_[k]; }
    double travel(int i, int j) const { return travel_[i * (n_ + 1) + j]; }

    /// True when (i,j) is a structurally traversable arc: i in {1} u customers,
    /// j in customers u {n}, i != j.
    bool traversable(int i, int j) const {
        return i != j && i >= 1 && i < n_ && j >= 2 && j <= n_ && !(i == 1 && j == 1);
    }
    /// True when (i,j) carries a physical incompatibility.
    bool forbidden(int i, int j) const { return forbidden_[i * (n_ + 1) + j] != 0; }
    /// Traversable and not physically incompatible.
    bool allowed(int i, int j) const { return traversable(i, j) && !forbidden(i, j); }

    const std::vector<int> &mandatory() const { return mandatory_; }
    bool is_mandatory(int k) const { return mandatory_mask_[k] != 0; }
    const std::vector<Arc> &physical() const { return physical_; }
    /// Unordered logical incompatibility pairs, stored with first < second.
    const std::vector<Arc> &logical() const { return logical_; }
    bool logically_incompatible(int i, int j) const {
        return logical_mask_[i * (n_ + 1) + j] != 0;
    }
    /// Customers logically incompatible with k (ascending).
    const std::vector<int> &conflicts_of(int k) const { return conflict_adj_[k]; }

    Variant variant() const { return variant_; }
    bool has_coords() const { return coords_.has_value(); }
    const Coord &coord(int k) const { return (*coords_)[k]; }

    /// When set, duration comparisons are exact instead of eps-tolerant.
    bool exact_time() const { return exact_time_; }
    bool within_budget(double duration) const {
        return exact_time_ ? duration <= t_max_ : duration <= t_max_ + kFeasEps;
    }

private:
    Instance() = default;
    void finalize();

    int n_ = 0;
    int m_ = 0;
    double t_max_ = 0.0;
    std::optional<std::vector<Coord>> coords_;
    std::vector<double> profit_;
    std::vector<double> service_;
    std::vector<double> travel_;
    std::vector<int> mandatory_;
    std::vector<Arc> physical_;
    std::vector<Arc> logical_;
    Variant variant_ = Variant::P;
    bool exact_time_ = false;

    std::vector<char> forbidden_;
    std::vector<char> logical_mask_;
    std::vector<char> mandatory_mask_;
    std::vector<std::vector<int>> conflict_adj_;
};

class RouteError : public std::runtime_error {
public:
    explicit RouteError(const std::string &what) : std::runtime_error(what) {}
};

/// Sum of arc travel times plus customer service times along `nodes`.
/// Throws RouteError on unknown node ids or arcs missing from the graph
/// (a physically incompatible arc is still summable; it is reported as a
/// violation by check_solution, not as an error here).
double route_duration(const Instance &inst, const std::vector<int> &nodes);

/// A source-to-destination node sequence with its cached duration.
struct Route {
    std::vector<int> nodes;
    double duration = 0.0;

    static Route of(const Instance &inst, std::vector<int> nodes);
    int length() const { return static_cast<int>(nodes.size()); }
    bool empty_route() const { return nodes.size() == 2; }
};

struct Solution {
    std::vector<Route> routes;
    double profit = 0.0;

    /// Profit counts each visited customer once, regardless of revisits.
    static Solution of(const Instance &inst, std::vector<Route> routes);
};

struct Violation {
    enum class Kind {
        DurationExceeded,  // route, value
        MandatoryMissing,  // node
        Revisit,           // node
        PhysicalArc,       // arc (i,j)
        LogicalPair,       // pair (i,j)
        BadEndpoint,       // route
    };
    Kind kind;
    int route = -1;
    int i = 0;
    int j = 0;
    double value = 0.0;

    std::string to_string() const;
};

struct FeasibilityReport {
    std::vector<Violation> violations;
    bool feasible() const { return violations.empty(); }
};

/// Checks every solution invariant; violations are data, not errors.
/// Expects exactly m routes (enforced by Solution builders and the CLI).
FeasibilityReport check_solution(const Instance &inst, const Solution &sol);

}  // namespace topstmin

#endif

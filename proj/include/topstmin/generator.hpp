#ifndef TOPSTMIN_GENERATOR_HPP
#define TOPSTMIN_GENERATOR_HPP

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "topstmin/instance.hpp"

namespace topstmin {
namespace forge {

/// Deterministic splittable generator so emitted instances are byte-stable
/// across platforms and standard library versions.
class Rng {
public:
    explicit Rng(uint64_t seed) : state_(seed) {}
    uint64_t next() {
        state_ += 0x9E3779B97F4A7C15ull;
        uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

private:
    uint64_t state_;
};

enum class MandatoryMethod { Scattered, Clustered };      // sm / cm
enum class PhysicalMethod { ClusterBased, DegreeBased };  // cpi / dpi
enum class LogicalMethod { None, Farthest, Nearest };     // -- / fli / nli

struct GenScheme {
    MandatoryMethod mandatory = MandatoryMethod::Scattered;
    PhysicalMethod physical = PhysicalMethod::ClusterBased;
    LogicalMethod logical = LogicalMethod::None;
    double mandatory_fraction = 0.05;
    double arc_removal_fraction = 0.20;
    int cluster_count = 3;
    double logical_fraction = 0.05;
    double service_share = 0.5;  // of m * t_max
    double tmax_stretch = 1.5;
    uint64_t seed = 0;

    Variant variant() const {
        return logical == LogicalMethod::None ? Variant::P : Variant::PL;
    }
    /// Ids like "sm-cpi", "cm-dpi-fli". The seed is not part of the id.
    static GenScheme from_id(const std::string &id);
    std::string id() const;
    /// The twelve method combinations (four physical-only, eight with logical).
    static std::vector<std::string> all_ids();
};

class GenError : public std::runtime_error {
public:
    explicit GenError(const std::string &what) : std::runtime_error(what) {}
};

/// Number of removed directed arcs over the complete digraph on n nodes,
/// rounded down to an even count so removals stay bidirectional.
int removed_arc_target(int n, double fraction);

/// floor(fraction * customers + 1/2) mandatory nodes.
int mandatory_target(int customers, double fraction);

/// Greedy plus pairwise-swap selection maximizing (Scattered) or minimizing
/// (Clustered) the sum of pairwise distances. Deterministic; requires a
/// positive target size.
std::vector<int> select_mandatory(const Instance &inst, MandatoryMethod method,
                                  double fraction);

/// Lloyd iterations with a deterministic farthest-spread initialization.
/// Returns one cluster index per input point.
std::vector<int> kmeans_clusters(const std::vector<Coord> &points, int c);

struct ClusterAssignment {
    std::vector<int> membership;                 // customer index -> cluster
    std::vector<std::vector<char>> incompatible; // c x c, symmetric, zero diagonal
};

/// Cluster-pair incompatibilities drawn uniformly (probability one half per
/// unordered pair, ascending order) from the scheme seed.
ClusterAssignment assign_clusters(const Instance &inst, int c, Rng &rng);

/// Node pair with i < j over 1..n; selections keep (i,j) and (j,i) together.
using NodePair = std::pair<int, int>;

struct ClusterScore {
    long violations = 0;  // directed arcs joining incompatible clusters
    int balance = 0;      // max per-cluster directed arc count (intra or total)
    bool operator<(const ClusterScore &o) const {
        return violations != o.violations ? violations < o.violations : balance < o.balance;
    }
    bool operator==(const ClusterScore &o) const {
        return violations == o.violations && balance == o.balance;
    }
};

ClusterScore score_cluster_selection(const Instance &inst, const ClusterAssignment &clusters,
                                     const std::vector<NodePair> &kept);
int max_out_degree(int n, const std::vector<NodePair> &kept);

/// Keeps `kept_pairs` node pairs minimizing (violations, balance)
/// lexicographically: greedy construction plus pairwise exchange. Pairs in
/// `forced` are always kept (the pipeline reserves the depot pairs of the
/// mandatory nodes so routes to them always exist).
std::vector<NodePair> select_arcs_cluster_based(const Instance &inst,
                                                const ClusterAssignment &clusters,
                                                int kept_pairs,
                                                const std::vector<NodePair> &forced = {});

/// Keeps `kept_pairs` node pairs minimizing the maximum node degree.
std::vector<NodePair> select_arcs_degree_based(const Instance &inst, int kept_pairs,
                                               const std::vector<NodePair> &forced = {});

/// Restores any missing depot pair of a mandatory node into `kept` and checks
/// the direct route fits the stretched budget. Returns the number of pairs
/// restored; throws GenError when a mandatory node cannot fit at all.
int ensure_mandatory_access(const Instance &base, const std::vector<int> &mandatory,
                            const std::vector<double> &service, double new_t_max,
                            std::set<NodePair> &kept);

/// Per customer, its ceil(fraction * (customers - 1)) farthest (Farthest) or
/// nearest (Nearest) peers; deduplicated unordered pairs, distance ties by id.
std::vector<Arc> select_logical(const Instance &inst, LogicalMethod method, double fraction);

struct ServiceTimes {
    std::vector<double> service;  // 1-based, zero at source/destination
    double new_t_max = 0.0;
};

/// Distributes share * m * t_max across the customers proportionally to
/// seeded uniform draws and stretches the budget.
ServiceTimes assign_service_times(const Instance &inst, double share, double stretch, Rng &rng);

struct GenResult {
    Instance instance;
    bool repaired = false;          // depot arcs of mandatory nodes restored
    bool conflict_warning = false;  // mandatory conflicts may force more than m routes
};

/// Full pipeline: mandatory, physical, logical, service times, feasibility
/// guard. Throws GenError when a mandatory node cannot be made reachable.
GenResult generate(const Instance &base, const GenScheme &scheme);

}  // namespace forge
}  // namespace topstmin

#endif

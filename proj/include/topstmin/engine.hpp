#ifndef TOPSTMIN_ENGINE_HPP
#define TOPSTMIN_ENGINE_HPP

#include <array>
#include <limits>
#include <optional>
#include <string>

#include "topstmin/cuts.hpp"
#include "topstmin/formulations.hpp"
#include "topstmin/instance.hpp"

namespace topstmin {
namespace engine {

enum class Status { Opt, NoOpt, Infs, NoSols };
const char *status_name(Status s);

inline constexpr unsigned kFamilyRI = 1u << 0;
inline constexpr unsigned kFamilySI = 1u << 1;
inline constexpr unsigned kFamilySPI = 1u << 2;
inline constexpr unsigned kFamilySEC = 1u << 3;
inline constexpr unsigned kFamilyLI = 1u << 4;
inline constexpr unsigned kAllFamilies =
    kFamilyRI | kFamilySI | kFamilySPI | kFamilySEC | kFamilyLI;

/// Parses "all", "none" or a comma list of RI,SI,SPI,SEC,LI.
unsigned parse_families(const std::string &spec);
std::string families_to_string(unsigned families);

struct SolverConfig {
    double time_limit_s = 7200.0;
    long node_limit = std::numeric_limits<long>::max();
    double eps_feas = kFeasEps;
    double support_tol = kSupportTol;
    double viol_tol = kViolTol;
    double integrality_tol = kIntegralityEps;
    int max_routes = 5000;
    int max_cycles = 20000;
    int cut_rounds_per_node = 20;
    int cuts_per_round = 200;
    int max_total_cuts = 20000;
    int helsgaun_iterations = 50;
    unsigned families = kAllFamilies;
    bool preprocessing = true;
    bool deterministic = true;

    bool family_enabled(unsigned bit) const { return (families & bit) != 0; }
};

/// `key = value` text mirroring SolverConfig; unknown keys are rejected.
SolverConfig parse_config(const std::string &text);
SolverConfig read_config_file(const std::string &path);

/// Per-family counters in RI, SI, SPI, SEC, LI order.
using CutCounters = std::array<long, 5>;

struct SolveResult {
    Status status = Status::NoSols;
    std::optional<Solution> best;
    double profit = 0.0;
    double bound = 0.0;
    double gap_pct = 0.0;
    long nodes = 0;
    double wall_s = 0.0;
    CutCounters cuts{0, 0, 0, 0, 0};
    long lp_pivots = 0;

    long cuts_total() const { return cuts[0] + cuts[1] + cuts[2] + cuts[3] + cuts[4]; }
};

/// Variable fixings justified before the search starts.
struct Fixings {
    std::vector<int> nodes;  // customers no feasible route can contain
    std::vector<Arc> arcs;   // arcs no feasible route can traverse
    bool mandatory_unreachable = false;
};

/// A customer is unreachable when its direct closure already busts the budget
/// or it lacks allowed depot arcs; an arc when the cheapest route through it
/// does. Variant PL also bans arcs joining logically incompatible customers.
Fixings preprocess(const Instance &inst);

/// Branch and bound over the single-index model with cutting-plane rounds at
/// fractional nodes.
SolveResult solve(const Instance &inst, const SolverConfig &config = {});

/// Plain branch and bound over the route-indexed model (no cut separation,
/// no preprocessing): the reference baseline.
SolveResult solve_mixed(const Instance &inst, const SolverConfig &config = {});

class EngineError : public std::runtime_error {
public:
    explicit EngineError(const std::string &what) : std::runtime_error(what) {}
};

}  // namespace engine
}  // namespace topstmin

#endif

#ifndef TOPSTMIN_BENCH_HPP
#define TOPSTMIN_BENCH_HPP

#include <optional>
#include <string>
#include <vector>

#include "topstmin/engine.hpp"
#include "topstmin/generator.hpp"
#include "topstmin/instance.hpp"

namespace topstmin {
namespace bench {

/// profits and aggregate values are printed with two decimals
std::string format_fixed(double v, int decimals = 2);

std::string result_csv_header();
std::string result_csv_row(const std::string &instance_id, const Instance &inst,
                           const engine::SolveResult &res);

/// Solution file: `profit <value>` then one route per line of node ids.
std::string write_solution(const Solution &sol);
Solution parse_solution(const Instance &inst, const std::string &text);

enum class SizeGroup { Small, Medium, Large };
const char *size_group_name(SizeGroup g);
/// Node-count thresholds follow the benchmark set shapes.
SizeGroup size_group_of(int n);

struct BenchRecord {
    std::string id;
    SizeGroup group = SizeGroup::Small;
    std::string scheme;  // "sm-cpi-fli" style tag, "-" when unknown
    Variant variant = Variant::P;
    int m = 0;
    engine::SolveResult result;
};

/// Scheme tag recovered from a file name of the form <base>.<scheme>.<seed>.topstmin.
std::string scheme_tag_from_name(const std::string &filename);

struct BenchOptions {
    engine::SolverConfig config;
    int jobs = 1;
};

/// Solves every instance file in the list; records come back sorted by id.
std::vector<BenchRecord> run_bench(const std::vector<std::string> &paths,
                                   const BenchOptions &opts);

/// Per-instance rows followed by aggregate rows per size group and method
/// tag (the method families each partition the instances of a group).
/// `blank_times` replaces wall-clock fields with a stable placeholder so two
/// deterministic runs emit identical bytes.
std::string bench_csv(const std::vector<BenchRecord> &records, bool blank_times = false);

struct ManifestJob {
    std::string base_path;
    std::string scheme_id;
    uint64_t seed = 0;
    std::string out_path;
    forge::GenScheme scheme;  // id plus any overrides
};

/// One job per line: `<base> <scheme-id> <seed> <out>`variant overrides append
/// as `key=value` tokens (mandatory_fraction, arc_removal_fraction,
/// logical_fraction, cluster_count, service_share, tmax_stretch).
std::vector<ManifestJob> parse_manifest(const std::string &text);

struct GenerateSummary {
    std::string out_path;
    bool ok = false;
    std::string error;
    int n = 0;
    long arcs = 0;  // complete-digraph arc count
    int mandatory = 0;
    long removed = 0;
    long logical = 0;
    bool repaired = false;
    bool conflict_warning = false;
};

GenerateSummary run_generate_job(const ManifestJob &job);
std::string generate_csv_header();
std::string generate_csv_row(const GenerateSummary &s);

}  // namespace bench
}  // namespace topstmin

#endif

#include "topstmin/bench.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <map>
#include <sstream>

#include "topstmin/instance_io.hpp"

namespace topstmin {
namespace bench {

std::string format_fixed(double v, int decimals) {
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(decimals);
    os << v;
    return os.str();
}

std::string result_csv_header() {
    return "instance,variant,status,profit,bound,gap_pct,nodes,time_s,"
           "cuts_RI,cuts_SI,cuts_SPI,cuts_SEC,cuts_LI";
}

std::string result_csv_row(const std::string &instance_id, const Instance &inst,
                           const engine::SolveResult &res) {
    std::ostringstream os;
    os << instance_id << "," << variant_name(inst.variant()) << ","
       << engine::status_name(res.status) << ",";
    if (res.best) os << format_fixed(res.profit);
    os << ",";
    if (res.status == engine::Status::Opt || res.status == engine::Status::NoOpt)
        os << format_fixed(res.bound);
    os << ",";
    if (res.status == engine::Status::NoOpt) os << format_fixed(res.gap_pct);
    os << "," << res.nodes << "," << format_fixed(res.wall_s) << "," << res.cuts[0] << ","
       << res.cuts[1] << "," << res.cuts[2] << "," << res.cuts[3] << "," << res.cuts[4];
    return os.str();
}

std::string write_solution(const Solution &sol) {
    std::ostringstream os;
    os << "profit " << format_fixed(sol.profit) << "\n";
    for (const Route &r : sol.routes) {
        for (size_t i = 0; i < r.nodes.size(); ++i) os << (i ? " " : "") << r.nodes[i];
        os << "\n";
    }
    return os.str();
}

Solution parse_solution(const Instance &inst, const std::string &text) {
    std::stringstream ss(text);
    std::string line;
    if (!std::getline(ss, line))
        throw ParseError("empty solution file");
    {
        std::stringstream hs(line);
        std::string key;
        double value;
        if (!(hs >> key >> value) || key != "profit")
            throw ParseError("solution file must start with 'profit <value>'");
    }
    std::vector<Route> routes;
    while (std::getline(ss, line)) {
        std::stringstream ls(line);
        std::vector<int> nodes;
        int v;
        while (ls >> v) nodes.push_back(v);
        if (nodes.empty()) continue;
        routes.push_back(Route::of(inst, std::move(nodes)));
    }
    if (static_cast<int>(routes.size()) != inst.m())
        throw ParseError("solution has " + std::to_string(routes.size()) +
                         " routes, instance expects " + std::to_string(inst.m()));
    return Solution::of(inst, std::move(routes));
}

const char *size_group_name(SizeGroup g) {
    switch (g) {
        case SizeGroup::Small: return "SMALL";
        case SizeGroup::Medium: return "MEDIUM";
        case SizeGroup::Large: return "LARGE";
    }
    return "?";
}

SizeGroup size_group_of(int n) {
    if (n <= 33) return SizeGroup::Small;
    if (n <= 66) return SizeGroup::Medium;
    return SizeGroup::Large;
}

std::string scheme_tag_from_name(const std::string &filename) {
    // <base>.<scheme>.<seed>.topstmin
    std::string stem = filename;
    const auto slash = stem.find_last_of('/');
    if (slash != std::string::npos) stem = stem.substr(slash + 1);
    std::vector<std::string> parts;
    std::stringstream ss(stem);
    std::string tok;
    while (std::getline(ss, tok, '.')) parts.push_back(tok);
    for (const std::string &p : parts) {
        if (p.rfind("sm-", 0) == 0 || p.rfind("cm-", 0) == 0) return p;
    }
    return "-";
}

std::vector<BenchRecord> run_bench(const std::vector<std::string> &paths,
                                   const BenchOptions &opts) {
    std::vector<std::string> sorted = paths;
    std::sort(sorted.begin(), sorted.end());

    auto solve_one = [&](const std::string &path) {
        BenchRecord rec;
        rec.id = path;
        const auto slash = rec.id.find_last_of('/');
        if (slash != std::string::npos) rec.id = rec.id.substr(slash + 1);
        const Instance inst = read_instance_file(path);
        rec.group = size_group_of(inst.n());
        rec.scheme = scheme_tag_from_name(path);
        rec.variant = inst.variant();
        rec.m = inst.m();
        rec.result = engine::solve(inst, opts.config);
        return rec;
    };

    std::vector<BenchRecord> records;
    if (opts.jobs <= 1) {
        for (const std::string &p : sorted) records.push_back(solve_one(p));
    } else {
        std::vector<std::future<BenchRecord>> futs;
        size_t next = 0;
        while (next < sorted.size() || !futs.empty()) {
            while (next < sorted.size() &&
                   futs.size() < static_cast<size_t>(opts.jobs)) {
                futs.push_back(std::async(std::launch::async, solve_one, sorted[next]));
                ++next;
            }
            records.push_back(futs.front().get());
            futs.erase(futs.begin());
        }
    }
    std::sort(records.begin(), records.end(),
              [](const BenchRecord &a, const BenchRecord &b) { return a.id < b.id; });
    return records;
}

namespace {

struct Aggregate {
    long count = 0;
    long opt = 0;
    double opt_cpu = 0.0;
    double opt_nodes = 0.0;
    long unsolved = 0;
    double unsolved_gap = 0.0;

    void add(const engine::SolveResult &r) {
        ++count;
        if (r.status == engine::Status::Opt) {
            ++opt;
            opt_cpu += r.wall_s;
            opt_nodes += static_cast<double>(r.nodes);
        } else if (r.status == engine::Status::NoOpt) {
            ++unsolved;
            unsolved_gap += r.gap_pct;
        }
    }
    std::string row(const std::string &group, const std::string &tag, bool blank_times) const {
        std::ostringstream os;
        os << group << "," << tag << "," << count << "," << opt << ",";
        if (opt > 0) os << (blank_times ? "-" : format_fixed(opt_cpu / opt)) << ","
                        << format_fixed(opt_nodes / opt);
        else os << ",";
        os << ",";
        if (unsolved > 0) os << format_fixed(unsolved_gap / unsolved);
        return os.str();
    }
};

std::string method_tag(const std::string &scheme, int part) {
    // scheme "sm-cpi[-fli]": part 0 mandatory, 1 physical, 2 logical
    std::vector<std::string> toks;
    std::stringstream ss(scheme);
    std::string tok;
    while (std::getline(ss, tok, '-')) toks.push_back(tok);
    if (part < static_cast<int>(toks.size())) return toks[part];
    return "";
}

}  // namespace

std::string bench_csv(const std::vector<BenchRecord> &records, bool blank_times) {
    std::ostringstream os;
    os << result_csv_header() << "\n";
    // one CSV block of per-instance rows; ids already sorted
    for (const BenchRecord &rec : records) {
        std::ostringstream row;
        row << rec.id << "," << variant_name(rec.variant) << ","
            << engine::status_name(rec.result.status) << ",";
        if (rec.result.best) row << format_fixed(rec.result.profit);
        row << ",";
        if (rec.result.status == engine::Status::Opt ||
            rec.result.status == engine::Status::NoOpt)
            row << format_fixed(rec.result.bound);
        row << ",";
        if (rec.result.status == engine::Status::NoOpt) row << format_fixed(rec.result.gap_pct);
        row << "," << rec.result.nodes << ","
            << (blank_times ? "-" : format_fixed(rec.result.wall_s)) << ","
            << rec.result.cuts[0] << "," << rec.result.cuts[1] << "," << rec.result.cuts[2]
            << "," << rec.result.cuts[3] << "," << rec.result.cuts[4];
        os << row.str() << "\n";
    }

    // aggregates: per size group, ALL plus each method tag partition
    os << "\ngroup,tag,count,opt,mean_cpu_s,mean_nodes,mean_gap_pct\n";
    std::map<std::pair<std::string, std::string>, Aggregate> agg;
    std::vector<std::pair<std::string, std::string>> order;
    auto touch = [&](const std::string &g, const std::string &t) -> Aggregate & {
        const auto key = std::make_pair(g, t);
        if (!agg.count(key)) order.push_back(key);
        return agg[key];
    };
    for (const BenchRecord &rec : records) {
        const std::string group = size_group_name(rec.group);
        touch(group, "ALL").add(rec.result);
        for (int part = 0; part < 3; ++part) {
            const std::string tag = method_tag(rec.scheme, part);
            if (!tag.empty()) touch(group, tag).add(rec.result);
        }
    }
    std::sort(order.begin(), order.end());
    for (const auto &key : order)
        os << agg[key].row(key.first, key.second, blank_times) << "\n";
    return os.str();
}

std::vector<ManifestJob> parse_manifest(const std::string &text) {
    std::vector<ManifestJob> jobs;
    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::stringstream ls(line);
        ManifestJob job;
        if (!(ls >> job.base_path)) continue;
        if (!(ls >> job.scheme_id >> job.seed >> job.out_path))
            throw std::invalid_argument("manifest line " + std::to_string(lineno) +
                                        ": expected '<base> <scheme> <seed> <out>'");
        job.scheme = forge::GenScheme::from_id(job.scheme_id);
        job.scheme.seed = job.seed;
        std::string extra;
        while (ls >> extra) {
            const auto eq = extra.find('=');
            if (eq == std::string::npos)
                throw std::invalid_argument("manifest line " + std::to_string(lineno) +
                                            ": bad override '" + extra + "'");
            const std::string key = extra.substr(0, eq);
            const double value = std::stod(extra.substr(eq + 1));
            if (key == "mandatory_fraction") job.scheme.mandatory_fraction = value;
            else if (key == "arc_removal_fraction") job.scheme.arc_removal_fraction = value;
            else if (key == "logical_fraction") job.scheme.logical_fraction = value;
            else if (key == "cluster_count") job.scheme.cluster_count = static_cast<int>(value);
            else if (key == "service_share") job.scheme.service_share = value;
            else if (key == "tmax_stretch") job.scheme.tmax_stretch = value;
            else
                throw std::invalid_argument("manifest line " + std::to_string(lineno) +
                                            ": unknown override '" + key + "'");
        }
        jobs.push_back(std::move(job));
    }
    return jobs;
}

GenerateSummary run_generate_job(const ManifestJob &job) {
    GenerateSummary s;
    s.out_path = job.out_path;
    try {
        const Instance base = read_instance_file(job.base_path);
        const forge::GenResult gen = forge::generate(base, job.scheme);
        write_instance_file(gen.instance, job.out_path);
        s.ok = true;
        s.n = gen.instance.n();
        s.arcs = static_cast<long>(gen.instance.n()) * (gen.instance.n() - 1);
        s.mandatory = static_cast<int>(gen.instance.mandatory().size());
        s.removed = static_cast<long>(gen.instance.physical().size());
        s.logical = static_cast<long>(gen.instance.logical().size());
        s.repaired = gen.repaired;
        s.conflict_warning = gen.conflict_warning;
    } catch (const std::exception &e) {
        s.ok = false;
        s.error = e.what();
    }
    return s;
}

std::string generate_csv_header() {
    return "out,status,n,arcs,mandatory,physical,logical,repaired,conflict_warning";
}

std::string generate_csv_row(const GenerateSummary &s) {
    std::ostringstream os;
    os << s.out_path << ",";
    if (!s.ok) {
        std::string msg = s.error;
        std::replace(msg.begin(), msg.end(), ',', ';');
        os << "error: " << msg << ",,,,,,,";
        return os.str();
    }
    os << "ok," << s.n << "," << s.arcs << "," << s.mandatory << "," << s.removed << ","
       << s.logical << "," << (s.repaired ? 1 : 0) << "," << (s.conflict_warning ? 1 : 0);
    return os.str();
}

}  // namespace bench
}  // namespace topstmin

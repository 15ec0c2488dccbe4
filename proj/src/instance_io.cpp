#include "topstmin/instance_io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>
#include <vector>

namespace topstmin {

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
    std::vector<std::string_view> out;
    size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
        size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
        if (j > i) out.push_back(line.substr(i, j - i));
        i = j;
    }
    return out;
}

double parse_real(std::string_view tok, const std::string &ctx) {
    double v = 0.0;
    auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || p != tok.data() + tok.size())
        throw ParseError("bad number '" + std::string(tok) + "' in " + ctx);
    return v;
}

int parse_int(std::string_view tok, const std::string &ctx) {
    int v = 0;
    auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || p != tok.data() + tok.size())
        throw ParseError("bad integer '" + std::string(tok) + "' in " + ctx);
    return v;
}

struct Lines {
    std::vector<std::string_view> lines;
    size_t pos = 0;
    bool done() const { return pos >= lines.size(); }
    std::string_view peek() const { return lines[pos]; }
    std::string_view next() { return lines[pos++]; }
};

Lines split_lines(std::string_view text) {
    Lines ls;
    size_t start = 0;
    while (start <= text.size()) {
        size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        ls.lines.push_back(text.substr(start, end - start));
        if (end == text.size()) break;
        start = end + 1;
    }
    // drop trailing blank lines
    while (!ls.lines.empty() && split_ws(ls.lines.back()).empty()) ls.lines.pop_back();
    return ls;
}

double header_value(Lines &ls, const std::string &key) {
    if (ls.done()) throw ParseError("missing header line '" + key + "'");
    auto toks = split_ws(ls.next());
    if (toks.size() != 2 || toks[0] != key)
        throw ParseError("malformed header, expected '" + key + " <value>'");
    return parse_real(toks[1], "header " + key);
}

bool is_section(std::string_view line, std::string_view name) {
    auto toks = split_ws(line);
    return toks.size() == 1 && toks[0] == name;
}

}  // namespace

Instance parse_instance(std::string_view text, const ParseOptions &opts) {
    Lines ls = split_lines(text);

    const double n_real = header_value(ls, "n");
    const double m_real = header_value(ls, "m");
    const double t_max = header_value(ls, "tmax");
    const int n = static_cast<int>(n_real);
    const int m = static_cast<int>(m_real);
    if (n != n_real || n < 2) throw ParseError("n must be an integer >= 2");
    if (m != m_real || m < 1) throw ParseError("m must be an integer >= 1");

    std::vector<Coord> coords(n + 1);
    std::vector<double> profits(n + 1, 0.0), services(n + 1, 0.0);
    for (int k = 1; k <= n; ++k) {
        if (ls.done()) throw ParseError("expected " + std::to_string(n) + " node lines");
        auto toks = split_ws(ls.next());
        const std::string ctx = "node line " + std::to_string(k);
        if (toks.size() != 3 && toks.size() != 4)
            throw ParseError(ctx + " must have 3 or 4 fields");
        coords[k] = {parse_real(toks[0], ctx), parse_real(toks[1], ctx)};
        profits[k] = parse_real(toks[2], ctx);
        services[k] = toks.size() == 4 ? parse_real(toks[3], ctx) : 0.0;
    }

    std::vector<int> mandatory;
    std::vector<Arc> physical, logical;
    Variant variant = Variant::P;

    bool seen_mand = false, seen_phys = false, seen_log = false, seen_var = false;
    while (!ls.done()) {
        auto line = ls.next();
        if (split_ws(line).empty()) continue;
        if (is_section(line, "MANDATORY")) {
            if (seen_mand) throw ParseError("duplicate MANDATORY section");
            seen_mand = true;
            if (!ls.done() && !is_section(ls.peek(), "PHYSICAL") &&
                !is_section(ls.peek(), "LOGICAL") && !is_section(ls.peek(), "VARIANT")) {
                for (auto tok : split_ws(ls.next())) mandatory.push_back(parse_int(tok, "MANDATORY"));
            }
        } else if (is_section(line, "PHYSICAL")) {
            if (seen_phys) throw ParseError("duplicate PHYSICAL section");
            seen_phys = true;
            while (!ls.done() && !is_section(ls.peek(), "LOGICAL") &&
                   !is_section(ls.peek(), "VARIANT") && !is_section(ls.peek(), "MANDATORY")) {
                auto toks = split_ws(ls.next());
                if (toks.empty()) continue;
                if (toks.size() != 2) throw ParseError("PHYSICAL line must be '<i> <j>'");
                physical.push_back({parse_int(toks[0], "PHYSICAL"), parse_int(toks[1], "PHYSICAL")});
            }
        } else if (is_section(line, "LOGICAL")) {
            if (seen_log) throw ParseError("duplicate LOGICAL section");
            seen_log = true;
            while (!ls.done() && !is_section(ls.peek(), "VARIANT") &&
                   !is_section(ls.peek(), "PHYSICAL") && !is_section(ls.peek(), "MANDATORY")) {
                auto toks = split_ws(ls.next());
                if (toks.empty()) continue;
                if (toks.size() != 2) throw ParseError("LOGICAL line must be '<i> <j>'");
                int i = parse_int(toks[0], "LOGICAL"), j = parse_int(toks[1], "LOGICAL");
                if (i >= j) throw ParseError("LOGICAL pair must satisfy i < j");
                logical.push_back({i, j});
            }
        } else if (is_section(line, "VARIANT")) {
            if (seen_var) throw ParseError("duplicate VARIANT section");
            seen_var = true;
            if (ls.done()) throw ParseError("VARIANT section missing value");
            auto toks = split_ws(ls.next());
            if (toks.size() != 1 || (toks[0] != "P" && toks[0] != "PL"))
                throw ParseError("VARIANT must be P or PL");
            variant = toks[0] == "P" ? Variant::P : Variant::PL;
        } else {
            throw ParseError("unexpected content: '" + std::string(line) + "'");
        }
    }

    for (auto [i, j] : physical)
        if (i < 1 || i > n || j < 1 || j > n || i == j)
            throw ParseError("PHYSICAL arc (" + std::to_string(i) + "," + std::to_string(j) +
                             ") out of range");
    {
        std::set<Arc> seen;
        for (auto a : physical)
            if (!seen.insert(a).second)
                throw ParseError("duplicate PHYSICAL arc (" + std::to_string(a.first) + "," +
                                 std::to_string(a.second) + ")");
        if (opts.require_symmetric_physical)
            for (auto [i, j] : physical)
                if (!seen.count({j, i}))
                    throw ParseError("PHYSICAL section is not symmetric: missing (" +
                                     std::to_string(j) + "," + std::to_string(i) + ")");
    }
    for (int k : mandatory)
        if (k < 2 || k > n - 1)
            throw ParseError("MANDATORY id " + std::to_string(k) + " is not a customer");
    {
        std::set<int> seen;
        for (int k : mandatory)
            if (!seen.insert(k).second)
                throw ParseError("duplicate MANDATORY id " + std::to_string(k));
    }
    for (auto [i, j] : logical)
        if (i < 2 || j > n - 1)
            throw ParseError("LOGICAL pair (" + std::to_string(i) + "," + std::to_string(j) +
                             ") must join customers");
    if (!logical.empty() && variant == Variant::P && !seen_var)
        variant = Variant::PL;  // legacy convenience: section implies variant when unstated

    try {
        return Instance::from_coords(m, t_max, std::move(coords), std::move(profits),
                                     std::move(services), std::move(mandatory),
                                     std::move(physical), std::move(logical), variant);
    } catch (const std::invalid_argument &e) {
        throw ParseError(e.what());
    }
}

std::string format_double(double v) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
    (void)ec;
    return std::string(buf, p);
}

std::string write_instance(const Instance &inst) {
    if (!inst.has_coords())
        throw std::invalid_argument("cannot serialize an instance without coordinates");
    std::ostringstream os;
    os << "n " << inst.n() << "\n";
    os << "m " << inst.m() << "\n";
    os << "tmax " << format_double(inst.t_max()) << "\n";
    for (int k = 1; k <= inst.n(); ++k) {
        const Coord &c = inst.coord(k);
        os << format_double(c.x) << " " << format_double(c.y) << " "
           << format_double(inst.profit(k)) << " " << format_double(inst.service(k)) << "\n";
    }
    os << "MANDATORY\n";
    for (size_t i = 0; i < inst.mandatory().size(); ++i)
        os << (i ? " " : "") << inst.mandatory()[i];
    os << "\n";
    os << "PHYSICAL\n";
    for (auto [i, j] : inst.physical()) os << i << " " << j << "\n";
    os << "LOGICAL\n";
    for (auto [i, j] : inst.logical()) os << i << " " << j << "\n";
    os << "VARIANT\n" << variant_name(inst.variant()) << "\n";
    return os.str();
}

Instance read_instance_file(const std::string &path, const ParseOptions &opts) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_instance(buf.str(), opts);
}

void write_instance_file(const Instance &inst, const std::string &path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << write_instance(inst);
}

}  // namespace topstmin

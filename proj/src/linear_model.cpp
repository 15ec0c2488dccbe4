#include "topstmin/linear_model.hpp"

#include <sstream>

namespace topstmin {

int LinearModel::add_var(VarKind kind, double lower, double upper, double obj,
                         std::string name) {
    if (lower > upper) throw std::invalid_argument("variable bounds crossed: " + name);
    vars.push_back({kind, lower, upper, std::move(name)});
    objective.push_back(obj);
    return static_cast<int>(vars.size()) - 1;
}

void LinearModel::add_row(Terms terms, Rel rel, double rhs, RowTag tag, std::string name) {
    for (auto [v, c] : terms) {
        (void)c;
        if (v < 0 || v >= num_vars())
            throw std::invalid_argument("row references unknown variable: " + name);
    }
    rows.push_back({std::move(terms), rel, rhs, tag, std::move(name)});
}

std::string LinearModel::to_lp_text() const {
    std::ostringstream os;
    os << "Maximize\n obj:";
    bool first = true;
    for (int v = 0; v < num_vars(); ++v) {
        if (objective[v] == 0.0) continue;
        os << (first ? " " : " + ") << objective[v] << " " << vars[v].name;
        first = false;
    }
    if (first) os << " 0";
    os << "\nSubject To\n";
    for (const ModelRow &row : rows) {
        os << " " << row.name << ":";
        for (auto [v, c] : row.terms) {
            os << (c >= 0 ? " + " : " - ") << (c >= 0 ? c : -c) << " " << vars[v].name;
        }
        os << (row.rel == Rel::LE ? " <= " : row.rel == Rel::EQ ? " = " : " >= ") << row.rhs
           << "\n";
    }
    os << "Bounds\n";
    for (const ModelVar &v : vars) os << " " << v.lower << " <= " << v.name << " <= " << v.upper << "\n";
    os << "Generals\n";
    for (const ModelVar &v : vars)
        if (v.kind != VarKind::Continuous) os << " " << v.name << "\n";
    os << "End\n";
    return os.str();
}

void VariableMap::insert(Key key, int id) {
    const uint64_t p = pack(key.role, key.i, key.j, key.r);
    if (!ids_.emplace(p, id).second)
        throw std::invalid_argument("duplicate variable tag");
    if (id != static_cast<int>(keys_.size()))
        throw std::invalid_argument("variable ids must be inserted in order");
    keys_.push_back(key);
}

std::optional<int> VariableMap::try_id(VarRole role, int i, int j, int r) const {
    auto it = ids_.find(pack(role, i, j, r));
    if (it == ids_.end()) return std::nullopt;
    return it->second;
}

int VariableMap::id(VarRole role, int i, int j, int r) const {
    auto v = try_id(role, i, j, r);
    if (!v) throw std::out_of_range("variable tag not present in map");
    return *v;
}

const VariableMap::Key &VariableMap::key_of(int id) const { return keys_.at(id); }

}  // namespace topstmin

#ifndef TOPSTMIN_LINEAR_MODEL_HPP
#define TOPSTMIN_LINEAR_MODEL_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace topstmin {

enum class VarKind { Binary, Integer, Continuous };
enum class Rel { LE, EQ, GE };

enum class RowTag { Structural, CutRI, CutSI, CutSPI, CutSEC, CutLI };

struct ModelVar {
    VarKind kind = VarKind::Continuous;
    double lower = 0.0;
    double upper = 0.0;
    std::string name;
};

using Terms = std::vector<std::pair<int, double>>;

struct ModelRow {
    Terms terms;
    Rel rel = Rel::LE;
    double rhs = 0.0;
    RowTag tag = RowTag::Structural;
    std::string name;
};

/// Solver-agnostic MILP: maximize obj subject to rows and variable bounds.
struct LinearModel {
    std::vector<ModelVar> vars;
    std::vector<double> objective;  // maximize
    std::vector<ModelRow> rows;

    int add_var(VarKind kind, double lower, double upper, double obj, std::string name);
    void add_row(Terms terms, Rel rel, double rhs, RowTag tag, std::string name);
    int num_vars() const { return static_cast<int>(vars.size()); }
    int num_rows() const { return static_cast<int>(rows.size()); }

    /// Human-readable LP-style dump for external cross-checking.
    std::string to_lp_text() const;
};

/// Semantic roles of model variables. r == 0 for the single-index model.
enum class VarRole : uint8_t { ArcX = 1, NodeY, FlowZ, RouteV, PairU };

/// Bidirectional lookup between (role, i, j, r) tags and variable ids.
class VariableMap {
public:
    struct Key {
        VarRole role;
        int i = 0, j = 0, r = 0;
    };

    void insert(Key key, int id);
    std::optional<int> try_id(VarRole role, int i, int j = 0, int r = 0) const;
    int id(VarRole role, int i, int j = 0, int r = 0) const;
    const Key &key_of(int id) const;
    int size() const { return static_cast<int>(keys_.size()); }

    int arc_x(int i, int j, int r = 0) const { return id(VarRole::ArcX, i, j, r); }
    int node_y(int k, int r = 0) const { return id(VarRole::NodeY, k, 0, r); }
    int flow_z(int i, int j, int r = 0) const { return id(VarRole::FlowZ, i, j, r); }
    int route_v(int k) const { return id(VarRole::RouteV, k); }
    int pair_u(int i, int j) const { return id(VarRole::PairU, i, j); }
    std::optional<int> try_arc_x(int i, int j, int r = 0) const {
        return try_id(VarRole::ArcX, i, j, r);
    }

private:
    static uint64_t pack(VarRole role, int i, int j, int r) {
        return (uint64_t(uint8_t(role)) << 56) | (uint64_t(uint16_t(i)) << 40) |
               (uint64_t(uint16_t(j)) << 24) | uint64_t(uint16_t(r));
    }
    std::unordered_map<uint64_t, int> ids_;
    std::vector<Key> keys_;
};

}  // namespace topstmin

#endif

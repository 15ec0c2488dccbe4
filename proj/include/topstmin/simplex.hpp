#ifndef TOPSTMIN_SIMPLEX_HPP
#define TOPSTMIN_SIMPLEX_HPP

#include <vector>

#include "topstmin/linear_model.hpp"

namespace topstmin {

enum class LpStatus { Optimal, Infeasible, IterLimit };

struct LpRow {
    Terms terms;
    Rel rel = Rel::LE;
    double rhs = 0.0;
};

/// Contract the search engine relies on. Any LP implementation that can load
/// a model, re-solve after row appends and bound changes, and report an exact
/// relaxation optimum can be swapped in behind this interface.
class LpBackend {
public:
    virtual ~LpBackend() = default;
    virtual void load(const LinearModel &model) = 0;
    virtual void add_rows(const std::vector<LpRow> &rows) = 0;
    virtual void set_var_bounds(int var, double lower, double upper) = 0;
    virtual LpStatus solve() = 0;
    virtual double objective() const = 0;  // in the model's (maximize) sense
    virtual const std::vector<double> &point() const = 0;
    virtual int num_rows() const = 0;
    virtual long iterations() const = 0;
};

/// Dense bounded-variable dual simplex over the full tableau.
///
/// The initial all-slack basis is dual feasible by placing each structural
/// variable at the bound matching its reduced-cost sign, so the relaxation is
/// solved by dual pivots alone. Appended rows enter with their slack basic and
/// bound tightenings shift nonbasic values in place, which keeps the basis
/// warm across cut rounds and down-branches.
class DenseSimplex final : public LpBackend {
public:
    void load(const LinearModel &model) override;
    void add_rows(const std::vector<LpRow> &rows) override;
    void set_var_bounds(int var, double lower, double upper) override;
    LpStatus solve() override;
    double objective() const override { return -min_objective_; }
    const std::vector<double> &point() const override { return point_; }
    int num_rows() const override { return nrows_; }
    long iterations() const override { return total_pivots_; }

private:
    enum class State : char { Basic, AtLower, AtUpper, Fixed };

    int nstruct_ = 0;  // structural variables
    int nrows_ = 0;    // rows == slack variables
    int ncols_ = 0;    // nstruct_ + nrows_

    std::vector<double> cost_;  // minimization costs, structural part = -objective
    std::vector<double> lower_, upper_;
    std::vector<double> rhs_;
    std::vector<Terms> original_rows_;  // structural coefficients only

    std::vector<double> tab_;  // nrows_ x ncols_, row-major: B^-1 A
    std::vector<double> xval_;
    std::vector<double> dual_;   // reduced costs
    std::vector<int> basis_;     // row -> column
    std::vector<State> state_;

    bool basis_valid_ = false;
    bool dual_clean_ = true;
    long total_pivots_ = 0;

    double min_objective_ = 0.0;
    std::vector<double> point_;

    double &tab(int r, int c) { return tab_[static_cast<size_t>(r) * ncols_ + c]; }
    double tab(int r, int c) const { return tab_[static_cast<size_t>(r) * ncols_ + c]; }

    void push_slack(Rel rel);
    void reset_basis();
    void refresh_primal();
    void refresh_duals();
    LpStatus dual_iterate();
    void pivot(int row, int col, State leave_state);
    void snap_nonbasic(int col);
    void finish();
};

}  // namespace topstmin

#endif

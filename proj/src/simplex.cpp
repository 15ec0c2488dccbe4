#include "topstmin/simplex.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>

namespace topstmin {

namespace {

constexpr double kPrimalTol = 1e-7;
constexpr double kDualTol = 1e-9;
constexpr double kPivotTol = 1e-9;
constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

void DenseSimplex::push_slack(Rel rel) {
    cost_.push_back(0.0);
    switch (rel) {
        case Rel::LE:
            lower_.push_back(0.0);
            upper_.push_back(kInf);
            break;
        case Rel::GE:
            lower_.push_back(-kInf);
            upper_.push_back(0.0);
            break;
        case Rel::EQ:
            lower_.push_back(0.0);
            upper_.push_back(0.0);
            break;
    }
}

void DenseSimplex::load(const LinearModel &model) {
    nstruct_ = model.num_vars();
    cost_.assign(nstruct_, 0.0);
    lower_.assign(nstruct_, 0.0);
    upper_.assign(nstruct_, 0.0);
    for (int v = 0; v < nstruct_; ++v) {
        cost_[v] = -model.objective[v];  // internal sense: minimize
        lower_[v] = model.vars[v].lower;
        upper_[v] = model.vars[v].upper;
    }
    rhs_.clear();
    original_rows_.clear();
    nrows_ = 0;
    ncols_ = nstruct_;
    for (const ModelRow &row : model.rows) {
        push_slack(row.rel);
        rhs_.push_back(row.rhs);
        original_rows_.push_back(row.terms);
        ++nrows_;
        ++ncols_;
    }
    tab_.clear();
    basis_valid_ = false;
    dual_clean_ = true;
    total_pivots_ = 0;
}

void DenseSimplex::add_rows(const std::vector<LpRow> &rows) {
    if (rows.empty()) return;
    const int old_rows = nrows_, old_cols = ncols_;
    const int add = static_cast<int>(rows.size());

    for (const LpRow &row : rows) {
        push_slack(row.rel);
        rhs_.push_back(row.rhs);
        original_rows_.push_back(row.terms);
    }
    nrows_ += add;
    ncols_ += add;

    if (!basis_valid_) return;  // next solve rebuilds from scratch

    std::vector<double> grown(static_cast<size_t>(nrows_) * ncols_, 0.0);
    for (int r = 0; r < old_rows; ++r)
        std::copy(tab_.begin() + static_cast<size_t>(r) * old_cols,
                  tab_.begin() + static_cast<size_t>(r) * old_cols + old_cols,
                  grown.begin() + static_cast<size_t>(r) * ncols_);
    tab_ = std::move(grown);

    xval_.resize(ncols_, 0.0);
    dual_.resize(ncols_, 0.0);
    for (int k = 0; k < add; ++k) {
        const int r = old_rows + k;
        const int slack = old_cols + k;
        basis_.push_back(slack);
        state_.push_back(State::Basic);
        double *row = &tab_[static_cast<size_t>(r) * ncols_];
        for (auto [v, c] : original_rows_[r]) row[v] += c;
        row[slack] = 1.0;
        // express in the current basis; basic columns are unit columns, so a
        // single elimination pass per row suffices
        for (int i = 0; i < old_rows; ++i) {
            const double beta = row[basis_[i]];
            if (std::abs(beta) < 1e-13) continue;
            const double *ti = &tab_[static_cast<size_t>(i) * ncols_];
            for (int c = 0; c < ncols_; ++c) row[c] -= beta * ti[c];
            row[basis_[i]] = 0.0;
        }
        double sval = rhs_[r];
        for (auto [v, c] : original_rows_[r]) sval -= c * xval_[v];
        xval_[slack] = sval;
        dual_[slack] = 0.0;
    }
}

void DenseSimplex::set_var_bounds(int var, double lo, double hi) {
    assert(var >= 0 && var < nstruct_);
    lower_[var] = lo;
    upper_[var] = hi;
    if (!basis_valid_) return;
    if (state_[var] == State::Basic) return;  // violations caught at next solve
    snap_nonbasic(var);
}

void DenseSimplex::snap_nonbasic(int col) {
    const double lo = lower_[col], hi = upper_[col];
    double target;
    State st;
    if (lo == hi) {
        target = lo;
        st = State::Fixed;
    } else if (state_[col] == State::AtUpper && hi < kInf) {
        target = hi;
        st = State::AtUpper;
    } else if (lo > -kInf) {
        target = lo;
        st = State::AtLower;
    } else {
        target = hi;
        st = State::AtUpper;
    }
    const double delta = target - xval_[col];
    if (delta != 0.0) {
        for (int r = 0; r < nrows_; ++r) xval_[basis_[r]] -= tab(r, col) * delta;
        xval_[col] = target;
    }
    state_[col] = st;
    if (st == State::AtLower && dual_[col] < -kDualTol) dual_clean_ = false;
    if (st == State::AtUpper && dual_[col] > kDualTol) dual_clean_ = false;
}

void DenseSimplex::reset_basis() {
    basis_.resize(nrows_);
    state_.assign(ncols_, State::AtLower);
    for (int r = 0; r < nrows_; ++r) {
        const int slack = nstruct_ + r;
        basis_[r] = slack;
        state_[slack] = State::Basic;
    }
    for (int v = 0; v < nstruct_; ++v) {
        if (lower_[v] == upper_[v]) {
            state_[v] = State::Fixed;
        } else if (cost_[v] > kDualTol) {
            assert(lower_[v] > -kInf);
            state_[v] = State::AtLower;
        } else if (cost_[v] < -kDualTol) {
            assert(upper_[v] < kInf);
            state_[v] = State::AtUpper;
        } else {
            state_[v] = lower_[v] > -kInf ? State::AtLower : State::AtUpper;
        }
    }
    tab_.assign(static_cast<size_t>(nrows_) * ncols_, 0.0);
    for (int r = 0; r < nrows_; ++r) {
        double *row = &tab_[static_cast<size_t>(r) * ncols_];
        for (auto [v, c] : original_rows_[r]) row[v] += c;
        row[nstruct_ + r] = 1.0;
    }
    basis_valid_ = true;
    dual_clean_ = true;
    refresh_duals();
}

void DenseSimplex::refresh_primal() {
    xval_.assign(ncols_, 0.0);
    for (int c = 0; c < ncols_; ++c) {
        if (state_[c] == State::Basic) continue;
        xval_[c] = (state_[c] == State::AtUpper) ? upper_[c] : lower_[c];
    }
    // x_B = B^-1 b - sum over nonbasic j of (B^-1 A_j) x_j; the slack block of
    // the tableau holds B^-1 explicitly.
    for (int r = 0; r < nrows_; ++r) {
        const double *tr = &tab_[static_cast<size_t>(r) * ncols_];
        double val = 0.0;
        for (int k = 0; k < nrows_; ++k)
            if (tr[nstruct_ + k] != 0.0) val += tr[nstruct_ + k] * rhs_[k];
        for (int c = 0; c < ncols_; ++c)
            if (xval_[c] != 0.0) val -= tr[c] * xval_[c];
        xval_[basis_[r]] = val;
    }
}

void DenseSimplex::refresh_duals() {
    dual_ = cost_;
    for (int r = 0; r < nrows_; ++r) {
        const double cb = cost_[basis_[r]];
        if (cb == 0.0) continue;
        const double *tr = &tab_[static_cast<size_t>(r) * ncols_];
        for (int c = 0; c < ncols_; ++c) dual_[c] -= cb * tr[c];
    }
    for (int r = 0; r < nrows_; ++r) dual_[basis_[r]] = 0.0;
}

LpStatus DenseSimplex::solve() {
    if (!basis_valid_ || !dual_clean_) reset_basis();
    refresh_primal();
    const LpStatus st = dual_iterate();
    if (st == LpStatus::Optimal) finish();
    return st;
}

LpStatus DenseSimplex::dual_iterate() {
    const long max_iters = 20000 + 60L * (nrows_ + ncols_);
    long degen_run = 0;
    bool bland = false;

    for (long iter = 0; iter < max_iters; ++iter) {
        // leaving row: largest bound violation among basic variables
        int row = -1;
        double worst = kPrimalTol;
        bool above = false;
        for (int r = 0; r < nrows_; ++r) {
            const int b = basis_[r];
            const double v = xval_[b];
            const double below_by = lower_[b] - v;
            const double above_by = v - upper_[b];
            const double viol = std::max(below_by, above_by);
            if (viol > worst) {
                worst = viol;
                row = r;
                above = above_by > below_by;
                if (bland) break;  // first violated row wins
            }
        }
        if (row == -1) return LpStatus::Optimal;

        const int leaving = basis_[row];
        const double *tr = &tab_[static_cast<size_t>(row) * ncols_];
        int enter = -1;
        double best_ratio = 0.0, best_alpha = 0.0;
        for (int c = 0; c < ncols_; ++c) {
            if (state_[c] == State::Basic || state_[c] == State::Fixed) continue;
            const double a = tr[c];
            if (std::abs(a) <= kPivotTol) continue;
            bool eligible;
            if (!above) {
                // basic below its lower bound: it must increase; dual step <= 0
                eligible = (state_[c] == State::AtLower && a < 0.0) ||
                           (state_[c] == State::AtUpper && a > 0.0);
            } else {
                eligible = (state_[c] == State::AtLower && a > 0.0) ||
                           (state_[c] == State::AtUpper && a < 0.0);
            }
            if (!eligible) continue;
            const double ratio = dual_[c] / a;
            if (enter == -1) {
                enter = c;
                best_ratio = ratio;
                best_alpha = std::abs(a);
                if (bland) break;  // first eligible wins
                continue;
            }
            const bool better =
                !above ? (ratio > best_ratio + 1e-12) : (ratio < best_ratio - 1e-12);
            const bool tied = std::abs(ratio - best_ratio) <= 1e-12;
            if (better || (tied && std::abs(a) > best_alpha)) {
                enter = c;
                best_ratio = ratio;
                best_alpha = std::abs(a);
            }
        }
        if (enter == -1) return LpStatus::Infeasible;

        const State leave_state = lower_[leaving] == upper_[leaving]
                                      ? State::Fixed
                                      : (above ? State::AtUpper : State::AtLower);
        pivot(row, enter, leave_state);
        ++total_pivots_;
        if (worst <= 1e-9 || std::abs(best_ratio) <= 1e-11) {
            if (++degen_run > 200) {
                bland = true;
                // stalled numerics: rebuild the tableau from the original
                // rows under the current basis assignment
                if (degen_run == 400) {
                    refresh_primal();
                    refresh_duals();
                }
            }
        } else {
            degen_run = 0;
            bland = false;
        }
    }
    return LpStatus::IterLimit;
}

void DenseSimplex::pivot(int row, int col, State leave_state) {
    const int leaving = basis_[row];
    const double alpha = tab(row, col);
    assert(std::abs(alpha) > 0.0);

    // primal step
    const double beta = leave_state == State::AtUpper ? upper_[leaving] : lower_[leaving];
    const double delta = (xval_[leaving] - beta) / alpha;
    if (delta != 0.0) {
        for (int r = 0; r < nrows_; ++r) {
            if (r == row) continue;
            const double a = tab(r, col);
            if (a != 0.0) xval_[basis_[r]] -= delta * a;
        }
    }
    const double enter_val = xval_[col] + delta;
    xval_[leaving] = beta;
    xval_[col] = enter_val;

    // dual step
    const double theta = dual_[col] / alpha;
    if (theta != 0.0) {
        const double *tr = &tab_[static_cast<size_t>(row) * ncols_];
        for (int c = 0; c < ncols_; ++c) dual_[c] -= theta * tr[c];
    }
    dual_[col] = 0.0;
    dual_[leaving] = -theta;

    // tableau elimination
    double *pr = &tab_[static_cast<size_t>(row) * ncols_];
    const double inv = 1.0 / alpha;
    for (int c = 0; c < ncols_; ++c) pr[c] *= inv;
    pr[col] = 1.0;
    for (int r = 0; r < nrows_; ++r) {
        if (r == row) continue;
        double *other = &tab_[static_cast<size_t>(r) * ncols_];
        const double f = other[col];
        if (f == 0.0) continue;
        for (int c = 0; c < ncols_; ++c) other[c] -= f * pr[c];
        other[col] = 0.0;
    }

    basis_[row] = col;
    state_[col] = State::Basic;
    state_[leaving] = leave_state;
}

void DenseSimplex::finish() {
    point_.assign(nstruct_, 0.0);
    double obj = 0.0;
    for (int c = 0; c < ncols_; ++c) {
        if (c < nstruct_) point_[c] = xval_[c];
        if (cost_[c] != 0.0) obj += cost_[c] * xval_[c];
    }
    min_objective_ = obj;
}

}  // namespace topstmin

#ifndef TOPSTMIN_FORMULATIONS_HPP
#define TOPSTMIN_FORMULATIONS_HPP

#include <vector>

#include "topstmin/instance.hpp"
#include "topstmin/linear_model.hpp"

namespace topstmin {

struct BuiltModel {
    LinearModel model;
    VariableMap vmap;
};

/// Default tolerance for calling a relaxation value integral.
inline constexpr double kIntegralityEps = 1e-6;

/// Single-index flow model: arc variables x_ij, visit variables y_k and
/// accumulated-time variables z_ij, with the x(1,n) arc allowed to carry up
/// to m units. Variant PL adds route-identifier variables v_k and conflict
/// indicators u_ij per logical pair.
BuiltModel build_compact(const Instance &inst);

/// Route-indexed model: x_ijr / y_kr / z_ijr for r = 1..m. Variant PL adds
/// the per-route conflict-neighbourhood rows over y.
BuiltModel build_mixed(const Instance &inst);

class ExtractionError : public std::runtime_error {
public:
    explicit ExtractionError(const std::string &what) : std::runtime_error(what) {}
};

/// Reconstructs the m routes from an integral assignment by following unit
/// arcs out of the source; the multi-unit x(1,n) value contributes that many
/// empty routes. Throws ExtractionError when the arc values do not decompose
/// into m source-to-destination paths.
Solution extract_solution(const Instance &inst, const VariableMap &vmap,
                          const std::vector<double> &assignment,
                          double int_eps = kIntegralityEps);

}  // namespace topstmin

#endif

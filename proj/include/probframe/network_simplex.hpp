#pragma once

#include "probframe/numerics.hpp"

#include <cstddef>
#include <span>

namespace probframe {

/// Optimal solution of a balanced transportation problem together with the
/// dual potentials that certify it.
struct TransportationSolution {
    Matrix flow;          // supply.size() x demand.size()
    Vector row_potential;  // u
    Vector col_potential;  // v
    double objective = 0.0;
    /// max |c_ij - u_i - v_j| over basic cells (complementary slackness).
    double slackness_residual = 0.0;
    /// max(0, -min_ij (c_ij - u_i - v_j)) (dual feasibility violation).
    double dual_infeasibility = 0.0;
    std::size_t pivots = 0;
};

/// Primal network simplex on the bipartite transportation graph, started from
/// the north-west corner basis. Entering cells follow Dantzig's rule while
/// pivots make progress and Bland's rule across runs of degenerate pivots.
/// Costs may be of any sign. supply and demand must be positive and carry the
/// same total mass.
TransportationSolution solve_transportation(std::span<const double> supply,
                                            std::span<const double> demand,
                                            const Matrix& cost);

}  // namespace probframe

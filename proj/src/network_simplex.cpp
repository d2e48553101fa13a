#include "probframe/network_simplex.hpp"

#include "probframe/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

namespace probframe {

namespace {

struct Cell {
    std::size_t row;
    std::size_t col;
};

// Basis of a transportation problem: a spanning tree on m + n nodes (rows
// first, then columns) with exactly m + n - 1 basic cells.
class Basis {
public:
    Basis(std::size_t m, std::size_t n) : m_(m), n_(n), adj_(m + n) {}

    std::vector<Cell> cells;

    void rebuild() {
        for (auto& a : adj_) {
            a.clear();
        }
        for (std::size_t e = 0; e < cells.size(); ++e) {
            adj_[cells[e].row].push_back(e);
            adj_[m_ + cells[e].col].push_back(e);
        }
    }

    std::size_t other_end(std::size_t e, std::size_t node) const {
        const Cell& c = cells[e];
        return node == c.row ? m_ + c.col : c.row;
    }

    void potentials(const Matrix& cost, Vector& u, Vector& v) const {
        std::vector<char> seen(m_ + n_, 0);
        std::vector<std::size_t> stack{0};
        seen[0] = 1;
        u.assign(m_, 0.0);
        v.assign(n_, 0.0);
        while (!stack.empty()) {
            const std::size_t node = stack.back();
            stack.pop_back();
            for (std::size_t e : adj_[node]) {
                const std::size_t next = other_end(e, node);
                if (seen[next]) {
                    continue;
                }
                seen[next] = 1;
                const Cell& c = cells[e];
                if (next >= m_) {
                    v[c.col] = cost(c.row, c.col) - u[c.row];
                } else {
                    u[c.row] = cost(c.row, c.col) - v[c.col];
                }
                stack.push_back(next);
            }
        }
        require(std::all_of(seen.begin(), seen.end(), [](char s) { return s != 0; }),
                ErrorCode::Unsupported, "transportation basis is not a spanning tree");
    }

    // Basic cells on the tree path from node `from` to node `to`, in order.
    std::vector<std::size_t> path(std::size_t from, std::size_t to) const {
        constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
        std::vector<std::size_t> via(m_ + n_, kNone);
        std::vector<char> seen(m_ + n_, 0);
        std::vector<std::size_t> queue{from};
        seen[from] = 1;
        for (std::size_t head = 0; head < queue.size() && !seen[to]; ++head) {
            const std::size_t node = queue[head];
            for (std::size_t e : adj_[node]) {
                const std::size_t next = other_end(e, node);
                if (!seen[next]) {
                    seen[next] = 1;
                    via[next] = e;
                    queue.push_back(next);
                }
            }
        }
        std::vector<std::size_t> edges;
        for (std::size_t node = to; node != from;) {
            const std::size_t e = via[node];
            edges.push_back(e);
            node = other_end(e, node);
        }
        std::reverse(edges.begin(), edges.end());
        return edges;
    }

private:
    std::size_t m_;
    std::size_t n_;
    std::vector<std::vector<std::size_t>> adj_;
};

}  // namespace

TransportationSolution solve_transportation(std::span<const double> supply,
                                            std::span<const double> demand,
                                            const Matrix& cost) {
    const std::size_t m = supply.size();
    const std::size_t n = demand.size();
    require(m > 0 && n > 0, ErrorCode::DimMismatch, "empty transportation problem");
    require(cost.rows() == m && cost.cols() == n, ErrorCode::DimMismatch,
            "cost matrix does not match supply and demand");
    require(cost.all_finite(), ErrorCode::Unsupported, "transport costs must be finite");

    Matrix flow(m, n);
    Basis basis(m, n);

    // North-west corner start; ties advance the row so the basis keeps
    // m + n - 1 cells even when degenerate.
    {
        Vector s(supply.begin(), supply.end());
        Vector d(demand.begin(), demand.end());
        std::size_t i = 0;
        std::size_t j = 0;
        while (true) {
            const double x = std::min(s[i], d[j]);
            flow(i, j) = x;
            s[i] -= x;
            d[j] -= x;
            basis.cells.push_back({i, j});
            if (i == m - 1 && j == n - 1) {
                break;
            }
            if (i == m - 1) {
                ++j;
            } else if (j == n - 1) {
                ++i;
            } else if (s[i] <= d[j]) {
                ++i;
            } else {
                ++j;
            }
        }
    }

    const double scale = std::max(1.0, max_abs(cost));
    const double eps = 1e-12 * scale;
    const std::size_t max_pivots = 50 * m * n + 10000;

    std::vector<char> is_basic(m * n, 0);
    for (const Cell& c : basis.cells) {
        is_basic[c.row * n + c.col] = 1;
    }

    TransportationSolution out;
    Vector u;
    Vector v;
    bool bland = false;

    for (;;) {
        basis.rebuild();
        basis.potentials(cost, u, v);

        std::size_t enter = m * n;
        double best = -eps;
        for (std::size_t i = 0; i < m && !(bland && enter < m * n); ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                if (is_basic[i * n + j]) {
                    continue;
                }
                const double r = cost(i, j) - u[i] - v[j];
                if (r < best) {
                    enter = i * n + j;
                    if (bland) {
                        break;
                    }
                    best = r;
                }
            }
        }
        if (enter == m * n) {
            break;
        }
        require(out.pivots < max_pivots, ErrorCode::Unsupported,
                "transportation simplex exceeded its pivot budget");
        ++out.pivots;

        const std::size_t ei = enter / n;
        const std::size_t ej = enter % n;
        // Cycle: entering cell (+), then the tree path from column ej back to
        // row ei with alternating signs starting at (-).
        const std::vector<std::size_t> cycle = basis.path(m + ej, ei);

        // Leaving cell: smallest flow among (-) cells, ties to the lowest index.
        double theta = std::numeric_limits<double>::infinity();
        std::size_t leave = 0;
        std::size_t leave_idx = m * n;
        for (std::size_t k = 0; k < cycle.size(); k += 2) {
            const Cell& c = basis.cells[cycle[k]];
            const double f = flow(c.row, c.col);
            const std::size_t idx = c.row * n + c.col;
            if (f < theta || (f == theta && idx < leave_idx)) {
                theta = f;
                leave = k;
                leave_idx = idx;
            }
        }

        for (std::size_t k = 0; k < cycle.size(); ++k) {
            const Cell& c = basis.cells[cycle[k]];
            if (k % 2 == 0) {
                flow(c.row, c.col) -= theta;
            } else {
                flow(c.row, c.col) += theta;
            }
        }
        const Cell gone = basis.cells[cycle[leave]];
        flow(gone.row, gone.col) = 0.0;
        flow(ei, ej) = theta;
        is_basic[gone.row * n + gone.col] = 0;
        is_basic[enter] = 1;
        basis.cells[cycle[leave]] = {ei, ej};

        bland = theta == 0.0;
    }

    out.flow = std::move(flow);
    out.row_potential = u;
    out.col_potential = v;
    double objective = 0.0;
    double infeasible = 0.0;
    double slack = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            objective += cost(i, j) * out.flow(i, j);
            const double r = cost(i, j) - u[i] - v[j];
            if (is_basic[i * n + j]) {
                slack = std::max(slack, std::abs(r));
            } else {
                infeasible = std::max(infeasible, -r);
            }
        }
    }
    out.objective = objective;
    out.slackness_residual = slack;
    out.dual_infeasibility = std::max(0.0, infeasible);
    return out;
}

}  // namespace probframe

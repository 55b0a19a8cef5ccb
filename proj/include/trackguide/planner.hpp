#ifndef TRACKGUIDE_PLANNER_HPP
#define TRACKGUIDE_PLANNER_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "trackguide/corridor.hpp"
#include "trackguide/curve.hpp"
#include "trackguide/errors.hpp"
#include "trackguide/geometry.hpp"
#include "trackguide/perception.hpp"

namespace trackguide {

/// Sampling grid shape: n rows spaced row_spacing apart ahead of the start,
/// m laterally even-spaced points per row inside the corridor minus a margin.
struct LatticeConfig {
    double horizon = 10.0;       // m of forward sampling distance
    double row_spacing = 1.0;    // m between rows
    int lateral_count = 5;       // points per row, odd so a center sample exists
    double lateral_margin = 0.11;  // m inset from the corridor boundary

    void validate() const {
        if (!(horizon > 0.0)) {
            throw std::invalid_argument("LatticeConfig: horizon must be > 0");
        }
        if (!(row_spacing > 0.0)) {
            throw std::invalid_argument("LatticeConfig: row_spacing must be > 0");
        }
        if (!(horizon / row_spacing >= 2.0)) {
            throw std::invalid_argument("LatticeConfig: horizon must cover >= 2 rows");
        }
        if (lateral_count < 3 || lateral_count % 2 == 0) {
            throw std::invalid_argument("LatticeConfig: lateral_count must be odd and >= 3");
        }
        if (!(lateral_margin >= 0.0)) {
            throw std::invalid_argument("LatticeConfig: lateral_margin must be >= 0");
        }
    }
};

/// Cost model parameters: obstacle cost k / d_col beyond d_safe, infinite at
/// or below d_safe, plus the terminal pull toward the corridor midline.
struct CostParams {
    double k = 1.0;               // obstacle cost scale
    double d_safe = 0.5;          // m, hard clearance floor
    double terminal_weight = 1.0;  // cost per meter of terminal lateral offset

    void validate() const {
        if (!(k > 0.0)) throw std::invalid_argument("CostParams: k must be > 0");
        if (!(d_safe > 0.0)) throw std::invalid_argument("CostParams: d_safe must be > 0");
        if (!(terminal_weight > 0.0)) {
            throw std::invalid_argument("CostParams: terminal_weight must be > 0");
        }
    }
};

/// One candidate waypoint in the DP grid.
struct LatticeNode {
    int row = 0;  // 0-based row index (row 0 is the nearest sampled row)
    int col = 0;  // 0-based, ordered by ascending lateral offset d
    FrenetPoint frenet{};
    Vec2 cartesian{};
    double value = std::numeric_limits<double>::infinity();  // min cost-to-go
    int successor = -1;  // chosen column in the next row; -1 in the last row
};

/// Row-major node grid; every row has the same number of columns.
struct Lattice {
    std::vector<std::vector<LatticeNode>> rows;

    bool empty() const { return rows.empty(); }
    std::size_t row_count() const { return rows.size(); }
    std::size_t col_count() const { return rows.empty() ? 0 : rows.front().size(); }
};

/// Planned path: the chosen waypoints (start plus one per row), a cubic
/// spline fit through them, and the yaw used for guidance.
struct PlanResult {
    std::vector<Vec2> waypoints;
    std::vector<FrenetPoint> frenet_waypoints;  // chosen node offsets, one per row
    Curve2D path;
    double command_yaw = 0.0;  // rad, body frame, at the lookahead station
    double total_cost = 0.0;
};

/// Euclidean distance cost between consecutive sampling points.
inline double cost_dis(const Vec2& p1, const Vec2& p2) { return distance(p1, p2); }

/// Obstacle cost at a sampling point: 0 with no obstacles; k / d_col while
/// the collision distance d_col (gap to the nearest obstacle's boundary)
/// exceeds d_safe; infinite at or below d_safe.
inline double cost_obs(const Vec2& point, const std::vector<ObstacleDetection>& obstacles,
                       const CostParams& params) {
    if (obstacles.empty()) return 0.0;
    double d_col = std::numeric_limits<double>::infinity();
    for (const ObstacleDetection& ob : obstacles) {
        d_col = std::min(d_col, distance(point, ob.position) - ob.radius);
    }
    if (d_col > params.d_safe) return params.k / d_col;
    return std::numeric_limits<double>::infinity();
}

/// Last-row cost: distance from the corridor midline, scaled.
inline double terminal_cost(const LatticeNode& node, const CostParams& params) {
    return params.terminal_weight * std::abs(node.frenet.d);
}

/// Sample the lattice inside the corridor. Row r (1-based) sits at arc length
/// start_s + r * row_spacing along the reference; rows beyond the reference
/// length are truncated. Each row spans d in [-(w - margin), +(w - margin)]
/// where w is the corridor half-width at that row.
/// Throws InfeasibleCorridorError where the corridor is narrower than twice
/// the lateral margin.
inline Lattice build_lattice(const LocalReference& reference, const LatticeConfig& config,
                             double start_s = 0.0) {
    config.validate();
    const int max_rows = static_cast<int>(std::floor(config.horizon / config.row_spacing + 1e-9));
    Lattice lattice;
    for (int r = 1; r <= max_rows; ++r) {
        const double s = start_s + r * config.row_spacing;
        if (s > reference.midline.total_length() + 1e-9) break;
        const double w = reference.corridor.at(s);
        const double usable = w - config.lateral_margin;
        if (usable < 0.0) {
            throw InfeasibleCorridorError(
                "build_lattice: corridor narrower than twice the lateral margin at row " +
                std::to_string(r));
        }
        std::vector<LatticeNode> row(static_cast<std::size_t>(config.lateral_count));
        for (int c = 0; c < config.lateral_count; ++c) {
            const double frac =
                static_cast<double>(c) / static_cast<double>(config.lateral_count - 1);
            const double d = -usable + 2.0 * usable * frac;
            LatticeNode& node = row[static_cast<std::size_t>(c)];
            node.row = r - 1;
            node.col = c;
            node.frenet = {s, d};
            node.cartesian = reference.midline.frenet_to_cartesian(node.frenet);
        }
        lattice.rows.push_back(std::move(row));
    }
    return lattice;
}

namespace detail {

/// Tie-break: prefer the candidate with smaller |d|, then smaller column.
inline bool better_choice(double cost, const LatticeNode& node, double best_cost,
                          const LatticeNode* best_node) {
    if (cost < best_cost) return true;
    if (cost > best_cost || best_node == nullptr) return false;
    const double ad = std::abs(node.frenet.d), bd = std::abs(best_node->frenet.d);
    if (ad < bd) return true;
    if (ad > bd) return false;
    return node.col < best_node->col;
}

}  // namespace detail

/// Dynamic-programming trajectory selection over the lattice.
///
/// Backward value iteration seeds the last row with the terminal cost and
/// propagates V(node) = min over next-row nodes of
/// [cost_dis(node, next) + cost_obs(next) + V(next)] with full bipartite
/// connectivity between consecutive rows. Forward extraction starts at the
/// body-frame origin (which pays the entry distance plus the first row's
/// obstacle cost) and follows stored successors. Obstacle cost is charged at
/// node entry, not along the connecting segment.
///
/// The fitted path is a cubic spline through start + chosen waypoints; the
/// command yaw is its heading at `yaw_lookahead` meters of arc (clamped to
/// the path end). Throws NoFeasiblePathError when every root-to-leaf path
/// has infinite cost.
inline PlanResult plan(const Vec2& start, Lattice& lattice,
                       const std::vector<ObstacleDetection>& obstacles,
                       const CostParams& params, double yaw_lookahead = 2.0) {
    params.validate();
    if (lattice.empty()) {
        throw std::invalid_argument("plan: empty lattice");
    }

    const std::size_t n_rows = lattice.row_count();
    // Obstacle cost is per node, independent of the incoming edge.
    std::vector<std::vector<double>> node_obs(n_rows);
    for (std::size_t r = 0; r < n_rows; ++r) {
        node_obs[r].reserve(lattice.rows[r].size());
        for (const LatticeNode& node : lattice.rows[r]) {
            node_obs[r].push_back(cost_obs(node.cartesian, obstacles, params));
        }
    }

    for (LatticeNode& node : lattice.rows[n_rows - 1]) {
        node.value = terminal_cost(node, params);
        node.successor = -1;
    }
    for (std::size_t r = n_rows - 1; r-- > 0;) {
        for (LatticeNode& node : lattice.rows[r]) {
            double best = std::numeric_limits<double>::infinity();
            const LatticeNode* best_next = nullptr;
            int best_idx = -1;
            for (std::size_t c = 0; c < lattice.rows[r + 1].size(); ++c) {
                const LatticeNode& next = lattice.rows[r + 1][c];
                const double cost =
                    cost_dis(node.cartesian, next.cartesian) + node_obs[r + 1][c] + next.value;
                if (detail::better_choice(cost, next, best, best_next)) {
                    best = cost;
                    best_next = &next;
                    best_idx = static_cast<int>(c);
                }
            }
            node.value = best;
            node.successor = best_idx;
        }
    }

    double total = std::numeric_limits<double>::infinity();
    const LatticeNode* entry = nullptr;
    for (std::size_t c = 0; c < lattice.rows[0].size(); ++c) {
        const LatticeNode& node = lattice.rows[0][c];
        const double cost = cost_dis(start, node.cartesian) + node_obs[0][c] + node.value;
        if (detail::better_choice(cost, node, total, entry)) {
            total = cost;
            entry = &node;
        }
    }
    if (entry == nullptr || !std::isfinite(total)) {
        throw NoFeasiblePathError("plan: every candidate path is blocked");
    }

    PlanResult result;
    result.total_cost = total;
    result.waypoints.push_back(start);
    const LatticeNode* node = entry;
    for (std::size_t r = 0; r < n_rows; ++r) {
        result.waypoints.push_back(node->cartesian);
        result.frenet_waypoints.push_back(node->frenet);
        if (node->successor < 0) break;
        node = &lattice.rows[r + 1][static_cast<std::size_t>(node->successor)];
    }

    result.path = Curve2D::fit(result.waypoints);
    const double station = std::min(yaw_lookahead, result.path.total_length());
    result.command_yaw = result.path.yaw_at(station);
    return result;
}

/// Heading profile of the planned path, sampled every 0.5 m (final station
/// included).
inline std::vector<std::pair<double, double>> path_yaw_profile(const PlanResult& result) {
    std::vector<std::pair<double, double>> profile;
    const double length = result.path.total_length();
    for (double s = 0.0; s < length; s += 0.5) {
        profile.emplace_back(s, result.path.yaw_at(s));
    }
    profile.emplace_back(length, result.path.yaw_at(length));
    return profile;
}

}  // namespace trackguide

#endif  // TRACKGUIDE_PLANNER_HPP

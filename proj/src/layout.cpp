#include "plexus/layout.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <unordered_map>
#include <vector>

#include "plexus/errors.hpp"

namespace plexus {

namespace {

// Unit direction from b to a and the clamped distance. Coincident points get
// a fixed +x direction so the sweep stays deterministic.
std::pair<Vec2, double> separation(const Vec2& a, const Vec2& b) {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    const double d = std::hypot(dx, dy);
    if (d == 0.0) return {Vec2{1.0, 0.0}, kMinDistance};
    return {Vec2{dx / d, dy / d}, std::max(d, kMinDistance)};
}

}  // namespace

void LayoutParams::validate() const {
    if (!(side > 0.0) || !std::isfinite(side)) throw ValidationError("layout side must be > 0");
    if (!(cooling > 0.0 && cooling < 1.0)) throw ValidationError("cooling must lie in (0, 1)");
    if (!(eps() > 0.0)) throw ValidationError("epsilon must be > 0");
    if (!(spring > 0.0) || !std::isfinite(spring)) throw ValidationError("spring constant must be > 0");
    if (!(t0() > 0.0) || !std::isfinite(t0())) throw ValidationError("initial temperature must be > 0");
}

double ideal_distance(const LayoutParams& params, std::size_t node_count) {
    const double n = static_cast<double>(std::max<std::size_t>(node_count, 1));
    return params.spring * std::sqrt(params.side * params.side / n);
}

LayoutState::LayoutState(const LayoutParams& params)
    : params_(params), temperature_(params.t0()), rng_(params.seed) {
    params_.validate();
}

double LayoutState::uniform() {
    // 53 random mantissa bits; independent of the standard library's
    // distribution implementations.
    return static_cast<double>(rng_() >> 11) * 0x1.0p-53;
}

Vec2 LayoutState::place_new_node(const std::string& id, const std::optional<std::string>& neighbor) {
    if (placed(id)) throw ContractError("node '" + id + "' is already placed");
    Vec2 p;
    if (neighbor) {
        auto it = positions_.find(*neighbor);
        if (it == positions_.end()) throw ContractError("neighbor '" + *neighbor + "' is not placed");
        const double radius = ideal_distance(params_, positions_.size() + 1) / 4.0;
        const double r = radius * std::sqrt(uniform());
        const double angle = 2.0 * std::numbers::pi * uniform();
        p = Vec2{it->second.x + r * std::cos(angle), it->second.y + r * std::sin(angle)};
    } else {
        const double x = uniform() * params_.side;
        p = Vec2{x, uniform() * params_.side};
    }
    positions_.emplace(id, p);
    return p;
}

void LayoutState::place_at(const std::string& id, Vec2 position) {
    if (placed(id)) throw ContractError("node '" + id + "' is already placed");
    if (!std::isfinite(position.x) || !std::isfinite(position.y))
        throw ContractError("non-finite position for '" + id + "'");
    positions_.emplace(id, position);
}

double step(LayoutState& state, const GraphSnapshot& snapshot, const LayoutParams& params) {
    for (auto it = state.positions_.begin(); it != state.positions_.end();)
        it = snapshot.nodes.count(it->first) ? std::next(it) : state.positions_.erase(it);

    std::vector<const std::string*> ids;
    std::vector<Vec2> pos;
    std::unordered_map<std::string_view, std::size_t> index;
    ids.reserve(snapshot.nodes.size());
    for (const auto& [id, node] : snapshot.nodes) {
        auto it = state.positions_.find(id);
        if (it == state.positions_.end()) throw ContractError("node '" + id + "' is not placed");
        index.emplace(id, ids.size());
        ids.push_back(&id);
        pos.push_back(it->second);
    }

    const std::size_t n = ids.size();
    const double k = ideal_distance(params, n);
    const double k2 = k * k;
    std::vector<Vec2> disp(n);

    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const auto [dir, d] = separation(pos[i], pos[j]);
            const double f = k2 / d;
            disp[i].x += dir.x * f;
            disp[i].y += dir.y * f;
            disp[j].x -= dir.x * f;
            disp[j].y -= dir.y * f;
        }
    }
    for (const auto& [id, edge] : snapshot.edges) {
        const auto u = index.at(edge.from);
        const auto v = index.at(edge.to);
        if (u == v) continue;
        const auto [dir, d] = separation(pos[u], pos[v]);
        const double f = d * d / k;
        disp[u].x -= dir.x * f;
        disp[u].y -= dir.y * f;
        disp[v].x += dir.x * f;
        disp[v].y += dir.y * f;
    }

    const double t = state.temperature_;
    double max_move = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double len = std::hypot(disp[i].x, disp[i].y);
        if (len == 0.0 || !std::isfinite(len)) continue;
        const double move = std::min(len, t);
        auto& p = state.positions_[*ids[i]];
        p.x += disp[i].x / len * move;
        p.y += disp[i].y / len * move;
        max_move = std::max(max_move, move);
    }

    state.temperature_ *= params.cooling;
    ++state.steps_;
    return max_move;
}

std::size_t run_until_stable(LayoutState& state, const GraphSnapshot& snapshot,
                             const LayoutParams& params) {
    const double eps = params.eps();
    std::size_t iterations = 0;
    while (iterations < params.max_iters) {
        const double moved = step(state, snapshot, params);
        ++iterations;
        if (moved < eps) break;
    }
    return iterations;
}

}  // namespace plexus

#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <string_view>

#include "plexus/graph.hpp"

namespace plexus {

// Spring-embedder parameters. Unset optionals derive from `side`.
struct LayoutParams {
    double side = 1000.0;                       // L: frame side, layout units
    double spring = 1.0;                        // C: scale of the ideal edge length
    std::optional<double> initial_temperature;  // t0, default L/10
    double cooling = 0.95;                      // temperature multiplier per step
    std::optional<double> epsilon;              // convergence threshold, default 0.001 L
    std::size_t max_iters = 2000;
    std::uint64_t seed = 0;

    double t0() const { return initial_temperature.value_or(side / 10.0); }
    double eps() const { return epsilon.value_or(0.001 * side); }

    // Throws ValidationError unless L > 0, 0 < cooling < 1, eps > 0, C > 0, t0 > 0.
    void validate() const;
};

// Minimum pair distance used by the force laws.
inline constexpr double kMinDistance = 0.01;

// k = C * sqrt(L^2 / n).
double ideal_distance(const LayoutParams& params, std::size_t node_count);

// Positions plus the cooling schedule and the seeded generator. Confined to
// one thread.
class LayoutState {
public:
    explicit LayoutState(const LayoutParams& params);

    // Near `neighbor` (uniform in a disc of radius k/4) or, without one,
    // uniform in the L x L frame. Throws ContractError if `id` is already
    // placed or `neighbor` is not.
    Vec2 place_new_node(const std::string& id, const std::optional<std::string>& neighbor = std::nullopt);

    // Explicit placement, for callers that seed a known configuration.
    void place_at(const std::string& id, Vec2 position);

    void forget(const std::string& id) { positions_.erase(id); }

    bool placed(const std::string& id) const { return positions_.count(id) != 0; }
    const Vec2& position(const std::string& id) const { return positions_.at(id); }
    const std::map<std::string, Vec2>& positions() const noexcept { return positions_; }

    double temperature() const noexcept { return temperature_; }
    std::size_t steps() const noexcept { return steps_; }

private:
    friend double step(LayoutState&, const GraphSnapshot&, const LayoutParams&);

    double uniform();  // [0, 1)

    LayoutParams params_;
    std::map<std::string, Vec2> positions_;
    double temperature_;
    std::size_t steps_ = 0;
    std::mt19937_64 rng_;
};

// One force sweep over the snapshot's nodes in ascending id order: pairwise
// repulsion k^2/d, attraction d^2/k along edges, per-node displacement capped
// at the temperature, then cooling. Positions of nodes no longer in the
// snapshot are dropped. Returns the largest displacement. Throws ContractError
// when a snapshot node is unplaced.
double step(LayoutState& state, const GraphSnapshot& snapshot, const LayoutParams& params);

// Steps until the largest displacement drops below eps or max_iters steps ran.
// Returns the number of steps taken.
std::size_t run_until_stable(LayoutState& state, const GraphSnapshot& snapshot,
                             const LayoutParams& params);

}  // namespace plexus

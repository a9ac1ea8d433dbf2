#pragma once

#include <utility>
#include <vector>

#include "qprobe/observation.hpp"

namespace qprobe {

// Rendered pixel intensities, one band per entity kind. Distractor cells are
// a static overlay (think HUD region): they draw on top of everything, never
// move, and never take part in transitions or rewards.
inline constexpr double kBackgroundIntensity = 0.0;
inline constexpr double kWallIntensity = 0.25;
inline constexpr double kGoalIntensity = 0.5;
inline constexpr double kDistractorIntensity = 0.75;
inline constexpr double kAgentIntensity = 1.0;

struct Cell {
    int row = 0;
    int col = 0;
    friend bool operator==(const Cell&, const Cell&) = default;
};

enum class Action { kUp = 0, kDown = 1, kLeft = 2, kRight = 3 };
inline constexpr int kActionCount = 4;

struct GridSpec {
    int grid_rows = 0;
    int grid_cols = 0;
    int cell_pixels = 1;
    Cell start;
    Cell goal;
    std::vector<Cell> walls;
    std::vector<Cell> distractor_cells;
    double step_penalty = -0.01;
    double goal_reward = 1.0;
    double discount = 0.99;
    int max_steps = 100;

    int obs_height() const { return grid_rows * cell_pixels; }
    int obs_width() const { return grid_cols * cell_pixels; }
    bool is_wall(const Cell& c) const;
    bool in_bounds(const Cell& c) const;
};

// Throws std::invalid_argument on out-of-range coordinates, start == goal,
// start or goal on a wall, or non-positive sizes/limits.
void validate_grid(const GridSpec& spec);

// The desk-scale default: an 8x8 maze whose three wall rows force a long
// sweep from (0,0) to the goal, observed as a 40x40 image, plus a two-cell
// distractor band in a corner the greedy route never touches.
GridSpec default_grid_spec();

struct EnvState {
    Cell agent;
    int steps_taken = 0;
    bool terminal = false;
};

struct StepResult {
    EnvState state;
    Observation obs;
    double reward = 0.0;
    bool terminal = false;
};

std::pair<EnvState, Observation> reset(const GridSpec& spec);

// One move. Walls and the boundary block (the agent stays put); entering the
// goal yields goal_reward and ends the episode, every other step costs
// step_penalty. The episode also ends after max_steps steps.
StepResult step(const GridSpec& spec, const EnvState& state, Action action);

Observation render(const GridSpec& spec, const EnvState& state);

// Length of the shortest start-to-goal path in moves (breadth-first search),
// or -1 when the goal is unreachable.
int shortest_distance(const GridSpec& spec);

// Discounted return of a shortest path:
//   goal_reward * discount^(d-1) + step_penalty * sum_{t=0}^{d-2} discount^t.
double optimal_return(const GridSpec& spec);

// Undiscounted return of a shortest path: goal_reward + step_penalty*(d-1).
double optimal_undiscounted_return(const GridSpec& spec);

}  // namespace qprobe

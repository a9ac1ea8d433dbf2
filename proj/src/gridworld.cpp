#include "qprobe/gridworld.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>

namespace qprobe {

bool GridSpec::is_wall(const Cell& c) const {
    return std::find(walls.begin(), walls.end(), c) != walls.end();
}

bool GridSpec::in_bounds(const Cell& c) const {
    return c.row >= 0 && c.row < grid_rows && c.col >= 0 && c.col < grid_cols;
}

void validate_grid(const GridSpec& spec) {
    if (spec.grid_rows <= 0 || spec.grid_cols <= 0)
        throw std::invalid_argument("grid dimensions must be positive");
    if (spec.cell_pixels <= 0)
        throw std::invalid_argument("cell_pixels must be positive");
    if (spec.max_steps <= 0)
        throw std::invalid_argument("max_steps must be positive");
    if (!(spec.discount > 0.0) || spec.discount > 1.0)
        throw std::invalid_argument("discount must lie in (0, 1]");
    if (!spec.in_bounds(spec.start) || !spec.in_bounds(spec.goal))
        throw std::invalid_argument("start or goal outside the grid");
    if (spec.start == spec.goal)
        throw std::invalid_argument("start must differ from goal");
    for (const Cell& w : spec.walls)
        if (!spec.in_bounds(w))
            throw std::invalid_argument("wall outside the grid");
    if (spec.is_wall(spec.start) || spec.is_wall(spec.goal))
        throw std::invalid_argument("start or goal on a wall");
    for (const Cell& d : spec.distractor_cells)
        if (!spec.in_bounds(d))
            throw std::invalid_argument("distractor cell outside the grid");
}

GridSpec default_grid_spec() {
    GridSpec spec;
    spec.grid_rows = 8;
    spec.grid_cols = 8;
    spec.cell_pixels = 5;
    spec.start = {0, 0};
    spec.goal = {7, 7};
    // A wall down column 4 with the gap at the bottom: every route funnels
    // through rows 6 and 7, 14 moves at best. The distractor pair sits in the
    // far corner of the start room, off every shortest path.
    for (int r = 0; r <= 5; ++r) spec.walls.push_back({r, 4});
    spec.distractor_cells = {{7, 0}, {7, 1}};
    spec.step_penalty = -0.01;
    spec.goal_reward = 1.0;
    spec.discount = 0.99;
    spec.max_steps = 100;
    return spec;
}

std::pair<EnvState, Observation> reset(const GridSpec& spec) {
    validate_grid(spec);
    EnvState state;
    state.agent = spec.start;
    state.steps_taken = 0;
    state.terminal = false;
    return {state, render(spec, state)};
}

StepResult step(const GridSpec& spec, const EnvState& state, Action action) {
    validate_grid(spec);
    if (state.terminal)
        throw std::invalid_argument("step on a terminal state");

    Cell next = state.agent;
    switch (action) {
        case Action::kUp: next.row -= 1; break;
        case Action::kDown: next.row += 1; break;
        case Action::kLeft: next.col -= 1; break;
        case Action::kRight: next.col += 1; break;
        default: throw std::invalid_argument("unknown action");
    }
    if (!spec.in_bounds(next) || spec.is_wall(next)) next = state.agent;

    StepResult result;
    result.state.agent = next;
    result.state.steps_taken = state.steps_taken + 1;
    if (next == spec.goal) {
        result.reward = spec.goal_reward;
        result.state.terminal = true;
    } else {
        result.reward = spec.step_penalty;
        result.state.terminal = result.state.steps_taken >= spec.max_steps;
    }
    result.terminal = result.state.terminal;
    result.obs = render(spec, result.state);
    return result;
}

static void fill_cell(Observation& obs, const GridSpec& spec, const Cell& c,
                      double intensity) {
    for (int i = 0; i < spec.cell_pixels; ++i)
        for (int j = 0; j < spec.cell_pixels; ++j)
            obs.at(c.row * spec.cell_pixels + i, c.col * spec.cell_pixels + j) = intensity;
}

Observation render(const GridSpec& spec, const EnvState& state) {
    Observation obs(spec.obs_height(), spec.obs_width(), kBackgroundIntensity);
    for (const Cell& w : spec.walls) fill_cell(obs, spec, w, kWallIntensity);
    fill_cell(obs, spec, spec.goal, kGoalIntensity);
    // The agent overdraws the goal cell; the distractor overlay draws last so
    // its pixels are identical in every state.
    fill_cell(obs, spec, state.agent, kAgentIntensity);
    for (const Cell& d : spec.distractor_cells) fill_cell(obs, spec, d, kDistractorIntensity);
    return obs;
}

int shortest_distance(const GridSpec& spec) {
    validate_grid(spec);
    std::vector<int> dist(static_cast<std::size_t>(spec.grid_rows) * spec.grid_cols, -1);
    auto index = [&](const Cell& c) {
        return static_cast<std::size_t>(c.row) * spec.grid_cols + c.col;
    };

    std::deque<Cell> queue;
    dist[index(spec.start)] = 0;
    queue.push_back(spec.start);
    while (!queue.empty()) {
        Cell cur = queue.front();
        queue.pop_front();
        if (cur == spec.goal) return dist[index(cur)];
        const Cell neighbors[4] = {{cur.row - 1, cur.col},
                                   {cur.row + 1, cur.col},
                                   {cur.row, cur.col - 1},
                                   {cur.row, cur.col + 1}};
        for (const Cell& n : neighbors) {
            if (!spec.in_bounds(n) || spec.is_wall(n)) continue;
            if (dist[index(n)] != -1) continue;
            dist[index(n)] = dist[index(cur)] + 1;
            queue.push_back(n);
        }
    }
    return -1;
}

double optimal_return(const GridSpec& spec) {
    int d = shortest_distance(spec);
    if (d < 0)
        throw std::invalid_argument("goal unreachable from start");
    double penalty_sum = 0.0;
    double g = 1.0;
    for (int t = 0; t <= d - 2; ++t) {
        penalty_sum += g;
        g *= spec.discount;
    }
    return spec.goal_reward * std::pow(spec.discount, d - 1) +
           spec.step_penalty * penalty_sum;
}

double optimal_undiscounted_return(const GridSpec& spec) {
    int d = shortest_distance(spec);
    if (d < 0)
        throw std::invalid_argument("goal unreachable from start");
    return spec.goal_reward + spec.step_penalty * (d - 1);
}

}  // namespace qprobe

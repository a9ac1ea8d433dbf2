#pragma once

#include <string>

#include "qprobe/gridworld.hpp"
#include "qprobe/observation.hpp"
#include "qprobe/qnetwork.hpp"

namespace qprobe {

// Shortest decimal form with the requested significant digits (%.*g).
// 17 digits round-trip a double exactly; CSV output uses 12.
std::string format_real(double value, int digits = 12);

// Versioned text format; reals carry 17 significant digits so that
// save -> load -> save reproduces the weights bit for bit.
void save_model(const std::string& path, const QNetwork& net);
QNetwork load_model(const std::string& path);

// Grid configs share the same keyword-value text notation.
void save_grid_spec(const std::string& path, const GridSpec& spec);
GridSpec load_grid_spec(const std::string& path);

// H rows of W comma-separated reals.
void write_field_csv(const std::string& path, const Field& field);
Field read_field_csv(const std::string& path);

// Plain (P2) 16-bit portable graymap, row-major, rescaled so the smallest
// value maps to 0 and the largest to 65535. A constant field maps to all 0.
void write_field_pgm(const std::string& path, const Field& field);

}  // namespace qprobe

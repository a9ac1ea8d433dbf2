#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace qprobe {

// H x W grid of reals, row-major. Used for gradients, perturbation fields
// and other image-shaped quantities with no range restriction.
struct Field {
    int height = 0;
    int width = 0;
    std::vector<double> values;

    Field() = default;
    Field(int h, int w, double fill = 0.0)
        : height(h), width(w),
          values(static_cast<std::size_t>(h) * static_cast<std::size_t>(w), fill) {}

    double& at(int i, int j) {
        return values[static_cast<std::size_t>(i) * width + j];
    }
    double at(int i, int j) const {
        return values[static_cast<std::size_t>(i) * width + j];
    }
    int size() const { return height * width; }
};

// Pixel observation as seen by a policy. Intensities are expected to stay
// inside [0, 1]; producers (the renderer, the attacks) maintain that range.
struct Observation {
    int height = 0;
    int width = 0;
    std::vector<double> pixels;

    Observation() = default;
    Observation(int h, int w, double fill = 0.0)
        : height(h), width(w),
          pixels(static_cast<std::size_t>(h) * static_cast<std::size_t>(w), fill) {}

    double& at(int i, int j) {
        return pixels[static_cast<std::size_t>(i) * width + j];
    }
    double at(int i, int j) const {
        return pixels[static_cast<std::size_t>(i) * width + j];
    }
    int size() const { return height * width; }
};

inline void check_observation_shape(const Observation& obs) {
    if (obs.height <= 0 || obs.width <= 0)
        throw std::invalid_argument("observation has empty shape");
    if (obs.pixels.size() !=
        static_cast<std::size_t>(obs.height) * static_cast<std::size_t>(obs.width))
        throw std::invalid_argument("observation pixel count does not match its shape");
}

}  // namespace qprobe

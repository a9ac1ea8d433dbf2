#pragma once

#include <complex>
#include <vector>

#include "qprobe/observation.hpp"

namespace qprobe {

// Unnormalized 2D DFT of a real field, stored center-shifted: the coefficient
// at row floor(H/2), column floor(W/2) is the zero-frequency term, and the
// entry at shifted position (r, c) belongs to the frequency pair
// (r - floor(H/2), c - floor(W/2)).
struct Spectrum {
    int height = 0;
    int width = 0;
    std::vector<std::complex<double>> coefficients;

    const std::complex<double>& at(int r, int c) const {
        return coefficients[static_cast<std::size_t>(r) * width + c];
    }
    std::complex<double>& at(int r, int c) {
        return coefficients[static_cast<std::size_t>(r) * width + c];
    }
};

// Direct-summation DFT; when both dimensions are powers of two a radix-2 FFT
// takes over (it agrees with the direct sum to well below 1e-9).
Spectrum dft2(const Field& field);

// Sum of |F|^2 over all coefficients. Parseval ties it to the field:
// total_power == H * W * sum(field^2).
double total_power(const Spectrum& spectrum);

// Energy binned by the Chebyshev frequency f = max(|f_row|, |f_col|),
// f = 0 .. max_chebyshev_frequency(H, W).
struct SpectrumProfile {
    std::vector<double> energies;
    int sample_count = 1;
};

int max_chebyshev_frequency(int height, int width);

SpectrumProfile energy_by_max_frequency(const Spectrum& spectrum);

// Elementwise arithmetic mean of equally sized profiles; sample_count sums.
SpectrumProfile average_profiles(const std::vector<SpectrumProfile>& profiles);

// sum(f * E(f)) / sum(E(f)); rejects profiles with no energy.
double spectral_centroid(const SpectrumProfile& profile);

}  // namespace qprobe

#include "qprobe/spectrum.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qprobe {

namespace {

bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

// In-place iterative radix-2 Cooley-Tukey, forward transform (e^{-2 pi i k/N}).
void fft_pow2(std::vector<std::complex<double>>& a) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        double angle = -2.0 * std::numbers::pi / static_cast<double>(len);
        std::complex<double> wlen = std::polar(1.0, angle);
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w{1.0, 0.0};
            for (std::size_t k = 0; k < len / 2; ++k) {
                std::complex<double> u = a[i + k];
                std::complex<double> v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
}

// Row-column FFT for power-of-two shapes, unshifted layout.
std::vector<std::complex<double>> dft2_fft(const Field& field) {
    const int h = field.height;
    const int w = field.width;
    std::vector<std::complex<double>> out(static_cast<std::size_t>(h) * w);
    for (int m = 0; m < h; ++m) {
        std::vector<std::complex<double>> row(w);
        for (int n = 0; n < w; ++n) row[n] = field.at(m, n);
        fft_pow2(row);
        for (int n = 0; n < w; ++n) out[static_cast<std::size_t>(m) * w + n] = row[n];
    }
    for (int n = 0; n < w; ++n) {
        std::vector<std::complex<double>> col(h);
        for (int m = 0; m < h; ++m) col[m] = out[static_cast<std::size_t>(m) * w + n];
        fft_pow2(col);
        for (int m = 0; m < h; ++m) out[static_cast<std::size_t>(m) * w + n] = col[m];
    }
    return out;
}

// Direct O((HW)^2) summation with a precomputed table of the HW distinct
// roots of unity appearing in exp(-2 pi i (um/H + vn/W)).
std::vector<std::complex<double>> dft2_direct(const Field& field) {
    const int h = field.height;
    const int w = field.width;
    const long total = static_cast<long>(h) * w;
    std::vector<std::complex<double>> roots(static_cast<std::size_t>(total));
    for (long k = 0; k < total; ++k)
        roots[k] = std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(k) /
                                       static_cast<double>(total));

    std::vector<std::complex<double>> out(static_cast<std::size_t>(total));
    for (int u = 0; u < h; ++u) {
        for (int v = 0; v < w; ++v) {
            std::complex<double> acc{0.0, 0.0};
            for (int m = 0; m < h; ++m) {
                for (int n = 0; n < w; ++n) {
                    // um/H + vn/W == (um*W + vn*H) / (H*W)
                    long phase = (static_cast<long>(u) * m % h) * w +
                                 (static_cast<long>(v) * n % w) * h;
                    acc += field.at(m, n) * roots[phase % total];
                }
            }
            out[static_cast<std::size_t>(u) * w + v] = acc;
        }
    }
    return out;
}

}  // namespace

Spectrum dft2(const Field& field) {
    if (field.height <= 0 || field.width <= 0)
        throw std::invalid_argument("dft2 needs a non-empty field");
    if (field.values.size() !=
        static_cast<std::size_t>(field.height) * static_cast<std::size_t>(field.width))
        throw std::invalid_argument("field storage does not match its shape");

    const int h = field.height;
    const int w = field.width;
    std::vector<std::complex<double>> unshifted =
        (is_pow2(h) && is_pow2(w)) ? dft2_fft(field) : dft2_direct(field);

    Spectrum spectrum;
    spectrum.height = h;
    spectrum.width = w;
    spectrum.coefficients.resize(unshifted.size());
    // Shift so the zero-frequency coefficient lands at (floor(H/2), floor(W/2)).
    for (int r = 0; r < h; ++r) {
        int u = (r + (h + 1) / 2) % h;
        for (int c = 0; c < w; ++c) {
            int v = (c + (w + 1) / 2) % w;
            spectrum.at(r, c) = unshifted[static_cast<std::size_t>(u) * w + v];
        }
    }
    return spectrum;
}

double total_power(const Spectrum& spectrum) {
    double sum = 0.0;
    for (const std::complex<double>& z : spectrum.coefficients) sum += std::norm(z);
    return sum;
}

int max_chebyshev_frequency(int height, int width) {
    // ceil((n-1)/2) == n/2 for positive n, the largest |frequency| on an axis.
    int fy = height / 2;
    int fx = width / 2;
    return fy > fx ? fy : fx;
}

SpectrumProfile energy_by_max_frequency(const Spectrum& spectrum) {
    if (spectrum.height <= 0 || spectrum.width <= 0)
        throw std::invalid_argument("profile of an empty spectrum");

    SpectrumProfile profile;
    profile.energies.assign(
        static_cast<std::size_t>(max_chebyshev_frequency(spectrum.height, spectrum.width)) + 1,
        0.0);
    profile.sample_count = 1;
    for (int r = 0; r < spectrum.height; ++r) {
        int fy = r - spectrum.height / 2;
        for (int c = 0; c < spectrum.width; ++c) {
            int fx = c - spectrum.width / 2;
            int f = std::max(std::abs(fy), std::abs(fx));
            profile.energies[f] += std::norm(spectrum.at(r, c));
        }
    }
    return profile;
}

SpectrumProfile average_profiles(const std::vector<SpectrumProfile>& profiles) {
    if (profiles.empty())
        throw std::invalid_argument("average of zero profiles");
    const std::size_t bins = profiles[0].energies.size();
    SpectrumProfile mean;
    mean.energies.assign(bins, 0.0);
    mean.sample_count = 0;
    for (const SpectrumProfile& p : profiles) {
        if (p.energies.size() != bins)
            throw std::invalid_argument("profiles have mismatched bin counts");
        for (std::size_t i = 0; i < bins; ++i) mean.energies[i] += p.energies[i];
        mean.sample_count += p.sample_count;
    }
    for (double& e : mean.energies) e /= static_cast<double>(profiles.size());
    return mean;
}

double spectral_centroid(const SpectrumProfile& profile) {
    double total = 0.0;
    double weighted = 0.0;
    for (std::size_t f = 0; f < profile.energies.size(); ++f) {
        total += profile.energies[f];
        weighted += static_cast<double>(f) * profile.energies[f];
    }
    if (!(total > 0.0))
        throw std::invalid_argument("spectral centroid of a zero-energy profile");
    return weighted / total;
}

}  // namespace qprobe

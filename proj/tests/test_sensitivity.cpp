#include <cmath>
#include <stdexcept>
#include <vector>

#include <doctest.h>

#include "qprobe/sensitivity.hpp"
#include "test_support.hpp"

using namespace qprobe;
using test_support::linear_net;
using test_support::random_observation;

namespace {

// Pixel-major reference for the K map: zero one pixel, compare the greedy
// value against the value of the post-zeroing greedy action, average over
// states. Uses forward only as a primitive; the map logic is its own.
Field reference_kmap(const QNetwork& net, const std::vector<Observation>& states) {
    Field out(net.input_height, net.input_width, 0.0);
    for (int i = 0; i < net.input_height; ++i) {
        for (int j = 0; j < net.input_width; ++j) {
            for (const Observation& s : states) {
                std::vector<double> q = forward(net, s);
                Observation zeroed = s;
                zeroed.at(i, j) = 0.0;
                std::vector<double> q_aug = forward(net, zeroed);
                int a_star = 0, a_aug = 0;
                for (std::size_t a = 1; a < q.size(); ++a) {
                    if (q[a] > q[a_star]) a_star = static_cast<int>(a);
                    if (q_aug[a] > q_aug[a_aug]) a_aug = static_cast<int>(a);
                }
                out.at(i, j) += q[a_star] - q[a_aug];
            }
            out.at(i, j) /= static_cast<double>(states.size());
        }
    }
    return out;
}

std::vector<double> reference_softmax(const std::vector<double>& q, double t) {
    std::vector<double> p(q.size());
    double m = q[0] / t;
    for (double v : q) m = std::max(m, v / t);
    double z = 0.0;
    for (std::size_t a = 0; a < q.size(); ++a) {
        p[a] = std::exp(q[a] / t - m);
        z += p[a];
    }
    for (double& v : p) v /= z;
    return p;
}

Field reference_hmap(const QNetwork& net, const std::vector<Observation>& states,
                     double t) {
    Field out(net.input_height, net.input_width, 0.0);
    for (int i = 0; i < net.input_height; ++i) {
        for (int j = 0; j < net.input_width; ++j) {
            for (const Observation& s : states) {
                std::vector<double> p = reference_softmax(forward(net, s), t);
                Observation zeroed = s;
                zeroed.at(i, j) = 0.0;
                std::vector<double> p_aug =
                    reference_softmax(forward(net, zeroed), t);
                for (std::size_t a = 0; a < p.size(); ++a)
                    out.at(i, j) -= p[a] * std::log(p_aug[a]);
            }
            out.at(i, j) /= static_cast<double>(states.size());
        }
    }
    return out;
}

std::vector<Observation> random_states(int h, int w, int count, Rng& rng) {
    std::vector<Observation> states;
    for (int k = 0; k < count; ++k) states.push_back(random_observation(h, w, rng));
    return states;
}

SensitivityMap constant_map(int h, int w, double fill) {
    SensitivityMap map;
    map.values = Field(h, w, fill);
    map.states_aggregated = 1;
    return map;
}

}  // namespace

TEST_CASE("zero_pixel clears one entry and leaves the source alone") {
    Observation obs(2, 3, 0.5);
    obs.at(1, 2) = 0.9;
    Observation z = zero_pixel(obs, 1, 2);
    CHECK(z.at(1, 2) == 0.0);
    CHECK(obs.at(1, 2) == 0.9);
    CHECK(z.at(0, 0) == 0.5);
    CHECK_THROWS_AS(zero_pixel(obs, 2, 0), std::out_of_range);
    CHECK_THROWS_AS(zero_pixel(obs, 0, -1), std::out_of_range);
}

TEST_CASE("kmap matches the pixel-major reference bit for bit") {
    Rng rng(201);
    for (int trial = 0; trial < 5; ++trial) {
        QNetwork net = make_network(8, 8, {12}, 4, rng);
        std::vector<Observation> states = random_states(8, 8, 3, rng);
        SensitivityMap map = kmap(net, states);
        Field ref = reference_kmap(net, states);
        CHECK(map.kind == SensitivityMap::Kind::kK);
        CHECK(map.states_aggregated == 3);
        for (std::size_t i = 0; i < ref.values.size(); ++i) {
            CHECK(map.values.values[i] == ref.values[i]);
            CHECK(map.values.values[i] >= 0.0);
        }
    }
}

TEST_CASE("hmap matches the reference cross-entropy") {
    Rng rng(202);
    for (double t : {1.0, 0.25, 4.0}) {
        QNetwork net = make_network(6, 6, {10}, 3, rng);
        std::vector<Observation> states = random_states(6, 6, 4, rng);
        SensitivityMap map = hmap(net, states, t);
        Field ref = reference_hmap(net, states, t);
        CHECK(map.kind == SensitivityMap::Kind::kH);
        CHECK(map.temperature == t);
        for (std::size_t i = 0; i < ref.values.size(); ++i)
            CHECK(map.values.values[i] ==
                  doctest::Approx(ref.values[i]).epsilon(1e-12));
    }
}

TEST_CASE("a bias-dominated policy has an all-zero kmap") {
    // The first action wins by a margin no single-pixel zeroing can close.
    QNetwork net = linear_net(3, 3,
                              {{0.1, -0.2, 0.05, 0.1, 0.0, -0.1, 0.2, 0.1, 0.05},
                               {-0.1, 0.1, 0.0, 0.05, 0.1, 0.0, -0.05, 0.0, 0.1}},
                              {10.0, 0.0});
    Rng rng(203);
    std::vector<Observation> states = random_states(3, 3, 5, rng);
    SensitivityMap map = kmap(net, states);
    for (double v : map.values.values) CHECK(v == 0.0);
    CHECK_THROWS_AS(sparsity(map), std::invalid_argument);
    CHECK(map_entropy(map) == doctest::Approx(std::log(9.0)).epsilon(1e-12));
}

TEST_CASE("an input-blind network yields log(action_count) everywhere in hmap") {
    std::vector<std::vector<double>> rows(3, std::vector<double>(4, 0.0));
    QNetwork net = linear_net(2, 2, rows, {0.3, 0.3, 0.3});
    Rng rng(204);
    std::vector<Observation> states = random_states(2, 2, 3, rng);
    SensitivityMap map = hmap(net, states, 1.0);
    for (double v : map.values.values)
        CHECK(v == doctest::Approx(std::log(3.0)).epsilon(1e-12));
}

TEST_CASE("hmap cells never drop below the mean policy entropy") {
    Rng rng(205);
    QNetwork net = make_network(5, 5, {8}, 4, rng);
    std::vector<Observation> states = random_states(5, 5, 4, rng);

    double mean_entropy = 0.0;
    for (const Observation& s : states) {
        std::vector<double> p = reference_softmax(forward(net, s), 1.0);
        for (double v : p) mean_entropy -= v * std::log(v) / states.size();
    }

    SensitivityMap map = hmap(net, states, 1.0);
    for (double v : map.values.values) CHECK(v >= mean_entropy - 1e-12);
}

TEST_CASE("a uniform 84x84 map pins both summary metrics") {
    SensitivityMap map = constant_map(84, 84, 0.3);
    CHECK(sparsity(map) == doctest::Approx(84.0).epsilon(1e-6));
    CHECK(map_entropy(map) == doctest::Approx(std::log(7056.0)).epsilon(1e-12));
    CHECK(std::fabs(map_entropy(map) - 8.8616) < 1e-3);
}

TEST_CASE("a single dominant cell drives the entropy to zero") {
    SensitivityMap map = constant_map(3, 3, 0.0);
    map.values.at(1, 1) = 50.0;
    CHECK(map_entropy(map) < 1e-12);
    CHECK(sparsity(map) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("the all-zero map keeps a defined entropy but no sparsity") {
    SensitivityMap map = constant_map(4, 4, 0.0);
    CHECK_THROWS_AS(sparsity(map), std::invalid_argument);
    CHECK(map_entropy(map) == doctest::Approx(std::log(16.0)).epsilon(1e-12));
}

TEST_CASE("sensitivity maps validate their inputs") {
    Rng rng(206);
    QNetwork net = make_network(4, 4, {6}, 3, rng);
    CHECK_THROWS_AS(kmap(net, {}), std::invalid_argument);
    CHECK_THROWS_AS(kmap(net, {Observation(3, 4, 0.5)}), std::invalid_argument);
    CHECK_THROWS_AS(hmap(net, {Observation(4, 4, 0.5)}, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(hmap(net, {Observation(4, 4, 0.5)}, -1.0), std::invalid_argument);
}

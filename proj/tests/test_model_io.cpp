#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <doctest.h>

#include "qprobe/model_io.hpp"
#include "test_support.hpp"

using namespace qprobe;

namespace {

std::string temp_path(const std::string& name) {
    return std::string("io_test_") + name;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

void spill(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
}

struct FileGuard {
    std::string path;
    ~FileGuard() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("format_real keeps the requested precision") {
    CHECK(format_real(0.25) == "0.25");
    CHECK(format_real(-3.0) == "-3");
    CHECK(format_real(1.0 / 3.0, 17) == "0.33333333333333331");
    CHECK(format_real(0.1, 17) == "0.10000000000000001");

    // 17 significant digits recover the exact bits for awkward magnitudes.
    for (double v : {1e-300, -7.25e300, 3.0000000000000004}) {
        CHECK(std::stod(format_real(v, 17)) == v);
    }
}

TEST_CASE("models round-trip bit for bit") {
    Rng rng(61);
    for (int trial = 0; trial < 8; ++trial) {
        std::vector<int> hidden;
        if (trial % 3 == 1) hidden = {5};
        if (trial % 3 == 2) hidden = {7, 3};
        QNetwork net = make_network(2 + trial % 3, 3, hidden, 2 + trial % 4, rng);
        // Sprinkle in values that stress the decimal representation.
        net.layers[0].weights[0] = 1.0 / 3.0;
        net.layers[0].bias[0] = -1e-12;

        FileGuard file{temp_path("model")};
        save_model(file.path, net);
        QNetwork loaded = load_model(file.path);

        CHECK(loaded.input_height == net.input_height);
        CHECK(loaded.input_width == net.input_width);
        CHECK(loaded.action_count == net.action_count);
        REQUIRE(loaded.layers.size() == net.layers.size());
        for (std::size_t l = 0; l < net.layers.size(); ++l) {
            CHECK(loaded.layers[l].rows == net.layers[l].rows);
            CHECK(loaded.layers[l].cols == net.layers[l].cols);
            CHECK(loaded.layers[l].activation == net.layers[l].activation);
            CHECK(loaded.layers[l].weights == net.layers[l].weights);
            CHECK(loaded.layers[l].bias == net.layers[l].bias);
        }

        // A second save of the loaded model is byte-identical.
        FileGuard again{temp_path("model2")};
        save_model(again.path, loaded);
        CHECK(slurp(file.path) == slurp(again.path));
    }
}

TEST_CASE("grid specs round-trip") {
    GridSpec spec = default_grid_spec();
    FileGuard file{temp_path("grid")};
    save_grid_spec(file.path, spec);
    GridSpec loaded = load_grid_spec(file.path);

    CHECK(loaded.grid_rows == spec.grid_rows);
    CHECK(loaded.grid_cols == spec.grid_cols);
    CHECK(loaded.cell_pixels == spec.cell_pixels);
    CHECK(loaded.start == spec.start);
    CHECK(loaded.goal == spec.goal);
    CHECK(loaded.walls == spec.walls);
    CHECK(loaded.distractor_cells == spec.distractor_cells);
    CHECK(loaded.step_penalty == spec.step_penalty);
    CHECK(loaded.goal_reward == spec.goal_reward);
    CHECK(loaded.discount == spec.discount);
    CHECK(loaded.max_steps == spec.max_steps);
}

TEST_CASE("field CSVs round-trip through 12 digits") {
    Field f(3, 4);
    Rng rng(62);
    for (double& v : f.values) v = rng.uniform(-2.0, 2.0);
    f.at(0, 0) = 0.0;
    f.at(2, 3) = -1.5;

    FileGuard file{temp_path("field.csv")};
    write_field_csv(file.path, f);
    Field loaded = read_field_csv(file.path);
    REQUIRE(loaded.height == 3);
    REQUIRE(loaded.width == 4);
    for (std::size_t i = 0; i < f.values.size(); ++i)
        CHECK(loaded.values[i] == doctest::Approx(f.values[i]).epsilon(1e-11));
    CHECK(loaded.at(0, 0) == 0.0);
    CHECK(loaded.at(2, 3) == -1.5);
}

TEST_CASE("pgm output maps the field range onto 16 bits") {
    Field f(2, 3);
    f.values = {0.0, 0.5, 1.0, 0.25, 0.75, 1.0};
    FileGuard file{temp_path("field.pgm")};
    write_field_pgm(file.path, f);

    std::ifstream in(file.path);
    std::string magic;
    int w = 0, h = 0, maxval = 0;
    in >> magic >> w >> h >> maxval;
    CHECK(magic == "P2");
    CHECK(w == 3);
    CHECK(h == 2);
    CHECK(maxval == 65535);

    std::vector<long> pixels;
    long value = 0;
    while (in >> value) pixels.push_back(value);
    REQUIRE(pixels.size() == 6);
    CHECK(pixels[0] == 0);
    CHECK(pixels[1] == 32768);  // 0.5 of the range, rounded
    CHECK(pixels[2] == 65535);
    CHECK(pixels[3] == 16384);
    CHECK(pixels[4] == 49151);
    CHECK(pixels[5] == 65535);
}

TEST_CASE("a constant field renders as an all-zero graymap") {
    Field f(2, 2, 0.7);
    FileGuard file{temp_path("flat.pgm")};
    write_field_pgm(file.path, f);
    std::ifstream in(file.path);
    std::string magic;
    int w, h, maxval;
    in >> magic >> w >> h >> maxval;
    long value = -1;
    for (int k = 0; k < 4; ++k) {
        in >> value;
        CHECK(value == 0);
    }
}

TEST_CASE("malformed model files are rejected with the path in the message") {
    FileGuard file{temp_path("bad.model")};

    spill(file.path, "nonsense 1\n");
    CHECK_THROWS_AS(load_model(file.path), std::runtime_error);

    spill(file.path, "version 2\n");
    CHECK_THROWS_AS(load_model(file.path), std::runtime_error);

    // Truncated after the header.
    spill(file.path,
          "version 1\ninput_height 2\ninput_width 2\naction_count 2\nlayer_count 1\n");
    CHECK_THROWS_AS(load_model(file.path), std::runtime_error);

    CHECK_THROWS_AS(load_model("does_not_exist.model"), std::runtime_error);
    try {
        load_model("does_not_exist.model");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()).find("does_not_exist.model") != std::string::npos);
    }
}

TEST_CASE("malformed grids and ragged CSVs are rejected") {
    FileGuard grid{temp_path("bad.grid")};
    spill(grid.path, "version 1\ngrid_rows 2\n");
    CHECK_THROWS_AS(load_grid_spec(grid.path), std::runtime_error);

    FileGuard csv{temp_path("ragged.csv")};
    spill(csv.path, "1,2,3\n4,5\n");
    CHECK_THROWS_AS(read_field_csv(csv.path), std::runtime_error);

    FileGuard empty{temp_path("empty.csv")};
    spill(empty.path, "");
    CHECK_THROWS_AS(read_field_csv(empty.path), std::runtime_error);

    FileGuard text{temp_path("text.csv")};
    spill(text.path, "1,2\n3,abc\n");
    CHECK_THROWS_AS(read_field_csv(text.path), std::runtime_error);
}

TEST_CASE("loaded models validate their structure") {
    // Weight counts that disagree with rows x cols must not load silently.
    FileGuard file{temp_path("badshape.model")};
    spill(file.path,
          "version 1\n"
          "input_height 1\n"
          "input_width 2\n"
          "action_count 2\n"
          "layer_count 1\n"
          "layer\n"
          "rows 2\n"
          "cols 3\n"
          "activation identity\n"
          "weights\n"
          "1 0 0\n"
          "0 1 0\n"
          "bias\n"
          "0 0\n");
    CHECK_THROWS_AS(load_model(file.path), std::runtime_error);
}

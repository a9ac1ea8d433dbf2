#include "qprobe/model_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace qprobe {

namespace {

constexpr int kModelFormatVersion = 1;

void fail(const std::string& path, const std::string& what) {
    throw std::runtime_error(path + ": " + what);
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) fail(path, "cannot open for writing");
    return out;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(path, "cannot open for reading");
    return in;
}

void expect_keyword(std::istream& in, const std::string& path, const std::string& keyword) {
    std::string token;
    if (!(in >> token) || token != keyword)
        fail(path, "expected keyword '" + keyword + "'");
}

template <typename T>
T read_value(std::istream& in, const std::string& path, const std::string& keyword) {
    expect_keyword(in, path, keyword);
    T value;
    if (!(in >> value)) fail(path, "bad value for '" + keyword + "'");
    return value;
}

void close_out(std::ofstream& out, const std::string& path) {
    out.flush();
    if (!out) fail(path, "write failed");
}

}  // namespace

std::string format_real(double value, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*g", digits, value);
    return buf;
}

void save_model(const std::string& path, const QNetwork& net) {
    validate_network(net);
    std::ofstream out = open_out(path);
    out << "version " << kModelFormatVersion << "\n";
    out << "input_height " << net.input_height << "\n";
    out << "input_width " << net.input_width << "\n";
    out << "action_count " << net.action_count << "\n";
    out << "layer_count " << net.layers.size() << "\n";
    for (const DenseLayer& layer : net.layers) {
        out << "layer\n";
        out << "rows " << layer.rows << "\n";
        out << "cols " << layer.cols << "\n";
        out << "activation " << activation_name(layer.activation) << "\n";
        out << "weights\n";
        for (int r = 0; r < layer.rows; ++r) {
            for (int c = 0; c < layer.cols; ++c)
                out << (c ? " " : "") << format_real(layer.weight(r, c), 17);
            out << "\n";
        }
        out << "bias\n";
        for (int r = 0; r < layer.rows; ++r)
            out << (r ? " " : "") << format_real(layer.bias[r], 17);
        out << "\n";
    }
    close_out(out, path);
}

QNetwork load_model(const std::string& path) {
    std::ifstream in = open_in(path);
    int version = read_value<int>(in, path, "version");
    if (version != kModelFormatVersion)
        fail(path, "unsupported model format version");

    QNetwork net;
    net.input_height = read_value<int>(in, path, "input_height");
    net.input_width = read_value<int>(in, path, "input_width");
    net.action_count = read_value<int>(in, path, "action_count");
    int layer_count = read_value<int>(in, path, "layer_count");
    if (layer_count < 1) fail(path, "model needs at least one layer");

    for (int l = 0; l < layer_count; ++l) {
        expect_keyword(in, path, "layer");
        DenseLayer layer;
        layer.rows = read_value<int>(in, path, "rows");
        layer.cols = read_value<int>(in, path, "cols");
        if (layer.rows < 1 || layer.cols < 1) fail(path, "bad layer shape");
        layer.activation =
            activation_from_name(read_value<std::string>(in, path, "activation"));
        expect_keyword(in, path, "weights");
        layer.weights.resize(static_cast<std::size_t>(layer.rows) * layer.cols);
        for (double& w : layer.weights)
            if (!(in >> w)) fail(path, "truncated weights");
        expect_keyword(in, path, "bias");
        layer.bias.resize(static_cast<std::size_t>(layer.rows));
        for (double& b : layer.bias)
            if (!(in >> b)) fail(path, "truncated bias");
        net.layers.push_back(std::move(layer));
    }
    try {
        validate_network(net);
    } catch (const std::invalid_argument& e) {
        fail(path, e.what());
    }
    return net;
}

void save_grid_spec(const std::string& path, const GridSpec& spec) {
    validate_grid(spec);
    std::ofstream out = open_out(path);
    out << "version 1\n";
    out << "grid_rows " << spec.grid_rows << "\n";
    out << "grid_cols " << spec.grid_cols << "\n";
    out << "cell_pixels " << spec.cell_pixels << "\n";
    out << "start " << spec.start.row << " " << spec.start.col << "\n";
    out << "goal " << spec.goal.row << " " << spec.goal.col << "\n";
    out << "step_penalty " << format_real(spec.step_penalty, 17) << "\n";
    out << "goal_reward " << format_real(spec.goal_reward, 17) << "\n";
    out << "discount " << format_real(spec.discount, 17) << "\n";
    out << "max_steps " << spec.max_steps << "\n";
    out << "wall_count " << spec.walls.size() << "\n";
    for (const Cell& w : spec.walls)
        out << "wall " << w.row << " " << w.col << "\n";
    out << "distractor_count " << spec.distractor_cells.size() << "\n";
    for (const Cell& d : spec.distractor_cells)
        out << "distractor " << d.row << " " << d.col << "\n";
    close_out(out, path);
}

GridSpec load_grid_spec(const std::string& path) {
    std::ifstream in = open_in(path);
    int version = read_value<int>(in, path, "version");
    if (version != 1) fail(path, "unsupported grid format version");

    GridSpec spec;
    spec.grid_rows = read_value<int>(in, path, "grid_rows");
    spec.grid_cols = read_value<int>(in, path, "grid_cols");
    spec.cell_pixels = read_value<int>(in, path, "cell_pixels");
    expect_keyword(in, path, "start");
    if (!(in >> spec.start.row >> spec.start.col)) fail(path, "bad start cell");
    expect_keyword(in, path, "goal");
    if (!(in >> spec.goal.row >> spec.goal.col)) fail(path, "bad goal cell");
    spec.step_penalty = read_value<double>(in, path, "step_penalty");
    spec.goal_reward = read_value<double>(in, path, "goal_reward");
    spec.discount = read_value<double>(in, path, "discount");
    spec.max_steps = read_value<int>(in, path, "max_steps");
    int walls = read_value<int>(in, path, "wall_count");
    for (int i = 0; i < walls; ++i) {
        Cell c;
        expect_keyword(in, path, "wall");
        if (!(in >> c.row >> c.col)) fail(path, "bad wall cell");
        spec.walls.push_back(c);
    }
    int distractors = read_value<int>(in, path, "distractor_count");
    for (int i = 0; i < distractors; ++i) {
        Cell c;
        expect_keyword(in, path, "distractor");
        if (!(in >> c.row >> c.col)) fail(path, "bad distractor cell");
        spec.distractor_cells.push_back(c);
    }
    try {
        validate_grid(spec);
    } catch (const std::invalid_argument& e) {
        fail(path, e.what());
    }
    return spec;
}

void write_field_csv(const std::string& path, const Field& field) {
    std::ofstream out = open_out(path);
    for (int i = 0; i < field.height; ++i) {
        for (int j = 0; j < field.width; ++j)
            out << (j ? "," : "") << format_real(field.at(i, j));
        out << "\n";
    }
    close_out(out, path);
}

Field read_field_csv(const std::string& path) {
    std::ifstream in = open_in(path);
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cellval;
        while (std::getline(ss, cellval, ',')) {
            try {
                row.push_back(std::stod(cellval));
            } catch (const std::exception&) {
                fail(path, "bad numeric cell '" + cellval + "'");
            }
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) fail(path, "empty field");
    Field field(static_cast<int>(rows.size()), static_cast<int>(rows[0].size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != rows[0].size()) fail(path, "ragged rows");
        for (std::size_t j = 0; j < rows[i].size(); ++j)
            field.at(static_cast<int>(i), static_cast<int>(j)) = rows[i][j];
    }
    return field;
}

void write_field_pgm(const std::string& path, const Field& field) {
    double lo = field.values.empty() ? 0.0 : field.values[0];
    double hi = lo;
    for (double v : field.values) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    double range = hi - lo;

    std::ofstream out = open_out(path);
    out << "P2\n" << field.width << " " << field.height << "\n65535\n";
    for (int i = 0; i < field.height; ++i) {
        for (int j = 0; j < field.width; ++j) {
            int level = 0;
            if (range > 0.0)
                level = static_cast<int>(std::lround((field.at(i, j) - lo) / range * 65535.0));
            out << (j ? " " : "") << level;
        }
        out << "\n";
    }
    close_out(out, path);
}

}  // namespace qprobe

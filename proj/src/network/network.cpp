#include "nnv/network/network.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "nnv/errors.hpp"

namespace nnv::nn {

std::vector<double> Matrix::apply(const std::vector<double>& x) const {
    std::vector<double> y(rows, 0.0);
    for (int r = 0; r < rows; ++r) {
        double acc = 0.0;
        for (int c = 0; c < cols; ++c) acc += at(r, c) * x[c];
        y[r] = acc;
    }
    return y;
}

int NeuralNetwork::total_relu_count() const {
    int total = 0;
    for (int l = 0; l < hidden_layer_count(); ++l) total += hidden_width(l);
    return total;
}

void validate(const NeuralNetwork& net) {
    if (net.layers.empty()) {
        throw DimensionMismatch("network has no layers");
    }
    if (net.input_dim <= 0 || net.output_dim <= 0) {
        throw DimensionMismatch("network input/output dimensions must be positive");
    }
    int expect_cols = net.input_dim;
    for (size_t l = 0; l < net.layers.size(); ++l) {
        const Layer& layer = net.layers[l];
        if (layer.W.rows <= 0 || layer.W.cols <= 0) {
            throw DimensionMismatch("layer " + std::to_string(l) +
                                    ": empty weight matrix");
        }
        if (layer.W.cols != expect_cols) {
            throw DimensionMismatch(
                "layer " + std::to_string(l) + ": expected " +
                std::to_string(expect_cols) + " columns, got " +
                std::to_string(layer.W.cols));
        }
        if (static_cast<int>(layer.w.size()) != layer.W.rows) {
            throw DimensionMismatch("layer " + std::to_string(l) +
                                    ": bias size does not match row count");
        }
        for (double v : layer.W.data) {
            if (!std::isfinite(v)) {
                throw DimensionMismatch("layer " + std::to_string(l) +
                                        ": non-finite weight");
            }
        }
        for (double v : layer.w) {
            if (!std::isfinite(v)) {
                throw DimensionMismatch("layer " + std::to_string(l) +
                                        ": non-finite bias");
            }
        }
        expect_cols = layer.W.rows;
    }
    if (net.layers.back().W.rows != net.output_dim) {
        throw DimensionMismatch("output layer rows do not match output_dim");
    }
}

ForwardTrace forward(const NeuralNetwork& net, const std::vector<double>& input) {
    if (static_cast<int>(input.size()) != net.input_dim) {
        throw DimensionMismatch("forward: input size does not match input_dim");
    }
    ForwardTrace trace;
    std::vector<double> h = input;
    int L = net.hidden_layer_count();
    for (int l = 0; l < L; ++l) {
        std::vector<double> t = net.layers[l].W.apply(h);
        for (size_t j = 0; j < t.size(); ++j) t[j] += net.layers[l].w[j];
        std::vector<double> act(t.size());
        std::vector<bool> phase(t.size());
        for (size_t j = 0; j < t.size(); ++j) {
            // An exactly-zero pre-activation counts as the inactive branch.
            phase[j] = t[j] > 0.0;
            act[j] = phase[j] ? t[j] : 0.0;
        }
        trace.pre.push_back(std::move(t));
        trace.post.push_back(act);
        trace.phase.push_back(std::move(phase));
        h = std::move(act);
    }
    std::vector<double> u = net.layers[L].W.apply(h);
    for (size_t j = 0; j < u.size(); ++j) u[j] += net.layers[L].w[j];
    trace.output = std::move(u);
    return trace;
}

namespace {

Matrix matrix_from_json(const nlohmann::json& j, size_t layer) {
    if (!j.is_array() || j.empty()) {
        throw ParseError("layer " + std::to_string(layer) +
                         ": \"W\" must be a non-empty array of rows");
    }
    int rows = static_cast<int>(j.size());
    int cols = -1;
    Matrix m;
    for (const auto& row : j) {
        if (!row.is_array()) {
            throw ParseError("layer " + std::to_string(layer) +
                             ": matrix row must be an array");
        }
        if (cols < 0) {
            cols = static_cast<int>(row.size());
            m = Matrix(rows, cols);
            m.data.clear();
        } else if (static_cast<int>(row.size()) != cols) {
            throw ParseError("layer " + std::to_string(layer) +
                             ": ragged matrix rows");
        }
        for (const auto& v : row) {
            if (!v.is_number()) {
                throw ParseError("layer " + std::to_string(layer) +
                                 ": matrix entry is not a number");
            }
            m.data.push_back(v.get<double>());
        }
    }
    return m;
}

}  // namespace

NeuralNetwork network_from_json_text(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("network JSON: ") + e.what());
    }
    NeuralNetwork net;
    if (!j.contains("layers") || !j["layers"].is_array() ||
        j["layers"].empty()) {
        throw ParseError("network JSON: missing \"layers\" array");
    }
    if (!j.contains("input_dim") || !j.contains("output_dim")) {
        throw ParseError("network JSON: missing input_dim/output_dim");
    }
    net.input_dim = j["input_dim"].get<int>();
    net.output_dim = j["output_dim"].get<int>();
    size_t idx = 0;
    for (const auto& lj : j["layers"]) {
        if (!lj.contains("W") || !lj.contains("w")) {
            throw ParseError("layer " + std::to_string(idx) +
                             ": needs \"W\" and \"w\"");
        }
        Layer layer;
        layer.W = matrix_from_json(lj["W"], idx);
        for (const auto& v : lj["w"]) {
            if (!v.is_number()) {
                throw ParseError("layer " + std::to_string(idx) +
                                 ": bias entry is not a number");
            }
            layer.w.push_back(v.get<double>());
        }
        net.layers.push_back(std::move(layer));
        ++idx;
    }
    validate(net);
    return net;
}

std::string network_to_json_text(const NeuralNetwork& net) {
    nlohmann::json j;
    j["input_dim"] = net.input_dim;
    j["output_dim"] = net.output_dim;
    j["layers"] = nlohmann::json::array();
    for (const Layer& layer : net.layers) {
        nlohmann::json lj;
        nlohmann::json W = nlohmann::json::array();
        for (int r = 0; r < layer.W.rows; ++r) {
            nlohmann::json row = nlohmann::json::array();
            for (int c = 0; c < layer.W.cols; ++c) row.push_back(layer.W.at(r, c));
            W.push_back(std::move(row));
        }
        lj["W"] = std::move(W);
        lj["w"] = layer.w;
        j["layers"].push_back(std::move(lj));
    }
    return j.dump(2);
}

NeuralNetwork load_network(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open network file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return network_from_json_text(ss.str());
}

void save_network(const NeuralNetwork& net, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write network file: " + path);
    out << network_to_json_text(net) << "\n";
}

}  // namespace nnv::nn

#pragma once

#include <string>
#include <vector>

namespace nnv::nn {

// Dense row-major matrix, sized for the small controllers this tool handles.
struct Matrix {
    int rows = 0;
    int cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(int r, int c) : rows(r), cols(c), data(static_cast<size_t>(r) * c) {}

    double& at(int r, int c) { return data[static_cast<size_t>(r) * cols + c]; }
    double at(int r, int c) const {
        return data[static_cast<size_t>(r) * cols + c];
    }

    std::vector<double> apply(const std::vector<double>& x) const;
};

struct Layer {
    Matrix W;
    std::vector<double> w;  // bias
};

// ReLU controller: hidden layers 0..L-1 feed ReLU units, the last layer is
// affine output. layers.size() == L + 1.
struct NeuralNetwork {
    std::vector<Layer> layers;
    int input_dim = 0;
    int output_dim = 0;

    int hidden_layer_count() const {
        return static_cast<int>(layers.size()) - 1;
    }
    int hidden_width(int l) const { return layers[l].W.rows; }  // l in 0..L-1
    int total_relu_count() const;
};

// Per-layer pre-activations, activations and ReLU phases for one input.
struct ForwardTrace {
    std::vector<std::vector<double>> pre;     // t^1..t^L
    std::vector<std::vector<double>> post;    // h^1..h^L
    std::vector<std::vector<bool>> phase;     // per layer, t > 0
    std::vector<double> output;               // u
};

// Checks the weight/bias dimension chain; throws DimensionMismatch naming the
// offending layer.
void validate(const NeuralNetwork& net);

ForwardTrace forward(const NeuralNetwork& net, const std::vector<double>& input);

// Network JSON:
// {"layers": [{"W": [[...]], "w": [...]}, ...],
//  "input_dim": 2N, "output_dim": m}
NeuralNetwork load_network(const std::string& path);
void save_network(const NeuralNetwork& net, const std::string& path);
NeuralNetwork network_from_json_text(const std::string& text);
std::string network_to_json_text(const NeuralNetwork& net);

}  // namespace nnv::nn

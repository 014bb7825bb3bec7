#pragma once
#include <cstddef>
#include <string>
#include <vector>

#include "brisket/rng.hpp"

namespace brisket {

enum class Activation { Relu, Tanh, Softmax, Linear };

std::string to_string(Activation activation);
Activation activation_from_string(const std::string& text);

// Fully connected network. weights[l] is row-major (dims[l+1] x dims[l]);
// flat vectors keep the math allocation-light and the layout obvious for
// serialization.
struct DenseNet {
    std::vector<int> dims;                     // layer widths, input first
    std::vector<Activation> activations;       // one per weight layer
    std::vector<std::vector<double>> weights;
    std::vector<std::vector<double>> biases;

    int input_size() const { return dims.front(); }
    int output_size() const { return dims.back(); }
    std::size_t layer_count() const { return weights.size(); }
};

// He-uniform weights (fan-in scaled), zero biases. Draws are consumed in
// layer order, row-major within a layer, so a given rng seed always yields
// the same network.
DenseNet make_net(const std::vector<int>& dims, const std::vector<Activation>& activations,
                  Rng& rng);

void validate_net(const DenseNet& net);

std::size_t parameter_count(const DenseNet& net);

std::vector<double> forward(const DenseNet& net, const std::vector<double>& input);

struct ForwardTrace {
    // layer_values[0] is the input, layer_values[l+1] the activation of
    // layer l; pre_activations[l] is layer l's affine output before the
    // activation function.
    std::vector<std::vector<double>> layer_values;
    std::vector<std::vector<double>> pre_activations;

    const std::vector<double>& output() const { return layer_values.back(); }
};

ForwardTrace forward_trace(const DenseNet& net, const std::vector<double>& input);

struct Gradients {
    std::vector<std::vector<double>> weights;
    std::vector<std::vector<double>> biases;
};

Gradients zero_gradients(const DenseNet& net);

// Backpropagates dL/d(output) through the trace. Softmax layers use the full
// Jacobian, so any loss can sit on top of them.
Gradients backward(const DenseNet& net, const ForwardTrace& trace,
                   const std::vector<double>& output_grad);

double mse_loss(const std::vector<double>& prediction, const std::vector<double>& target);
std::vector<double> mse_loss_grad(const std::vector<double>& prediction,
                                  const std::vector<double>& target);

// Cross entropy against a single class index; probabilities are floored to
// keep the log finite.
double cross_entropy_loss(const std::vector<double>& probabilities, int target_class);
std::vector<double> cross_entropy_grad(const std::vector<double>& probabilities,
                                       int target_class);

struct AdamState {
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    long long step = 0;
    Gradients m;
    Gradients v;
};

AdamState make_adam(const DenseNet& net);

// One Adam update in place. Rejects non-finite gradients outright rather
// than poisoning the weights.
void adam_step(DenseNet& net, const Gradients& grads, AdamState& state, double learning_rate);

} // namespace brisket

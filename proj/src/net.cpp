#include "brisket/net.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace brisket {
namespace {

constexpr double kProbFloor = 1e-12;

void apply_activation(Activation activation, std::vector<double>& values) {
    switch (activation) {
    case Activation::Relu:
        for (double& v : values) v = std::max(0.0, v);
        break;
    case Activation::Tanh:
        for (double& v : values) v = std::tanh(v);
        break;
    case Activation::Softmax: {
        double max_v = values.front();
        for (double v : values) max_v = std::max(max_v, v);
        double sum = 0.0;
        for (double& v : values) {
            v = std::exp(v - max_v);
            sum += v;
        }
        for (double& v : values) v /= sum;
        break;
    }
    case Activation::Linear:
        break;
    }
}

std::vector<double> affine(const DenseNet& net, std::size_t layer,
                           const std::vector<double>& input) {
    const int in = net.dims[layer];
    const int out = net.dims[layer + 1];
    const std::vector<double>& w = net.weights[layer];
    const std::vector<double>& b = net.biases[layer];
    std::vector<double> z(static_cast<std::size_t>(out));
    for (int o = 0; o < out; ++o) {
        double acc = b[static_cast<std::size_t>(o)];
        const double* row = w.data() + static_cast<std::size_t>(o) * static_cast<std::size_t>(in);
        for (int i = 0; i < in; ++i) acc += row[i] * input[static_cast<std::size_t>(i)];
        z[static_cast<std::size_t>(o)] = acc;
    }
    return z;
}

} // namespace

std::string to_string(Activation activation) {
    switch (activation) {
    case Activation::Relu: return "relu";
    case Activation::Tanh: return "tanh";
    case Activation::Softmax: return "softmax";
    case Activation::Linear: return "linear";
    }
    throw std::logic_error("unknown activation");
}

Activation activation_from_string(const std::string& text) {
    if (text == "relu") return Activation::Relu;
    if (text == "tanh") return Activation::Tanh;
    if (text == "softmax") return Activation::Softmax;
    if (text == "linear") return Activation::Linear;
    throw std::invalid_argument("unknown activation: " + text);
}

void validate_net(const DenseNet& net) {
    if (net.dims.size() < 2) throw std::invalid_argument("net needs at least one layer");
    if (net.activations.size() != net.dims.size() - 1)
        throw std::invalid_argument("activation count must match layer count");
    if (net.weights.size() != net.dims.size() - 1 || net.biases.size() != net.dims.size() - 1)
        throw std::invalid_argument("weight/bias layer count must match dims");
    for (std::size_t l = 0; l < net.weights.size(); ++l) {
        if (net.dims[l] <= 0 || net.dims[l + 1] <= 0)
            throw std::invalid_argument("layer widths must be positive");
        const std::size_t expected =
            static_cast<std::size_t>(net.dims[l]) * static_cast<std::size_t>(net.dims[l + 1]);
        if (net.weights[l].size() != expected)
            throw std::invalid_argument("layer " + std::to_string(l) + " weight size mismatch");
        if (net.biases[l].size() != static_cast<std::size_t>(net.dims[l + 1]))
            throw std::invalid_argument("layer " + std::to_string(l) + " bias size mismatch");
    }
}

DenseNet make_net(const std::vector<int>& dims, const std::vector<Activation>& activations,
                  Rng& rng) {
    DenseNet net;
    net.dims = dims;
    net.activations = activations;
    if (dims.size() < 2) throw std::invalid_argument("net needs at least one layer");
    if (activations.size() != dims.size() - 1)
        throw std::invalid_argument("activation count must match layer count");
    for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
        const int in = dims[l];
        const int out = dims[l + 1];
        if (in <= 0 || out <= 0) throw std::invalid_argument("layer widths must be positive");
        const double limit = std::sqrt(6.0 / in);
        std::vector<double> w(static_cast<std::size_t>(in) * static_cast<std::size_t>(out));
        for (double& v : w) v = rng.next_range(-limit, limit);
        net.weights.push_back(std::move(w));
        net.biases.emplace_back(static_cast<std::size_t>(out), 0.0);
    }
    return net;
}

std::size_t parameter_count(const DenseNet& net) {
    std::size_t total = 0;
    for (const auto& w : net.weights) total += w.size();
    for (const auto& b : net.biases) total += b.size();
    return total;
}

std::vector<double> forward(const DenseNet& net, const std::vector<double>& input) {
    if (static_cast<int>(input.size()) != net.input_size())
        throw std::invalid_argument("input size mismatch");
    std::vector<double> values = input;
    for (std::size_t l = 0; l < net.layer_count(); ++l) {
        values = affine(net, l, values);
        apply_activation(net.activations[l], values);
    }
    return values;
}

ForwardTrace forward_trace(const DenseNet& net, const std::vector<double>& input) {
    if (static_cast<int>(input.size()) != net.input_size())
        throw std::invalid_argument("input size mismatch");
    ForwardTrace trace;
    trace.layer_values.reserve(net.layer_count() + 1);
    trace.pre_activations.reserve(net.layer_count());
    trace.layer_values.push_back(input);
    for (std::size_t l = 0; l < net.layer_count(); ++l) {
        std::vector<double> z = affine(net, l, trace.layer_values.back());
        trace.pre_activations.push_back(z);
        apply_activation(net.activations[l], z);
        trace.layer_values.push_back(std::move(z));
    }
    return trace;
}

Gradients zero_gradients(const DenseNet& net) {
    Gradients g;
    g.weights.reserve(net.weights.size());
    g.biases.reserve(net.biases.size());
    for (const auto& w : net.weights) g.weights.emplace_back(w.size(), 0.0);
    for (const auto& b : net.biases) g.biases.emplace_back(b.size(), 0.0);
    return g;
}

Gradients backward(const DenseNet& net, const ForwardTrace& trace,
                   const std::vector<double>& output_grad) {
    if (output_grad.size() != trace.output().size())
        throw std::invalid_argument("output gradient size mismatch");
    Gradients grads = zero_gradients(net);

    std::vector<double> d = output_grad;  // dL/d(activation) of the current layer
    for (std::size_t l = net.layer_count(); l-- > 0;) {
        const int in = net.dims[l];
        const int out = net.dims[l + 1];
        const std::vector<double>& z = trace.pre_activations[l];
        const std::vector<double>& a = trace.layer_values[l + 1];
        const std::vector<double>& below = trace.layer_values[l];

        std::vector<double> dz(static_cast<std::size_t>(out));
        switch (net.activations[l]) {
        case Activation::Relu:
            for (int o = 0; o < out; ++o)
                dz[static_cast<std::size_t>(o)] =
                    z[static_cast<std::size_t>(o)] > 0.0 ? d[static_cast<std::size_t>(o)] : 0.0;
            break;
        case Activation::Tanh:
            for (int o = 0; o < out; ++o) {
                const double av = a[static_cast<std::size_t>(o)];
                dz[static_cast<std::size_t>(o)] = d[static_cast<std::size_t>(o)] * (1.0 - av * av);
            }
            break;
        case Activation::Softmax: {
            double dot = 0.0;
            for (int o = 0; o < out; ++o)
                dot += d[static_cast<std::size_t>(o)] * a[static_cast<std::size_t>(o)];
            for (int o = 0; o < out; ++o)
                dz[static_cast<std::size_t>(o)] =
                    a[static_cast<std::size_t>(o)] * (d[static_cast<std::size_t>(o)] - dot);
            break;
        }
        case Activation::Linear:
            dz = d;
            break;
        }

        std::vector<double>& gw = grads.weights[l];
        std::vector<double>& gb = grads.biases[l];
        for (int o = 0; o < out; ++o) {
            const double dzo = dz[static_cast<std::size_t>(o)];
            gb[static_cast<std::size_t>(o)] = dzo;
            double* row = gw.data() + static_cast<std::size_t>(o) * static_cast<std::size_t>(in);
            for (int i = 0; i < in; ++i) row[i] = dzo * below[static_cast<std::size_t>(i)];
        }

        if (l > 0) {
            std::vector<double> d_prev(static_cast<std::size_t>(in), 0.0);
            const std::vector<double>& w = net.weights[l];
            for (int o = 0; o < out; ++o) {
                const double dzo = dz[static_cast<std::size_t>(o)];
                const double* row =
                    w.data() + static_cast<std::size_t>(o) * static_cast<std::size_t>(in);
                for (int i = 0; i < in; ++i) d_prev[static_cast<std::size_t>(i)] += row[i] * dzo;
            }
            d = std::move(d_prev);
        }
    }
    return grads;
}

double mse_loss(const std::vector<double>& prediction, const std::vector<double>& target) {
    if (prediction.size() != target.size())
        throw std::invalid_argument("mse size mismatch");
    double acc = 0.0;
    for (std::size_t i = 0; i < prediction.size(); ++i) {
        const double diff = prediction[i] - target[i];
        acc += diff * diff;
    }
    return acc / static_cast<double>(prediction.size());
}

std::vector<double> mse_loss_grad(const std::vector<double>& prediction,
                                  const std::vector<double>& target) {
    if (prediction.size() != target.size())
        throw std::invalid_argument("mse size mismatch");
    std::vector<double> grad(prediction.size());
    const double scale = 2.0 / static_cast<double>(prediction.size());
    for (std::size_t i = 0; i < prediction.size(); ++i)
        grad[i] = scale * (prediction[i] - target[i]);
    return grad;
}

double cross_entropy_loss(const std::vector<double>& probabilities, int target_class) {
    if (target_class < 0 || static_cast<std::size_t>(target_class) >= probabilities.size())
        throw std::invalid_argument("target class out of range");
    return -std::log(std::max(probabilities[static_cast<std::size_t>(target_class)], kProbFloor));
}

std::vector<double> cross_entropy_grad(const std::vector<double>& probabilities,
                                       int target_class) {
    if (target_class < 0 || static_cast<std::size_t>(target_class) >= probabilities.size())
        throw std::invalid_argument("target class out of range");
    std::vector<double> grad(probabilities.size(), 0.0);
    grad[static_cast<std::size_t>(target_class)] =
        -1.0 / std::max(probabilities[static_cast<std::size_t>(target_class)], kProbFloor);
    return grad;
}

AdamState make_adam(const DenseNet& net) {
    AdamState state;
    state.m = zero_gradients(net);
    state.v = zero_gradients(net);
    return state;
}

void adam_step(DenseNet& net, const Gradients& grads, AdamState& state, double learning_rate) {
    if (grads.weights.size() != net.weights.size() || grads.biases.size() != net.biases.size())
        throw std::invalid_argument("gradient layer count mismatch");
    state.step += 1;
    const double bias1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.step));
    const double bias2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.step));

    const auto update = [&](std::vector<double>& params, const std::vector<double>& g,
                            std::vector<double>& m, std::vector<double>& v) {
        if (g.size() != params.size())
            throw std::invalid_argument("gradient size mismatch");
        for (std::size_t i = 0; i < params.size(); ++i) {
            if (!std::isfinite(g[i])) throw std::runtime_error("non-finite gradient");
            m[i] = state.beta1 * m[i] + (1.0 - state.beta1) * g[i];
            v[i] = state.beta2 * v[i] + (1.0 - state.beta2) * g[i] * g[i];
            const double m_hat = m[i] / bias1;
            const double v_hat = v[i] / bias2;
            params[i] -= learning_rate * m_hat / (std::sqrt(v_hat) + state.epsilon);
        }
    };

    for (std::size_t l = 0; l < net.weights.size(); ++l) {
        update(net.weights[l], grads.weights[l], state.m.weights[l], state.v.weights[l]);
        update(net.biases[l], grads.biases[l], state.m.biases[l], state.v.biases[l]);
    }
}

} // namespace brisket

#include "radlabel/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "radlabel/errors.hpp"
#include "radlabel/prng.hpp"

namespace radlabel {

std::vector<double> concat_features(std::span<const double> text_features, std::span<const double> image_features) {
    std::vector<double> out;
    out.reserve(text_features.size() + image_features.size());
    out.insert(out.end(), text_features.begin(), text_features.end());
    out.insert(out.end(), image_features.begin(), image_features.end());
    return out;
}

double sigmoid(double z) {
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    double e = std::exp(z);
    return e / (1.0 + e);
}

namespace {

void check_shape(const HeadParams& p) {
    if (p.weights.size() != p.labels * p.features || p.bias.size() != p.labels) {
        throw ContractError("head parameters have inconsistent shapes");
    }
}

std::vector<double> logits(const HeadParams& p, std::span<const double> x) {
    check_shape(p);
    if (x.size() != p.features) {
        throw ContractError("feature vector has " + std::to_string(x.size()) + " entries, head expects " +
                            std::to_string(p.features));
    }
    std::vector<double> z(p.labels);
    for (std::size_t j = 0; j < p.labels; ++j) {
        double acc = p.bias[j];
        for (std::size_t k = 0; k < p.features; ++k) acc += p.w(j, k) * x[k];
        z[j] = acc;
    }
    return z;
}

double clip(double p) { return std::clamp(p, kProbabilityClip, 1.0 - kProbabilityClip); }

double entry_loss(double p, double y, double w) {
    p = clip(p);
    return -w * (y * std::log(p) + (1.0 - y) * std::log(1.0 - p));
}

// d loss_entry / d z for p = sigmoid(z), before the 1/N factor.
double entry_slope(double p, double y, double w) {
    if (p < kProbabilityClip || p > 1.0 - kProbabilityClip) return 0.0;
    return w * (p - y);
}

std::vector<double> resolve_weights(std::span<const double> label_weights, std::size_t labels) {
    if (label_weights.empty()) return std::vector<double>(labels, 1.0);
    if (label_weights.size() != labels) throw ContractError("one class weight per label is required");
    return {label_weights.begin(), label_weights.end()};
}

void check_dataset(const HeadParams& p, const Dataset& d) {
    if (d.features != p.features || d.labels != p.labels) throw ContractError("dataset shape does not match head");
    if (d.x.size() != d.size() * d.features) throw ContractError("dataset feature matrix has the wrong size");
}

} // namespace

std::vector<double> forward(const HeadParams& params, std::span<const double> x) {
    auto z = logits(params, x);
    for (auto& v : z) v = sigmoid(v);
    return z;
}

double wbce_loss(std::span<const double> y_hat, std::span<const double> y, std::span<const double> weights) {
    if (y_hat.size() != y.size() || y.size() != weights.size()) {
        throw ContractError("probabilities, labels and weights must have equal length");
    }
    if (y.empty()) throw ContractError("loss over zero entries");
    double sum = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) sum += entry_loss(y_hat[i], y[i], weights[i]);
    return sum / static_cast<double>(y.size());
}

HeadGradient wbce_grad(const HeadParams& params, std::span<const double> x, std::span<const double> y,
                       std::span<const double> label_weights) {
    if (y.size() != params.labels) throw ContractError("label vector does not match head");
    auto w = resolve_weights(label_weights, params.labels);
    auto p = forward(params, x);
    HeadGradient g{std::vector<double>(params.weights.size(), 0.0), std::vector<double>(params.labels, 0.0)};
    const double n = static_cast<double>(params.labels);
    for (std::size_t j = 0; j < params.labels; ++j) {
        double dz = entry_slope(p[j], y[j], w[j]) / n;
        g.d_bias[j] = dz;
        for (std::size_t k = 0; k < params.features; ++k) g.d_weights[j * params.features + k] = dz * x[k];
    }
    return g;
}

double dataset_loss(const HeadParams& params, const Dataset& data, std::span<const double> label_weights) {
    check_dataset(params, data);
    if (data.size() == 0) throw ContractError("loss over an empty dataset");
    auto w = resolve_weights(label_weights, params.labels);
    double sum = 0.0;
    for (std::size_t s = 0; s < data.size(); ++s) {
        auto p = forward(params, data.sample(s));
        auto y = data.target(s);
        for (std::size_t j = 0; j < params.labels; ++j) sum += entry_loss(p[j], y[j], w[j]);
    }
    return sum / static_cast<double>(data.size() * params.labels);
}

HeadGradient dataset_grad(const HeadParams& params, const Dataset& data, std::span<const double> label_weights) {
    check_dataset(params, data);
    if (data.size() == 0) throw ContractError("gradient over an empty dataset");
    auto w = resolve_weights(label_weights, params.labels);
    HeadGradient g{std::vector<double>(params.weights.size(), 0.0), std::vector<double>(params.labels, 0.0)};
    const double n = static_cast<double>(data.size() * params.labels);
    for (std::size_t s = 0; s < data.size(); ++s) {
        auto x = data.sample(s);
        auto p = forward(params, x);
        auto y = data.target(s);
        for (std::size_t j = 0; j < params.labels; ++j) {
            double dz = entry_slope(p[j], y[j], w[j]) / n;
            g.d_bias[j] += dz;
            for (std::size_t k = 0; k < params.features; ++k) g.d_weights[j * params.features + k] += dz * x[k];
        }
    }
    return g;
}

TrainResult train_head(const Dataset& train, const Dataset& validation, const TrainConfig& cfg) {
    if (train.size() == 0 || validation.size() == 0) throw InputError("training and validation splits must be non-empty");
    if (train.features != validation.features || train.labels != validation.labels) {
        throw InputError("training and validation splits have different shapes");
    }
    if (!(cfg.learning_rate > 0.0) || !std::isfinite(cfg.learning_rate)) throw InputError("learning rate must be positive");
    if (cfg.max_epochs == 0) throw InputError("max_epochs must be at least 1");
    if (cfg.patience > cfg.max_epochs) throw InputError("patience cannot exceed max_epochs");

    HeadParams params(train.labels, train.features);
    Xoshiro256 rng(cfg.seed);
    for (auto& v : params.weights) v = rng.uniform(-0.01, 0.01);
    for (auto& v : params.bias) v = rng.uniform(-0.01, 0.01);
    auto weights = resolve_weights(cfg.weights, params.labels);

    TrainResult result;
    result.params = params;
    double best = 0.0;
    std::size_t stale = 0;
    for (std::size_t epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
        auto g = dataset_grad(params, train, weights);
        for (std::size_t i = 0; i < params.weights.size(); ++i) params.weights[i] -= cfg.learning_rate * g.d_weights[i];
        for (std::size_t j = 0; j < params.labels; ++j) params.bias[j] -= cfg.learning_rate * g.d_bias[j];

        EpochRecord rec{epoch, dataset_loss(params, train, weights), dataset_loss(params, validation, weights)};
        result.history.push_back(rec);
        if (result.best_epoch == 0 || rec.val_loss < best) {
            best = rec.val_loss;
            result.best_epoch = epoch;
            result.params = params;
            stale = 0;
        } else if (++stale > cfg.patience) {
            break;
        }
    }
    return result;
}

} // namespace radlabel

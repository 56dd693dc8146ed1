#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace radlabel {

// Linear multi-label head: probabilities = sigmoid(W x + b).
struct HeadParams {
    std::size_t labels = 0;
    std::size_t features = 0;
    std::vector<double> weights;  // labels x features, row-major
    std::vector<double> bias;     // labels

    HeadParams() = default;
    HeadParams(std::size_t labels, std::size_t features)
        : labels(labels), features(features), weights(labels * features, 0.0), bias(labels, 0.0) {}

    double& w(std::size_t label, std::size_t feature) { return weights[label * features + feature]; }
    double w(std::size_t label, std::size_t feature) const { return weights[label * features + feature]; }
    bool operator==(const HeadParams&) const = default;
};

// Row-major samples: x is size() x features, y is size() x labels with 0/1 targets.
struct Dataset {
    std::size_t features = 0;
    std::size_t labels = 0;
    std::vector<double> x;
    std::vector<double> y;

    std::size_t size() const { return labels == 0 ? 0 : y.size() / labels; }
    std::span<const double> sample(std::size_t i) const { return std::span(x).subspan(i * features, features); }
    std::span<const double> target(std::size_t i) const { return std::span(y).subspan(i * labels, labels); }
};

// Text features first, then image features.
std::vector<double> concat_features(std::span<const double> text_features, std::span<const double> image_features);

double sigmoid(double z);

// Throws ContractError on a shape mismatch.
std::vector<double> forward(const HeadParams& params, std::span<const double> x);

inline constexpr double kProbabilityClip = 1e-12;

// -(1/N) sum_i w_i [y_i log p_i + (1 - y_i) log(1 - p_i)] with p clipped to
// [eps, 1 - eps]. All three spans have length N.
double wbce_loss(std::span<const double> y_hat, std::span<const double> y, std::span<const double> weights);

struct HeadGradient {
    std::vector<double> d_weights;
    std::vector<double> d_bias;
};

// Gradient of wbce_loss(forward(params, x), y, label_weights) for one sample.
// Where clipping is active the loss is flat, so the gradient there is zero.
HeadGradient wbce_grad(const HeadParams& params, std::span<const double> x, std::span<const double> y,
                       std::span<const double> label_weights);

// Mean over all samples and labels; label_weights has one entry per label.
double dataset_loss(const HeadParams& params, const Dataset& data, std::span<const double> label_weights);
HeadGradient dataset_grad(const HeadParams& params, const Dataset& data, std::span<const double> label_weights);

struct TrainConfig {
    double learning_rate = 0.1;
    std::size_t max_epochs = 100;
    std::size_t patience = 5;
    std::vector<double> weights;  // per label; empty means all 1
    std::uint64_t seed = 0;
};

struct EpochRecord {
    std::size_t epoch = 0;  // 1-based
    double train_loss = 0.0;
    double val_loss = 0.0;

    bool operator==(const EpochRecord&) const = default;
};

struct TrainResult {
    HeadParams params;  // from best_epoch
    std::vector<EpochRecord> history;
    std::size_t best_epoch = 0;
};

// Full-batch gradient descent from U(-0.01, 0.01) initial parameters. Stops
// once the validation loss has failed to improve on its best for more than
// `patience` consecutive epochs, or after max_epochs.
TrainResult train_head(const Dataset& train, const Dataset& validation, const TrainConfig& config);

} // namespace radlabel

#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "radlabel/errors.hpp"
#include "radlabel/numerics.hpp"

using namespace radlabel;

namespace {

HeadParams random_head(std::mt19937_64& rng, std::size_t m, std::size_t d, double scale) {
    std::uniform_real_distribution<double> u(-scale, scale);
    HeadParams p(m, d);
    for (auto& w : p.weights) w = u(rng);
    for (auto& b : p.bias) b = u(rng);
    return p;
}

// Two separable blobs; every label follows the blob.
Dataset toy_set(std::mt19937_64& rng, std::size_t n) {
    std::normal_distribution<double> noise(0.0, 0.2);
    Dataset d{2, 2, {}, {}};
    for (std::size_t i = 0; i < n; ++i) {
        bool pos = i % 2 == 0;
        d.x.push_back((pos ? 1.0 : -1.0) + noise(rng));
        d.x.push_back((pos ? 0.5 : -0.5) + noise(rng));
        d.y.push_back(pos);
        d.y.push_back(!pos);
    }
    return d;
}

} // namespace

TEST_CASE("feature concatenation") {
    CHECK(concat_features(std::vector<double>{1, 2}, std::vector<double>{3}) == std::vector<double>{1, 2, 3});
    CHECK(concat_features(std::vector<double>{}, std::vector<double>{5}) == std::vector<double>{5});
    CHECK(concat_features(std::vector<double>(4), std::vector<double>(6)).size() == 10);
}

TEST_CASE("forward pass") {
    HeadParams zero(3, 4);
    for (double p : forward(zero, std::vector<double>(4, 1.7))) CHECK(p == 0.5);

    HeadParams sat(1, 1);
    sat.bias[0] = 30.0;
    CHECK(std::abs(forward(sat, std::vector<double>{0.0})[0] - 1.0) < 1e-12);

    CHECK_THROWS_AS(forward(zero, std::vector<double>(3)), ContractError);
    HeadParams broken(2, 2);
    broken.bias.pop_back();
    CHECK_THROWS_AS(forward(broken, std::vector<double>(2)), ContractError);
}

TEST_CASE("forward matches a scalar loop") {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int iter = 0; iter < 100; ++iter) {
        auto p = random_head(rng, 1 + rng() % 4, 1 + rng() % 6, 2.0);
        std::vector<double> x(p.features);
        for (auto& v : x) v = u(rng);
        auto got = forward(p, x);
        for (std::size_t j = 0; j < p.labels; ++j) {
            double z = p.bias[j];
            for (std::size_t k = 0; k < p.features; ++k) z += p.weights[j * p.features + k] * x[k];
            CHECK(got[j] == doctest::Approx(1.0 / (1.0 + std::exp(-z))).epsilon(1e-14));
            CHECK(got[j] > 0.0);
            CHECK(got[j] < 1.0);
        }
    }
}

TEST_CASE("weighted binary cross-entropy values") {
    std::vector<double> w2{2.0}, y1{1.0}, half{0.5};
    CHECK(wbce_loss(half, y1, w2) == doctest::Approx(2.0 * std::log(2.0)).epsilon(1e-15));

    std::vector<double> exact{1.0, 0.0, 1.0}, labels{1.0, 0.0, 1.0}, ones(3, 1.0);
    CHECK(wbce_loss(exact, labels, ones) <= -std::log(1.0 - kProbabilityClip) + 1e-18);

    std::vector<double> p{0.2, 0.7, 0.9}, y{0.0, 1.0, 1.0};
    double plain = 0.0;
    for (std::size_t i = 0; i < 3; ++i) plain -= y[i] * std::log(p[i]) + (1 - y[i]) * std::log(1 - p[i]);
    CHECK(wbce_loss(p, y, ones) == doctest::Approx(plain / 3.0).epsilon(1e-15));

    std::vector<double> zero_p{0.0}, zero_y{1.0}, one_w{1.0};
    CHECK(std::isfinite(wbce_loss(zero_p, zero_y, one_w)));
    CHECK_THROWS_AS(wbce_loss(p, y, w2), ContractError);
}

TEST_CASE("gradient vanishes at a perfect fit") {
    HeadParams p(2, 3);
    std::vector<double> x{0.4, -1.0, 2.0};
    std::vector<double> y = forward(p, x);
    auto g = wbce_grad(p, x, y, std::vector<double>{1.0, 3.0});
    for (double v : g.d_weights) CHECK(std::abs(v) <= 1e-9);
    for (double v : g.d_bias) CHECK(std::abs(v) <= 1e-9);
}

TEST_CASE("doubling the weights doubles the gradient exactly") {
    std::mt19937_64 rng(4);
    auto p = random_head(rng, 3, 4, 1.0);
    std::vector<double> x{0.1, -0.2, 0.3, 0.9}, y{1.0, 0.0, 1.0};
    auto g1 = wbce_grad(p, x, y, std::vector<double>(3, 1.0));
    auto g2 = wbce_grad(p, x, y, std::vector<double>(3, 2.0));
    for (std::size_t i = 0; i < g1.d_weights.size(); ++i) CHECK(g2.d_weights[i] == 2.0 * g1.d_weights[i]);
    for (std::size_t i = 0; i < g1.d_bias.size(); ++i) CHECK(g2.d_bias[i] == 2.0 * g1.d_bias[i]);
}

TEST_CASE("dataset gradient agrees with finite differences") {
    std::mt19937_64 rng(6);
    auto data = toy_set(rng, 12);
    auto p = random_head(rng, 2, 2, 0.5);
    std::vector<double> w{1.5, 0.5};
    auto g = dataset_grad(p, data, w);
    const double h = 1e-6;
    for (std::size_t i = 0; i < p.weights.size(); ++i) {
        auto plus = p, minus = p;
        plus.weights[i] += h;
        minus.weights[i] -= h;
        double fd = (dataset_loss(plus, data, w) - dataset_loss(minus, data, w)) / (2 * h);
        CHECK(g.d_weights[i] == doctest::Approx(fd).epsilon(1e-6));
    }
}

TEST_CASE("inverse-frequency weighted loss is unchanged by duplicating the data") {
    std::mt19937_64 rng(10);
    auto data = toy_set(rng, 10);
    auto twice = data;
    twice.x.insert(twice.x.end(), data.x.begin(), data.x.end());
    twice.y.insert(twice.y.end(), data.y.begin(), data.y.end());
    auto p = random_head(rng, 2, 2, 1.0);
    std::vector<double> w{10.0 / (2.0 * 5.0), 10.0 / (2.0 * 5.0)};
    std::vector<double> w_twice{20.0 / (2.0 * 10.0), 20.0 / (2.0 * 10.0)};
    CHECK(dataset_loss(p, twice, w_twice) == doctest::Approx(dataset_loss(p, data, w)).epsilon(1e-14));
}

TEST_CASE("training on a separable toy set") {
    std::mt19937_64 rng(12);
    auto train = toy_set(rng, 40);
    auto val = toy_set(rng, 20);
    TrainConfig cfg;
    cfg.learning_rate = 0.5;
    cfg.max_epochs = 60;
    cfg.patience = 5;
    cfg.seed = 99;
    auto r = train_head(train, val, cfg);
    REQUIRE(r.history.size() >= 10);
    for (std::size_t i = 1; i < 10; ++i) CHECK(r.history[i].train_loss < r.history[i - 1].train_loss);

    auto best = std::min_element(r.history.begin(), r.history.end(),
                                 [](const EpochRecord& a, const EpochRecord& b) { return a.val_loss < b.val_loss; });
    CHECK(r.best_epoch == best->epoch);
    CHECK(dataset_loss(r.params, val, {}) == best->val_loss);

    auto again = train_head(train, val, cfg);
    CHECK(again.history == r.history);
    CHECK(again.params == r.params);
}

TEST_CASE("zero patience stops at the first non-improvement") {
    std::mt19937_64 rng(14);
    auto train = toy_set(rng, 20);
    auto val = train;
    // Drive the validation loss up by flipping its targets.
    for (auto& v : val.y) v = 1.0 - v;
    TrainConfig cfg;
    cfg.learning_rate = 0.5;
    cfg.max_epochs = 50;
    cfg.patience = 0;
    auto r = train_head(train, val, cfg);
    CHECK(r.history.size() == 2);
    CHECK(r.best_epoch == 1);
}

TEST_CASE("trainer input validation") {
    std::mt19937_64 rng(15);
    auto data = toy_set(rng, 6);
    Dataset empty{2, 2, {}, {}};
    TrainConfig cfg;
    CHECK_THROWS_AS(train_head(empty, data, cfg), InputError);
    CHECK_THROWS_AS(train_head(data, empty, cfg), InputError);
    cfg.patience = cfg.max_epochs + 1;
    CHECK_THROWS_AS(train_head(data, data, cfg), InputError);
    cfg.patience = 1;
    cfg.learning_rate = 0.0;
    CHECK_THROWS_AS(train_head(data, data, cfg), InputError);
}

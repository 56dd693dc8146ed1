#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "fixtures.hpp"
#include "radlabel/errors.hpp"
#include "radlabel/gradcam.hpp"

using namespace radlabel;

namespace {

Grid grid(std::size_t h, std::size_t w, std::vector<double> v) {
    Grid g(h, w);
    g.values = std::move(v);
    return g;
}

Tensor3 random_tensor(std::mt19937_64& rng, std::size_t c, std::size_t h, std::size_t w) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Tensor3 t(c, h, w);
    for (auto& v : t.data) v = u(rng);
    return t;
}

} // namespace

TEST_CASE("channel weights are gradient means") {
    Tensor3 ones(1, 3, 5);
    std::fill(ones.data.begin(), ones.data.end(), 1.0);
    CHECK(gap_weights(ones) == std::vector<double>{1.0});
    Tensor3 t(1, 2, 2);
    t.data = {1, 2, 3, 4};
    CHECK(gap_weights(t) == std::vector<double>{2.5});
    t.data = {0.5, -0.5, 2.0, -2.0};
    CHECK(gap_weights(t) == std::vector<double>{0.0});
}

TEST_CASE("channel permutation permutes the weights") {
    std::mt19937_64 rng(3);
    auto t = random_tensor(rng, 4, 3, 3);
    Tensor3 p(4, 3, 3);
    const std::size_t perm[] = {2, 0, 3, 1};
    for (std::size_t c = 0; c < 4; ++c)
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 3; ++j) p.at(c, i, j) = t.at(perm[c], i, j);
    auto a = gap_weights(t), b = gap_weights(p);
    for (std::size_t c = 0; c < 4; ++c) CHECK(b[c] == a[perm[c]]);
}

TEST_CASE("class activation map examples") {
    Tensor3 maps(2, 1, 2);
    maps.data = {1, -1, -2, 2};
    std::vector<double> alpha{1.0, 1.0};
    CHECK(weighted_sum(alpha, maps).values == std::vector<double>{-1.0, 1.0});
    CHECK(cam(alpha, maps).values == std::vector<double>{0.0, 1.0});

    Tensor3 neg(2, 2, 2);
    std::fill(neg.data.begin(), neg.data.end(), -0.5);
    for (double v : cam(std::vector<double>{0.3, 2.0}, neg).values) CHECK(v == 0.0);
    for (double v : cam(std::vector<double>{0.0, 0.0}, maps).values) CHECK(v == 0.0);
    CHECK_THROWS_AS(cam(std::vector<double>{1.0}, maps), ContractError);
}

TEST_CASE("scaling the weights scales the pre-activation map") {
    std::mt19937_64 rng(5);
    for (int iter = 0; iter < 100; ++iter) {
        auto maps = random_tensor(rng, 3, 4, 4);
        std::vector<double> a{0.3, -0.7, 1.1}, a2{0.6, -1.4, 2.2};
        auto s1 = weighted_sum(a, maps), s2 = weighted_sum(a2, maps);
        auto c1 = cam(a, maps), c2 = cam(a2, maps);
        for (std::size_t i = 0; i < s1.values.size(); ++i) {
            CHECK(s2.values[i] == 2.0 * s1.values[i]);
            CHECK((c1.values[i] == 0.0) == (c2.values[i] == 0.0));
        }
    }
}

TEST_CASE("bilinear upsampling of the ramp example") {
    auto up = upsample(grid(2, 2, {0, 1, 0, 1}), 2, 4, Resample::Bilinear);
    CHECK(up.values == std::vector<double>{0, 0.25, 0.75, 1, 0, 0.25, 0.75, 1});
}

TEST_CASE("nearest upsampling uses pixel centres") {
    auto up = upsample(grid(1, 2, {3, 7}), 1, 4, Resample::Nearest);
    CHECK(up.values == std::vector<double>{3, 3, 7, 7});
    auto down = upsample(grid(1, 4, {1, 2, 3, 4}), 1, 2, Resample::Nearest);
    CHECK(down.values == std::vector<double>{2, 4});
}

TEST_CASE("identity size and constant maps are preserved") {
    std::mt19937_64 rng(7);
    auto t = random_tensor(rng, 1, 5, 3);
    Grid g = grid(5, 3, t.data);
    for (auto mode : {Resample::Nearest, Resample::Bilinear}) {
        CHECK(upsample(g, 5, 3, mode) == g);
        for (auto [h, w] : {std::pair<std::size_t, std::size_t>{1, 1}, {7, 2}, {13, 29}}) {
            for (double v : upsample(grid(2, 3, std::vector<double>(6, 0.37)), h, w, mode).values) CHECK(v == 0.37);
        }
    }
    CHECK_THROWS_AS(upsample(g, 0, 3, Resample::Bilinear), ContractError);
}

TEST_CASE("max normalization") {
    CHECK(normalize_map(grid(2, 2, {0, 2, 4, 8})).values == std::vector<double>{0, 0.25, 0.5, 1});
    CHECK(normalize_map(grid(1, 3, {0, 0, 0})).values == std::vector<double>{0, 0, 0});
    auto once = normalize_map(grid(1, 3, {0.2, 1.0, 0.5}));
    CHECK(normalize_map(once) == once);
}

TEST_CASE("fixture tensors give the hand-derived map and golden exports") {
    auto maps = parse_tensor(fixtures::read("gradcam/maps.tnsr"));
    auto grads = parse_tensor(fixtures::read("gradcam/grads.tnsr"));
    auto alpha = gap_weights(grads);
    CHECK(alpha == std::vector<double>{1.0, 1.0});
    CHECK(cam(alpha, maps).values == std::vector<double>{0, 1, 0, 1});
    auto heat = gradcam_heatmap(maps, grads, 2, 4);
    CHECK(heat.values == std::vector<double>{0, 0.25, 0.75, 1, 0, 0.25, 0.75, 1});
    CHECK(heatmap_to_pgm(heat) == fixtures::read("gradcam/heatmap_2x4.pgm"));
    CHECK(heatmap_to_pgm(gradcam_heatmap(maps, grads, 320, 320)) == fixtures::read("gradcam/heatmap_320.pgm"));
}

TEST_CASE("cam output is non-negative for random tensors") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int iter = 0; iter < 200; ++iter) {
        auto maps = random_tensor(rng, 1 + rng() % 4, 1 + rng() % 5, 1 + rng() % 5);
        std::vector<double> a(maps.channels);
        for (auto& v : a) v = u(rng);
        auto c = cam(a, maps);
        CHECK(*std::min_element(c.values.begin(), c.values.end()) >= 0.0);
    }
}

TEST_CASE("quantization rounds half away from zero") {
    CHECK(quantize(grid(1, 4, {0.0, 0.25, 0.75, 1.0})) == std::vector<std::uint8_t>{0, 64, 191, 255});
    CHECK(quantize(grid(1, 1, {0.5 / 255.0})) == std::vector<std::uint8_t>{1});
    CHECK_THROWS_AS(quantize(grid(1, 1, {1.5})), ContractError);
}

TEST_CASE("image preprocessing") {
    Raster flat{3, 5, std::vector<std::uint8_t>(15, 128)};
    for (double v : preprocess_image(flat).values) CHECK(v == 128.0 / 255.0);
    CHECK(preprocess_image(flat).values.size() == 320u * 320u);

    Raster same{320, 320, std::vector<std::uint8_t>(320 * 320)};
    for (std::size_t i = 0; i < same.pixels.size(); ++i) same.pixels[i] = static_cast<std::uint8_t>(i * 7 % 256);
    auto out = preprocess_image(same);
    for (std::size_t i = 0; i < same.pixels.size(); ++i) CHECK(out.values[i] == same.pixels[i] / 255.0);

    Raster checker{2, 2, {0, 255, 255, 0}};
    auto c = preprocess_image(checker, 4, 4);
    // u + v - 2uv on the clamped source grid {0, .25, .75, 1}.
    const double g[] = {0.0, 0.25, 0.75, 1.0};
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) CHECK(c.at(i, j) == doctest::Approx(g[i] + g[j] - 2 * g[i] * g[j]).epsilon(1e-15));

    CHECK_THROWS_AS(preprocess_image(Raster{0, 0, {}}), InputError);
}

TEST_CASE("tensor text format") {
    auto t = parse_tensor("# comment\n\n1 2 3\n1 2 3\n-4.5 5e-1 +6\n");
    CHECK(t.channels == 1);
    CHECK(t.data == std::vector<double>{1, 2, 3, -4.5, 0.5, 6});
    CHECK(parse_tensor(format_tensor(t)) == t);
    CHECK_THROWS_AS(parse_tensor("1 2 2\n1 2\n"), InputError);
    CHECK_THROWS_AS(parse_tensor("1 1 2\n1 x\n"), InputError);
    CHECK_THROWS_AS(parse_tensor("0 1 1\n"), InputError);
    CHECK_THROWS_AS(parse_tensor(""), InputError);
}

TEST_CASE("PGM reading") {
    auto p2 = parse_pgm(fixtures::read("gradcam/checker.pgm"));
    CHECK(p2.width == 2);
    CHECK(p2.pixels == std::vector<std::uint8_t>{0, 255, 255, 0});
    std::string p5 = "P5\n2 1\n255\n";
    p5 += static_cast<char>(10);
    p5 += static_cast<char>(200);
    CHECK(parse_pgm(p5).pixels == std::vector<std::uint8_t>{10, 200});
    CHECK(parse_pgm("P2 1 2 15 0 15").pixels == std::vector<std::uint8_t>{0, 255});
    CHECK_THROWS_AS(parse_pgm("P3\n1 1\n255\n0 0 0"), InputError);
    CHECK_THROWS_AS(parse_pgm("P2\n2 2\n255\n1 2 3"), InputError);
    CHECK_THROWS_AS(parse_pgm("P2\n1 1\n1000\n5"), InputError);
}

TEST_CASE("size strings") {
    CHECK(parse_size("320x320") == std::pair<std::size_t, std::size_t>{320, 320});
    CHECK(parse_size("2x4") == std::pair<std::size_t, std::size_t>{2, 4});
    CHECK_THROWS_AS(parse_size("320"), InputError);
    CHECK_THROWS_AS(parse_size("0x5"), InputError);
}

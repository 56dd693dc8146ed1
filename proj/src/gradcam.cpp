#include "radlabel/gradcam.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <utility>

#include "radlabel/errors.hpp"
#include "radlabel/text.hpp"

namespace radlabel {

void check_tensor(const Tensor3& t) {
    if (t.channels == 0 || t.height == 0 || t.width == 0) throw ContractError("tensor dimensions must be positive");
    if (t.data.size() != t.channels * t.height * t.width) throw ContractError("tensor data length does not match C*H*W");
    for (double v : t.data) {
        if (!std::isfinite(v)) throw ContractError("tensor contains a non-finite entry");
    }
}

std::vector<double> gap_weights(const Tensor3& grads) {
    check_tensor(grads);
    std::vector<double> alphas(grads.channels);
    const double z = static_cast<double>(grads.height * grads.width);
    for (std::size_t c = 0; c < grads.channels; ++c) {
        double sum = 0.0;
        for (double v : grads.channel(c)) sum += v;
        alphas[c] = sum / z;
    }
    return alphas;
}

Grid weighted_sum(std::span<const double> alphas, const Tensor3& maps) {
    check_tensor(maps);
    if (alphas.size() != maps.channels) {
        throw ContractError("expected " + std::to_string(maps.channels) + " channel weights, got " +
                            std::to_string(alphas.size()));
    }
    Grid out(maps.height, maps.width);
    for (std::size_t c = 0; c < maps.channels; ++c) {
        auto plane = maps.channel(c);
        for (std::size_t p = 0; p < plane.size(); ++p) out.values[p] += alphas[c] * plane[p];
    }
    return out;
}

Grid cam(std::span<const double> alphas, const Tensor3& maps) {
    Grid out = weighted_sum(alphas, maps);
    for (auto& v : out.values) v = std::max(v, 0.0);
    return out;
}

namespace {

struct Tap {
    std::size_t lo;
    std::size_t hi;
    double t;
};

std::vector<Tap> bilinear_taps(std::size_t in, std::size_t out) {
    const double scale = static_cast<double>(in) / static_cast<double>(out);
    const double last = static_cast<double>(in - 1);
    std::vector<Tap> taps(out);
    for (std::size_t d = 0; d < out; ++d) {
        double src = std::clamp((static_cast<double>(d) + 0.5) * scale - 0.5, 0.0, last);
        auto lo = static_cast<std::size_t>(std::floor(src));
        taps[d] = {lo, std::min(lo + 1, in - 1), src - static_cast<double>(lo)};
    }
    return taps;
}

std::vector<std::size_t> nearest_taps(std::size_t in, std::size_t out) {
    const double scale = static_cast<double>(in) / static_cast<double>(out);
    std::vector<std::size_t> taps(out);
    for (std::size_t d = 0; d < out; ++d) {
        auto idx = static_cast<std::size_t>(std::floor((static_cast<double>(d) + 0.5) * scale));
        taps[d] = std::min(idx, in - 1);
    }
    return taps;
}

// Written as a + (b - a) t so equal endpoints reproduce exactly.
double lerp(double a, double b, double t) { return a + (b - a) * t; }

void check_grid(const Grid& g) {
    if (g.height == 0 || g.width == 0) throw ContractError("map dimensions must be positive");
    if (g.values.size() != g.height * g.width) throw ContractError("map data length does not match H*W");
}

} // namespace

Grid upsample(const Grid& map, std::size_t out_h, std::size_t out_w, Resample mode) {
    check_grid(map);
    if (out_h == 0 || out_w == 0) throw ContractError("output dimensions must be positive");
    Grid out(out_h, out_w);
    if (mode == Resample::Nearest) {
        auto rows = nearest_taps(map.height, out_h);
        auto cols = nearest_taps(map.width, out_w);
        for (std::size_t i = 0; i < out_h; ++i)
            for (std::size_t j = 0; j < out_w; ++j) out.at(i, j) = map.at(rows[i], cols[j]);
        return out;
    }
    auto rows = bilinear_taps(map.height, out_h);
    auto cols = bilinear_taps(map.width, out_w);
    for (std::size_t i = 0; i < out_h; ++i) {
        const Tap& r = rows[i];
        for (std::size_t j = 0; j < out_w; ++j) {
            const Tap& c = cols[j];
            double top = lerp(map.at(r.lo, c.lo), map.at(r.lo, c.hi), c.t);
            double bottom = lerp(map.at(r.hi, c.lo), map.at(r.hi, c.hi), c.t);
            out.at(i, j) = lerp(top, bottom, r.t);
        }
    }
    return out;
}

Grid normalize_map(const Grid& map) {
    check_grid(map);
    double peak = *std::max_element(map.values.begin(), map.values.end());
    Grid out = map;
    if (peak > 0.0) {
        for (auto& v : out.values) v /= peak;
    }
    return out;
}

Grid gradcam_heatmap(const Tensor3& maps, const Tensor3& grads, std::size_t out_h, std::size_t out_w,
                     Resample mode) {
    check_tensor(grads);
    check_tensor(maps);
    if (maps.channels != grads.channels || maps.height != grads.height || maps.width != grads.width) {
        throw InputError("feature maps and gradients must have the same shape");
    }
    return normalize_map(upsample(cam(gap_weights(grads), maps), out_h, out_w, mode));
}

Grid preprocess_image(const Raster& image, std::size_t out_h, std::size_t out_w) {
    if (image.height == 0 || image.width == 0) throw InputError("image has zero size");
    if (image.pixels.size() != image.height * image.width) throw InputError("image pixel count does not match its size");
    Grid raw(image.height, image.width);
    for (std::size_t p = 0; p < raw.values.size(); ++p) raw.values[p] = image.pixels[p];
    Grid out = upsample(raw, out_h, out_w, Resample::Bilinear);
    for (auto& v : out.values) v /= 255.0;
    return out;
}

std::vector<std::uint8_t> quantize(const Grid& heatmap) {
    std::vector<std::uint8_t> out;
    out.reserve(heatmap.values.size());
    for (double v : heatmap.values) {
        if (!(v >= 0.0 && v <= 1.0)) throw ContractError("heatmap value outside [0, 1]");
        out.push_back(static_cast<std::uint8_t>(std::lround(255.0 * v)));
    }
    return out;
}

namespace {

std::vector<std::string_view> fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && text::is_space(line[i])) ++i;
        std::size_t start = i;
        while (i < line.size() && !text::is_space(line[i])) ++i;
        if (i > start) out.push_back(line.substr(start, i - start));
    }
    return out;
}

template <typename T>
bool parse_value(std::string_view s, T& out) {
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size();
}

} // namespace

Tensor3 parse_tensor(std::string_view body, std::string_view source) {
    auto lines = text::content_lines(body);
    auto where = [&](std::size_t line_no) { return std::string(source) + ": row " + std::to_string(line_no) + ": "; };
    if (lines.empty()) throw InputError(std::string(source) + ": missing tensor header");
    auto head = fields(lines[0]);
    std::size_t dims[3] = {0, 0, 0};
    if (head.size() != 3) throw InputError(std::string(source) + ": header must be 'C H W'");
    for (int k = 0; k < 3; ++k) {
        if (!parse_value(head[k], dims[k]) || dims[k] == 0) {
            throw InputError(std::string(source) + ": header dimensions must be positive integers");
        }
    }
    Tensor3 t(dims[0], dims[1], dims[2]);
    if (lines.size() - 1 != t.channels * t.height) {
        throw InputError(std::string(source) + ": expected " + std::to_string(t.channels * t.height) + " rows, found " +
                         std::to_string(lines.size() - 1));
    }
    std::size_t k = 0;
    for (std::size_t r = 1; r < lines.size(); ++r) {
        auto row = fields(lines[r]);
        if (row.size() != t.width) {
            throw InputError(where(r) + "expected " + std::to_string(t.width) + " values, found " +
                             std::to_string(row.size()));
        }
        for (auto f : row) {
            double v = 0.0;
            if (!parse_value(f, v) || !std::isfinite(v)) throw InputError(where(r) + "bad number '" + std::string(f) + "'");
            t.data[k++] = v;
        }
    }
    return t;
}

std::string format_tensor(const Tensor3& t) {
    check_tensor(t);
    std::string out = std::to_string(t.channels) + " " + std::to_string(t.height) + " " + std::to_string(t.width) + "\n";
    for (std::size_t c = 0; c < t.channels; ++c) {
        for (std::size_t i = 0; i < t.height; ++i) {
            for (std::size_t j = 0; j < t.width; ++j) {
                if (j) out += ' ';
                out += text::format_number(t.at(c, i, j));
            }
            out += '\n';
        }
    }
    return out;
}

Tensor3 grid_to_tensor(const Grid& g) {
    Tensor3 t(1, g.height, g.width);
    t.data = g.values;
    return t;
}

std::string heatmap_to_pgm(const Grid& heatmap) {
    check_grid(heatmap);
    auto levels = quantize(heatmap);
    std::string out = "P2\n" + std::to_string(heatmap.width) + " " + std::to_string(heatmap.height) + "\n255\n";
    for (std::size_t i = 0; i < heatmap.height; ++i) {
        for (std::size_t j = 0; j < heatmap.width; ++j) {
            if (j) out += ' ';
            out += std::to_string(levels[i * heatmap.width + j]);
        }
        out += '\n';
    }
    return out;
}

Raster parse_pgm(std::string_view bytes) {
    std::size_t pos = 0;
    // Header tokens, skipping whitespace and '#' comments.
    auto next_token = [&]() -> std::string_view {
        while (pos < bytes.size()) {
            if (text::is_space(bytes[pos])) {
                ++pos;
            } else if (bytes[pos] == '#') {
                while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
            } else {
                break;
            }
        }
        std::size_t start = pos;
        while (pos < bytes.size() && !text::is_space(bytes[pos]) && bytes[pos] != '#') ++pos;
        return bytes.substr(start, pos - start);
    };
    auto magic = next_token();
    if (magic != "P2" && magic != "P5") throw InputError("not a PGM image (expected P2 or P5)");
    std::size_t width = 0, height = 0, maxval = 0;
    if (!parse_value(next_token(), width) || !parse_value(next_token(), height) || !parse_value(next_token(), maxval)) {
        throw InputError("malformed PGM header");
    }
    if (width == 0 || height == 0) throw InputError("image has zero size");
    if (maxval == 0 || maxval > 255) throw InputError("PGM maxval must be in 1..255");

    Raster img{height, width, std::vector<std::uint8_t>(width * height)};
    auto scale = [&](std::size_t v) -> std::uint8_t {
        if (v > maxval) throw InputError("PGM sample exceeds maxval");
        if (maxval == 255) return static_cast<std::uint8_t>(v);
        return static_cast<std::uint8_t>((v * 255 + maxval / 2) / maxval);
    };
    if (magic == "P5") {
        ++pos;  // single whitespace byte after maxval
        if (bytes.size() < pos + img.pixels.size()) throw InputError("PGM raster is truncated");
        for (std::size_t p = 0; p < img.pixels.size(); ++p) img.pixels[p] = scale(static_cast<unsigned char>(bytes[pos + p]));
        return img;
    }
    for (auto& px : img.pixels) {
        std::size_t v = 0;
        auto tok = next_token();
        if (tok.empty()) throw InputError("PGM raster is truncated");
        if (!parse_value(tok, v)) throw InputError("bad PGM sample '" + std::string(tok) + "'");
        px = scale(v);
    }
    return img;
}

std::pair<std::size_t, std::size_t> parse_size(std::string_view spec) {
    auto x = spec.find_first_of("xX");
    std::size_t h = 0, w = 0;
    if (x == std::string_view::npos || !parse_value(spec.substr(0, x), h) || !parse_value(spec.substr(x + 1), w) ||
        h == 0 || w == 0) {
        throw InputError("size must look like HxW with positive integers, got '" + std::string(spec) + "'");
    }
    return {h, w};
}

} // namespace radlabel

// SPDX-License-Identifier: Apache-2.0
//
// risrec - adaptive RIS-aided target recognition simulator
// Copyright (C) 2026 risrec contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0

#include "risrec/mnist.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "risrec/rng.hpp"

namespace risrec {

namespace {

constexpr std::uint32_t kImagesMagic = 0x00000803;
constexpr std::uint32_t kLabelsMagic = 0x00000801;

std::uint32_t read_be32(std::ifstream& in, const std::string& path, std::size_t& offset) {
    std::array<unsigned char, 4> buf{};
    in.read(reinterpret_cast<char*>(buf.data()), 4);
    if (in.gcount() != 4) {
        throw std::runtime_error("idx: '" + path + "' truncated at byte " + std::to_string(offset));
    }
    offset += 4;
    return (static_cast<std::uint32_t>(buf[0]) << 24) | (static_cast<std::uint32_t>(buf[1]) << 16) |
           (static_cast<std::uint32_t>(buf[2]) << 8) | static_cast<std::uint32_t>(buf[3]);
}

void write_be32(std::ofstream& out, std::uint32_t v) {
    const std::array<char, 4> buf{static_cast<char>((v >> 24) & 0xff),
                                  static_cast<char>((v >> 16) & 0xff),
                                  static_cast<char>((v >> 8) & 0xff),
                                  static_cast<char>(v & 0xff)};
    out.write(buf.data(), 4);
}

} // namespace

ImageSet load_mnist(const std::string& images_path, const std::string& labels_path) {
    std::ifstream img(images_path, std::ios::binary);
    if (!img) throw std::runtime_error("idx: cannot open '" + images_path + "'");
    std::size_t off = 0;
    const std::uint32_t img_magic = read_be32(img, images_path, off);
    if (img_magic != kImagesMagic) {
        throw std::runtime_error("idx: '" + images_path + "' has bad magic at byte 0");
    }
    const std::uint32_t n_images = read_be32(img, images_path, off);
    const std::uint32_t rows = read_be32(img, images_path, off);
    const std::uint32_t cols = read_be32(img, images_path, off);

    ImageSet set;
    set.rows = static_cast<int>(rows);
    set.cols = static_cast<int>(cols);
    const std::size_t n_pixels = static_cast<std::size_t>(n_images) * rows * cols;
    set.pixels.resize(n_pixels);
    img.read(reinterpret_cast<char*>(set.pixels.data()), static_cast<std::streamsize>(n_pixels));
    if (static_cast<std::size_t>(img.gcount()) != n_pixels) {
        throw std::runtime_error("idx: '" + images_path + "' truncated at byte " +
                                 std::to_string(off + static_cast<std::size_t>(img.gcount())));
    }

    std::ifstream lab(labels_path, std::ios::binary);
    if (!lab) throw std::runtime_error("idx: cannot open '" + labels_path + "'");
    std::size_t loff = 0;
    const std::uint32_t lab_magic = read_be32(lab, labels_path, loff);
    if (lab_magic != kLabelsMagic) {
        throw std::runtime_error("idx: '" + labels_path + "' has bad magic at byte 0");
    }
    const std::uint32_t n_labels = read_be32(lab, labels_path, loff);
    if (n_labels != n_images) {
        throw std::runtime_error("idx: image count " + std::to_string(n_images) +
                                 " does not match label count " + std::to_string(n_labels));
    }
    set.labels.resize(n_labels);
    lab.read(reinterpret_cast<char*>(set.labels.data()), static_cast<std::streamsize>(n_labels));
    if (static_cast<std::size_t>(lab.gcount()) != n_labels) {
        throw std::runtime_error("idx: '" + labels_path + "' truncated at byte " +
                                 std::to_string(loff + static_cast<std::size_t>(lab.gcount())));
    }
    return set;
}

void write_idx_images(const std::string& path, const ImageSet& set) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("idx: cannot write '" + path + "'");
    write_be32(out, kImagesMagic);
    write_be32(out, static_cast<std::uint32_t>(set.count()));
    write_be32(out, static_cast<std::uint32_t>(set.rows));
    write_be32(out, static_cast<std::uint32_t>(set.cols));
    out.write(reinterpret_cast<const char*>(set.pixels.data()),
              static_cast<std::streamsize>(set.pixels.size()));
}

void write_idx_labels(const std::string& path, const ImageSet& set) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("idx: cannot write '" + path + "'");
    write_be32(out, kLabelsMagic);
    write_be32(out, static_cast<std::uint32_t>(set.count()));
    out.write(reinterpret_cast<const char*>(set.labels.data()),
              static_cast<std::streamsize>(set.labels.size()));
}

namespace {

struct P2 {
    double x, y;
};

// Polyline strokes per glyph, in a unit box with y growing downward.
using Stroke = std::vector<P2>;

Stroke arc(double cx, double cy, double rx, double ry, double a0, double a1, int steps = 20) {
    Stroke s;
    s.reserve(static_cast<std::size_t>(steps) + 1);
    for (int i = 0; i <= steps; ++i) {
        const double a = a0 + (a1 - a0) * static_cast<double>(i) / steps;
        s.push_back({cx + rx * std::cos(a), cy + ry * std::sin(a)});
    }
    return s;
}

std::vector<Stroke> glyph_strokes(int digit) {
    switch (digit) {
        case 0:
            return {arc(0.5, 0.5, 0.21, 0.32, 0.0, 2.0 * M_PI, 28)};
        case 1:
            return {{{0.36, 0.30}, {0.54, 0.14}}, {{0.54, 0.14}, {0.54, 0.86}}};
        case 2:
            return {arc(0.5, 0.33, 0.20, 0.18, -M_PI, 0.25 * M_PI, 16),
                    {{0.64, 0.46}, {0.30, 0.84}},
                    {{0.30, 0.84}, {0.72, 0.84}}};
        case 3:
            return {arc(0.48, 0.32, 0.18, 0.17, -0.75 * M_PI, 0.5 * M_PI, 16),
                    arc(0.48, 0.67, 0.20, 0.19, -0.5 * M_PI, 0.75 * M_PI, 16)};
        case 4:
            return {{{0.60, 0.14}, {0.28, 0.60}}, {{0.28, 0.60}, {0.76, 0.60}},
                    {{0.62, 0.40}, {0.62, 0.86}}};
        case 5:
            return {{{0.68, 0.15}, {0.35, 0.15}}, {{0.35, 0.15}, {0.33, 0.45}},
                    arc(0.48, 0.63, 0.19, 0.21, -0.55 * M_PI, 0.65 * M_PI, 18)};
        case 6:
            return {{{0.62, 0.14}, {0.38, 0.48}},
                    arc(0.50, 0.65, 0.17, 0.19, 0.0, 2.0 * M_PI, 24)};
        case 7:
            return {{{0.30, 0.16}, {0.72, 0.16}}, {{0.72, 0.16}, {0.42, 0.86}}};
        case 8:
            return {arc(0.5, 0.33, 0.16, 0.15, 0.0, 2.0 * M_PI, 24),
                    arc(0.5, 0.67, 0.19, 0.17, 0.0, 2.0 * M_PI, 24)};
        case 9:
            return {arc(0.50, 0.35, 0.17, 0.17, 0.0, 2.0 * M_PI, 24),
                    {{0.67, 0.35}, {0.58, 0.86}}};
        default:
            throw std::invalid_argument("synth_digits: digit out of range");
    }
}

double dist_to_segment(const P2& p, const P2& a, const P2& b) {
    const double vx = b.x - a.x, vy = b.y - a.y;
    const double wx = p.x - a.x, wy = p.y - a.y;
    const double vv = vx * vx + vy * vy;
    double t = vv > 0.0 ? (wx * vx + wy * vy) / vv : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    const double dx = p.x - (a.x + t * vx), dy = p.y - (a.y + t * vy);
    return std::sqrt(dx * dx + dy * dy);
}

} // namespace

ImageSet synth_digits(int count, const std::vector<int>& digits, std::uint64_t seed) {
    if (count < 0) throw std::invalid_argument("synth_digits: count must be >= 0");
    if (digits.empty()) throw std::invalid_argument("synth_digits: digit list is empty");
    ImageSet set;
    set.pixels.resize(static_cast<std::size_t>(count) * 28 * 28, 0);
    set.labels.resize(static_cast<std::size_t>(count));

    Rng rng(derive_seed(seed, {0xd161}));
    for (int i = 0; i < count; ++i) {
        const int digit = digits[static_cast<std::size_t>(i) % digits.size()];
        set.labels[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(digit);

        // per-sample jitter
        const double scale = rng.next_uniform(0.78, 1.05);
        const double rot = rng.next_uniform(-0.16, 0.16);
        const double shear = rng.next_uniform(-0.10, 0.10);
        const double dx = rng.next_uniform(-0.06, 0.06);
        const double dy = rng.next_uniform(-0.06, 0.06);
        const double thickness = rng.next_uniform(0.045, 0.085);
        const double peak = rng.next_uniform(210.0, 255.0);

        const double cr = std::cos(rot), sr = std::sin(rot);
        auto transform = [&](P2 p) {
            double x = p.x - 0.5, y = p.y - 0.5;
            x += shear * y;
            const double xr = cr * x - sr * y;
            const double yr = sr * x + cr * y;
            return P2{0.5 + scale * xr + dx, 0.5 + scale * yr + dy};
        };

        std::vector<Stroke> strokes = glyph_strokes(digit);
        for (auto& s : strokes) {
            for (auto& p : s) p = transform(p);
        }

        std::uint8_t* img = set.pixels.data() + static_cast<std::size_t>(i) * 28 * 28;
        for (int r = 0; r < 28; ++r) {
            for (int c = 0; c < 28; ++c) {
                const P2 p{(static_cast<double>(c) + 0.5) / 28.0,
                           (static_cast<double>(r) + 0.5) / 28.0};
                double d = 1e9;
                for (const auto& s : strokes) {
                    for (std::size_t j = 0; j + 1 < s.size(); ++j) {
                        d = std::min(d, dist_to_segment(p, s[j], s[j + 1]));
                    }
                }
                // soft-edged stroke profile
                const double aa = 0.35 * thickness;
                const double v = std::clamp((thickness - d) / aa + 1.0, 0.0, 1.0);
                double value = peak * v;
                if (value > 0.0) value += rng.next_uniform(-12.0, 12.0);
                img[r * 28 + c] = static_cast<std::uint8_t>(std::clamp(value, 0.0, 255.0));
            }
        }
    }
    return set;
}

} // namespace risrec

// SPDX-License-Identifier: Apache-2.0
//
// risrec - adaptive RIS-aided target recognition simulator
// Copyright (C) 2026 risrec contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace risrec {

// Grayscale image set in memory: `count` images of rows x cols bytes each,
// flattened row-major into `pixels`, one label byte per image.
struct ImageSet {
    int rows = 28;
    int cols = 28;
    std::vector<std::uint8_t> pixels;
    std::vector<std::uint8_t> labels;

    std::size_t count() const { return labels.size(); }
    const std::uint8_t* image(std::size_t i) const {
        return pixels.data() + i * static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols);
    }
};

// Reads an IDX image/label file pair (big-endian magics 0x00000803 and
// 0x00000801). Throws std::runtime_error naming the byte offset on bad
// magic, truncation, or an image/label count mismatch.
ImageSet load_mnist(const std::string& images_path, const std::string& labels_path);

void write_idx_images(const std::string& path, const ImageSet& set);
void write_idx_labels(const std::string& path, const ImageSet& set);

// Procedurally rendered 28x28 digit glyphs (strokes with random affine
// jitter, thickness and intensity variation) for environments without the
// handwritten-digit files. Labels cycle through `digits`.
ImageSet synth_digits(int count, const std::vector<int>& digits, std::uint64_t seed);

} // namespace risrec

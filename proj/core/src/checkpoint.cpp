// SPDX-License-Identifier: Apache-2.0
//
// risrec - adaptive RIS-aided target recognition simulator
// Copyright (C) 2026 risrec contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0

#include "risrec/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace risrec {

namespace {

constexpr char kMagic[8] = {'R', 'I', 'S', 'R', 'E', 'C', 'P', 'T'};
constexpr std::uint32_t kVersion = 1;

static_assert(std::endian::native == std::endian::little,
              "checkpoint io assumes a little-endian host");

template <typename T>
void write_pod(std::ofstream& out, T v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_pod(std::ifstream& in, const std::string& path) {
    T v{};
    in.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (in.gcount() != sizeof(T)) throw std::runtime_error("checkpoint: '" + path + "' truncated");
    return v;
}

void write_tensor(std::ofstream& out, const std::string& name, const ad::Tensor& t) {
    write_pod(out, static_cast<std::uint32_t>(name.size()));
    out.write(name.data(), static_cast<std::streamsize>(name.size()));
    write_pod(out, static_cast<std::uint32_t>(t.shape.size()));
    for (std::size_t d : t.shape) write_pod(out, static_cast<std::uint64_t>(d));
    out.write(reinterpret_cast<const char*>(t.data.data()),
              static_cast<std::streamsize>(t.data.size() * sizeof(double)));
}

} // namespace

void save_checkpoint(const std::string& path, const ParamStore& params,
                     const std::map<std::string, double>& meta) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("checkpoint: cannot write '" + path + "'");
    out.write(kMagic, sizeof(kMagic));
    write_pod(out, kVersion);
    write_pod(out, static_cast<std::uint32_t>(params.count() + meta.size()));
    for (const auto& [name, value] : meta) {
        write_tensor(out, "meta." + name, ad::Tensor::scalar(value));
    }
    for (std::size_t i = 0; i < params.count(); ++i) {
        write_tensor(out, params.name(static_cast<int>(i)), params.tensor(static_cast<int>(i)));
    }
    if (!out) throw std::runtime_error("checkpoint: write to '" + path + "' failed");
}

Checkpoint load_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("checkpoint: cannot open '" + path + "'");
    char magic[8];
    in.read(magic, sizeof(magic));
    if (in.gcount() != sizeof(magic) || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
        throw std::runtime_error("checkpoint: '" + path + "' has a bad magic string");
    }
    const auto version = read_pod<std::uint32_t>(in, path);
    if (version != kVersion) {
        throw std::runtime_error("checkpoint: unsupported format version " +
                                 std::to_string(version));
    }
    const auto count = read_pod<std::uint32_t>(in, path);

    Checkpoint ck;
    for (std::uint32_t i = 0; i < count; ++i) {
        const auto name_len = read_pod<std::uint32_t>(in, path);
        std::string name(name_len, '\0');
        in.read(name.data(), name_len);
        if (in.gcount() != static_cast<std::streamsize>(name_len)) {
            throw std::runtime_error("checkpoint: '" + path + "' truncated");
        }
        const auto rank = read_pod<std::uint32_t>(in, path);
        ad::Tensor t;
        std::size_t total = 1;
        for (std::uint32_t d = 0; d < rank; ++d) {
            const auto dim = read_pod<std::uint64_t>(in, path);
            t.shape.push_back(static_cast<std::size_t>(dim));
            total *= static_cast<std::size_t>(dim);
        }
        t.data.resize(total);
        in.read(reinterpret_cast<char*>(t.data.data()),
                static_cast<std::streamsize>(total * sizeof(double)));
        if (in.gcount() != static_cast<std::streamsize>(total * sizeof(double))) {
            throw std::runtime_error("checkpoint: '" + path + "' truncated");
        }
        if (name.rfind("meta.", 0) == 0 && total == 1) {
            ck.meta[name.substr(5)] = t.data[0];
        } else {
            ck.params.add(name, std::move(t));
        }
    }
    return ck;
}

} // namespace risrec

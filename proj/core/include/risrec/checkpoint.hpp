// SPDX-License-Identifier: Apache-2.0
//
// risrec - adaptive RIS-aided target recognition simulator
// Copyright (C) 2026 risrec contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <map>
#include <string>

#include "risrec/recognizer.hpp"

namespace risrec {

// Versioned binary checkpoint: magic string, format version, then a named
// tensor table (name, shape, little-endian doubles). Scalar metadata (k,
// widths, method id, ...) rides along as single-element tensors under
// "meta." names. Identical bytes restore identical behavior.
struct Checkpoint {
    ParamStore params;
    std::map<std::string, double> meta;
};

void save_checkpoint(const std::string& path, const ParamStore& params,
                     const std::map<std::string, double>& meta = {});

Checkpoint load_checkpoint(const std::string& path);

} // namespace risrec

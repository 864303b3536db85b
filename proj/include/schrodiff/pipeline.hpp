/*
 * Copyright 2026 The Schrodiff Authors
 * This file is licensed to you under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License. You may obtain a copy
 * of the License at http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software distributed under
 * the License is distributed on an "AS IS" BASIS, WITHOUT WARRANTIES OR REPRESENTATIONS
 * OF ANY KIND, either express or implied. See the License for the specific language
 * governing permissions and limitations under the License.
 */

#pragma once

#include "schrodiff/signature.hpp"

namespace schrodiff {

/// Knobs for the full signature pipeline, with reproducible defaults:
/// bandwidth factor 0.2, log_grad potential with alpha 1 and automatic
/// beta, 100 eigenpairs (clamped to the vertex count), automatic diffusion
/// time, 100 farthest-point samples, 120 bins, per-shape bin range.
struct PipelineConfig {
    double s_factor = 0.2;
    PotentialSpec potential{};
    int k = 100;
    DiffusionTime time = DiffusionTime::automatic();
    int samples = 100;
    int bins = 120;
    std::optional<double> fixed_range; // nullopt = per-shape range
    int jobs = 1;
};

/// Assemble the full operator for a mesh under `config`: Gaussian Laplacian
/// plus the configured potential, with resolved alpha/beta recorded in the
/// metadata. Reads the texture (luminance) only when the potential needs it.
SparseSymmetricOperator build_operator(const TriangleMesh& mesh, const PipelineConfig& config);

/// The whole chain: operator, spectrum, farthest point sampling, pooled
/// distance histogram. Deterministic for identical inputs and config.
DiffusionSignature compute_signature(const TriangleMesh& mesh, const PipelineConfig& config);

} // namespace schrodiff

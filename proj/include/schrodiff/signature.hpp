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

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "schrodiff/spectral.hpp"

namespace schrodiff {

/// A normalized histogram of diffusion distances plus the parameters that
/// produced it. The histogram sums to one; bin i covers
/// (i*w, (i+1)*w] with w = d_max/bins, except bin 0 which also contains 0.
struct DiffusionSignature {
    std::vector<double> histogram;
    double d_max = 0.0;
    bool degenerate_range = false; // all pooled distances were zero

    double t = 0.0;
    int k = 0;
    PotentialKind potential_kind = PotentialKind::none;
    double alpha = 0.0;
    double beta = 0.0;
    int sample_count = 0;
    double s_factor = 0.0;
    std::string mesh_hash;

    int bins() const { return static_cast<int>(histogram.size()); }

    friend bool operator==(const DiffusionSignature&, const DiffusionSignature&) = default;
};

/// Vertices chosen by farthest point sampling, in pick order.
struct SamplePlan {
    std::vector<int> vertex_ids;
    int size() const { return static_cast<int>(vertex_ids.size()); }
};

/// Greedy farthest point sampling under Euclidean ambient distance.
/// Seed: the vertex farthest from the vertex centroid; every later pick
/// maximizes the minimum distance to the picks so far. All ties break to
/// the lowest vertex index, so the plan is fully deterministic. Returns
/// min(m, vertex_count) distinct vertices.
SamplePlan farthest_point_sample(const TriangleMesh& mesh, int m);

/// Bin `values` into a normalized histogram over [0, range] (top edge
/// inclusive); values beyond the range land in the last bin. Exposed
/// separately from build_histogram so the binning rule is testable on its
/// own.
std::vector<double> histogram_from_values(const std::vector<double>& values, int bins,
                                          double range);

/// Pool the diffusion distance maps of every sampled vertex (self-distances
/// included) into one normalized histogram. The bin range is [0, max pooled
/// value] unless `fixed_range` overrides it. When every pooled distance is
/// zero the result is a delta at bin 0 with degenerate_range set.
DiffusionSignature build_histogram(const SpectralDecomposition& dec, double t,
                                   const SamplePlan& plan, int bins,
                                   std::optional<double> fixed_range = std::nullopt);

/// Exact earth mover's distance between two equal-bin-count normalized
/// histograms with ground cost |i - j| in bin units, computed from the
/// cumulative distributions. `normalized` divides by (bins - 1) to map the
/// result into [0, 1].
double emd_1d(const DiffusionSignature& a, const DiffusionSignature& b, bool normalized = false);
double emd_1d(const std::vector<double>& a, const std::vector<double>& b, bool normalized = false);

/// JSON (de)serialization; the round trip is lossless bit-for-bit.
/// Writes are atomic (temp file + rename). load_signature names the first
/// missing or ill-typed field in its SchemaError.
void save_signature(const DiffusionSignature& sig, const std::filesystem::path& path);
DiffusionSignature load_signature(const std::filesystem::path& path);

std::string signature_to_json(const DiffusionSignature& sig);
DiffusionSignature signature_from_json(const std::string& text);

} // namespace schrodiff

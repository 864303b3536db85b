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

#include "schrodiff/pipeline.hpp"

namespace schrodiff {

struct ManifestEntry {
    std::string path;
    std::string label;
};

/// Parse a "path<TAB>label" manifest; relative paths resolve against the
/// manifest's own directory. Blank lines are skipped.
std::vector<ManifestEntry> read_manifest(const std::filesystem::path& path);

struct DatabaseEntry {
    std::string path;
    std::string label;
    DiffusionSignature signature;
};

/// A per-shape pipeline failure, recorded instead of aborting the batch.
struct EntryFailure {
    std::string path;
    std::string label;
    std::string stage; // parse | assembly | eigensolve | io | internal
    std::string message;
};

struct ShapeDatabase {
    std::vector<DatabaseEntry> entries;
    std::vector<EntryFailure> failures;
    PipelineConfig config;
};

/// Run the signature pipeline over every manifest entry. Failures are
/// collected per entry; the batch only throws EmptyDatabase when fewer than
/// two shapes survive. `config.jobs` caps the worker threads; results are
/// identical regardless of the worker count.
ShapeDatabase build_database(const std::vector<ManifestEntry>& entries,
                             const PipelineConfig& config);

struct RetrievalMetrics {
    std::optional<double> nn_accuracy;
    std::optional<double> second_nn_accuracy;
    std::optional<double> intra_class_mean; // normalized by the matrix maximum
    std::optional<double> inter_class_mean; // null when only one class exists

    friend bool operator==(const RetrievalMetrics&, const RetrievalMetrics&) = default;
};

struct RetrievalReport {
    Eigen::MatrixXd distances; // symmetric, zero diagonal
    std::vector<std::string> labels;
    std::vector<std::vector<int>> rankings; // per query: all others, nearest first
    RetrievalMetrics metrics;
};

/// Fill the pairwise EMD matrix (computed for i < j, mirrored exactly).
RetrievalReport pairwise_matrix(const ShapeDatabase& db);

/// Rank neighbors per query (ties to the lowest index) and compute the
/// four summary metrics. Intra/inter means are taken over unordered
/// distinct pairs and divided by the maximum matrix entry; metrics without
/// any qualifying pair or neighbor come back null.
RetrievalMetrics evaluate(RetrievalReport& report);

/// Lossless JSON round trip of {matrix, labels, metrics, rankings}.
std::string report_to_json(const RetrievalReport& report);
RetrievalReport report_from_json(const std::string& text);
void save_report(const RetrievalReport& report, const std::filesystem::path& path);
RetrievalReport load_report(const std::filesystem::path& path);

/// Plain-text PGM rendering of the matrix, one pixel per cell:
/// white = zero distance, black = the maximum distance.
std::string matrix_to_pgm(const Eigen::MatrixXd& distances);

/// Four-row human-readable metrics table.
std::string metrics_to_text(const RetrievalMetrics& metrics, int entry_count);

} // namespace schrodiff

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

#include "schrodiff/retrieval.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <thread>

#include <json.hpp>

#include "schrodiff/atomic_file.hpp"
#include "schrodiff/mesh_io.hpp"

namespace schrodiff {

std::vector<ManifestEntry> read_manifest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw FileNotFoundError(path.string());
    const std::filesystem::path base = path.parent_path();

    std::vector<ManifestEntry> entries;
    std::string line;
    long line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        const auto tab = line.find('\t');
        if (tab == std::string::npos)
            throw ParseError(path.string(), line_number, "expected 'path<TAB>label'");
        std::string file = line.substr(0, tab);
        std::string label = line.substr(tab + 1);
        if (file.empty() || label.empty())
            throw ParseError(path.string(), line_number, "path and label must be nonempty");
        std::filesystem::path p(file);
        if (p.is_relative()) p = base / p;
        entries.push_back({p.string(), std::move(label)});
    }
    return entries;
}

namespace {

const char* stage_name(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::parse: return "parse";
        case ErrorKind::assembly: return "assembly";
        case ErrorKind::eigensolve: return "eigensolve";
        case ErrorKind::io: return "io";
        default: return "internal";
    }
}

} // namespace

ShapeDatabase build_database(const std::vector<ManifestEntry>& entries,
                             const PipelineConfig& config) {
    const int n = static_cast<int>(entries.size());
    std::vector<std::optional<DiffusionSignature>> results(n);
    std::vector<std::optional<EntryFailure>> failures(n);

    std::atomic<int> cursor{0};
    auto worker = [&] {
        for (int i = cursor.fetch_add(1); i < n; i = cursor.fetch_add(1)) {
            try {
                const TriangleMesh mesh = load_mesh(entries[i].path);
                results[i] = compute_signature(mesh, config);
            } catch (const Error& e) {
                failures[i] = EntryFailure{entries[i].path, entries[i].label,
                                           stage_name(e.kind()), e.what()};
            } catch (const std::exception& e) {
                failures[i] = EntryFailure{entries[i].path, entries[i].label, "internal", e.what()};
            }
        }
    };

    const int jobs = std::clamp(config.jobs, 1, std::max(1, n));
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    ShapeDatabase db;
    db.config = config;
    for (int i = 0; i < n; ++i) {
        if (results[i])
            db.entries.push_back({entries[i].path, entries[i].label, std::move(*results[i])});
        else
            db.failures.push_back(std::move(*failures[i]));
    }
    if (db.entries.size() < 2)
        throw EmptyDatabaseError("only " + std::to_string(db.entries.size()) +
                                 " usable shapes (need at least 2); " +
                                 std::to_string(db.failures.size()) + " failed");
    return db;
}

RetrievalReport pairwise_matrix(const ShapeDatabase& db) {
    const int n = static_cast<int>(db.entries.size());
    RetrievalReport report;
    report.distances = Eigen::MatrixXd::Zero(n, n);
    report.labels.reserve(n);
    for (const auto& e : db.entries) report.labels.push_back(e.label);

    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const double d = emd_1d(db.entries[i].signature, db.entries[j].signature);
            report.distances(i, j) = d;
            report.distances(j, i) = d;
        }
    return report;
}

RetrievalMetrics evaluate(RetrievalReport& report) {
    const int n = static_cast<int>(report.labels.size());
    if (n != report.distances.rows() || n != report.distances.cols())
        throw std::invalid_argument("label count does not match the matrix");
    if (n < 2) throw EmptyDatabaseError("need at least 2 entries to evaluate");

    report.rankings.assign(n, {});
    for (int i = 0; i < n; ++i) {
        auto& order = report.rankings[i];
        order.reserve(n - 1);
        for (int j = 0; j < n; ++j)
            if (j != i) order.push_back(j);
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            if (report.distances(i, a) != report.distances(i, b))
                return report.distances(i, a) < report.distances(i, b);
            return a < b; // deterministic tie-break
        });
    }

    int nn_hits = 0, second_hits = 0;
    for (int i = 0; i < n; ++i) {
        if (report.labels[report.rankings[i][0]] == report.labels[i]) ++nn_hits;
        if (n >= 3 && report.labels[report.rankings[i][1]] == report.labels[i]) ++second_hits;
    }

    double intra_sum = 0.0, inter_sum = 0.0;
    long intra_pairs = 0, inter_pairs = 0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            if (report.labels[i] == report.labels[j]) {
                intra_sum += report.distances(i, j);
                ++intra_pairs;
            } else {
                inter_sum += report.distances(i, j);
                ++inter_pairs;
            }
        }
    const double max_distance = report.distances.maxCoeff();

    RetrievalMetrics m;
    m.nn_accuracy = static_cast<double>(nn_hits) / n;
    if (n >= 3) m.second_nn_accuracy = static_cast<double>(second_hits) / n;
    // An all-zero matrix normalizes to zero rather than 0/0.
    auto normalized = [&](double sum, long pairs) -> std::optional<double> {
        if (pairs == 0) return std::nullopt;
        if (max_distance <= 0.0) return 0.0;
        return sum / static_cast<double>(pairs) / max_distance;
    };
    m.intra_class_mean = normalized(intra_sum, intra_pairs);
    m.inter_class_mean = normalized(inter_sum, inter_pairs);
    report.metrics = m;
    return m;
}

namespace {

using nlohmann::json;

json optional_to_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::optional<double> optional_from_json(const json& j, const char* field) {
    if (!j.contains(field)) throw SchemaError(std::string("missing field \"") + field + "\"");
    if (j.at(field).is_null()) return std::nullopt;
    if (!j.at(field).is_number()) throw SchemaError(std::string("field \"") + field + "\" has the wrong type");
    return j.at(field).get<double>();
}

} // namespace

std::string report_to_json(const RetrievalReport& report) {
    const int n = static_cast<int>(report.labels.size());
    json matrix = json::array();
    for (int i = 0; i < n; ++i) {
        json row = json::array();
        for (int j = 0; j < n; ++j) row.push_back(report.distances(i, j));
        matrix.push_back(std::move(row));
    }
    json j;
    j["matrix"] = std::move(matrix);
    j["labels"] = report.labels;
    j["rankings"] = report.rankings;
    j["metrics"] = {{"nn_accuracy", optional_to_json(report.metrics.nn_accuracy)},
                    {"second_nn_accuracy", optional_to_json(report.metrics.second_nn_accuracy)},
                    {"normalized_intra_class_mean", optional_to_json(report.metrics.intra_class_mean)},
                    {"normalized_inter_class_mean", optional_to_json(report.metrics.inter_class_mean)}};
    return j.dump(2) + "\n";
}

RetrievalReport report_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw SchemaError(std::string("not valid JSON: ") + e.what());
    }
    for (const char* field : {"matrix", "labels", "metrics"})
        if (!j.contains(field)) throw SchemaError(std::string("missing field \"") + field + "\"");

    RetrievalReport report;
    try {
        report.labels = j.at("labels").get<std::vector<std::string>>();
        const auto rows = j.at("matrix").get<std::vector<std::vector<double>>>();
        const int n = static_cast<int>(rows.size());
        report.distances.resize(n, n);
        for (int i = 0; i < n; ++i) {
            if (static_cast<int>(rows[i].size()) != n) throw SchemaError("matrix is not square");
            for (int k = 0; k < n; ++k) report.distances(i, k) = rows[i][k];
        }
        if (j.contains("rankings"))
            report.rankings = j.at("rankings").get<std::vector<std::vector<int>>>();
    } catch (const json::exception&) {
        throw SchemaError("malformed matrix/labels/rankings");
    }
    const json& metrics = j.at("metrics");
    report.metrics.nn_accuracy = optional_from_json(metrics, "nn_accuracy");
    report.metrics.second_nn_accuracy = optional_from_json(metrics, "second_nn_accuracy");
    report.metrics.intra_class_mean = optional_from_json(metrics, "normalized_intra_class_mean");
    report.metrics.inter_class_mean = optional_from_json(metrics, "normalized_inter_class_mean");
    return report;
}

void save_report(const RetrievalReport& report, const std::filesystem::path& path) {
    write_file_atomically(path, report_to_json(report));
}

RetrievalReport load_report(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return report_from_json(text);
}

std::string matrix_to_pgm(const Eigen::MatrixXd& distances) {
    const int n = static_cast<int>(distances.rows());
    const double max_distance = n > 0 ? distances.maxCoeff() : 0.0;
    std::string out = "P2\n" + std::to_string(n) + " " + std::to_string(n) + "\n255\n";
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            long gray = 255;
            if (max_distance > 0.0)
                gray = 255 - std::lround(255.0 * distances(i, j) / max_distance);
            out += std::to_string(gray);
            out += (j + 1 < n) ? ' ' : '\n';
        }
    }
    return out;
}

std::string metrics_to_text(const RetrievalMetrics& metrics, int entry_count) {
    char buf[160];
    std::string out;
    auto fraction_row = [&](const char* name, const std::optional<double>& v) {
        if (v) {
            const long hits = std::lround(*v * entry_count);
            std::snprintf(buf, sizeof buf, "%-52s %ld/%d (%.4f)\n", name, hits, entry_count, *v);
        } else {
            std::snprintf(buf, sizeof buf, "%-52s n/a\n", name);
        }
        out += buf;
    };
    auto value_row = [&](const char* name, const std::optional<double>& v) {
        if (v)
            std::snprintf(buf, sizeof buf, "%-52s %.4f\n", name, *v);
        else
            std::snprintf(buf, sizeof buf, "%-52s n/a\n", name);
        out += buf;
    };
    fraction_row("Nearest neighbor in same class:", metrics.nn_accuracy);
    fraction_row("Second nearest neighbor in same class:", metrics.second_nn_accuracy);
    value_row("Mean intra-class distance (normalized):", metrics.intra_class_mean);
    value_row("Mean inter-class distance (normalized):", metrics.inter_class_mean);
    return out;
}

} // namespace schrodiff

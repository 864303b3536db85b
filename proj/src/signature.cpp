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

#include "schrodiff/signature.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "schrodiff/atomic_file.hpp"

namespace schrodiff {

SamplePlan farthest_point_sample(const TriangleMesh& mesh, int m) {
    if (m < 1) throw std::invalid_argument("sample count must be positive");
    const int n = mesh.vertex_count();
    const int picks = std::min(m, n);

    const Eigen::Vector3d center = mesh.centroid();
    int seed = 0;
    double best = -1.0;
    for (int i = 0; i < n; ++i) {
        const double d = (mesh.vertices[i] - center).norm();
        if (d > best) { // strict: ties keep the lowest index
            best = d;
            seed = i;
        }
    }

    SamplePlan plan;
    plan.vertex_ids.reserve(picks);
    plan.vertex_ids.push_back(seed);

    std::vector<double> min_dist(n);
    for (int i = 0; i < n; ++i) min_dist[i] = (mesh.vertices[i] - mesh.vertices[seed]).norm();

    for (int pick = 1; pick < picks; ++pick) {
        int next = 0;
        double far = -1.0;
        for (int i = 0; i < n; ++i)
            if (min_dist[i] > far) {
                far = min_dist[i];
                next = i;
            }
        plan.vertex_ids.push_back(next);
        for (int i = 0; i < n; ++i)
            min_dist[i] = std::min(min_dist[i], (mesh.vertices[i] - mesh.vertices[next]).norm());
    }
    return plan;
}

std::vector<double> histogram_from_values(const std::vector<double>& values, int bins,
                                          double range) {
    if (bins < 2) throw std::invalid_argument("need at least 2 bins");
    if (!(range > 0.0)) throw std::invalid_argument("range must be positive");
    if (values.empty()) throw std::invalid_argument("no values to bin");

    std::vector<long> counts(bins, 0);
    for (double v : values) {
        // Bin i is (i*w, (i+1)*w]; zero goes to bin 0, the top edge to the
        // last bin, and anything beyond the range is clamped into it.
        long idx = static_cast<long>(std::ceil(v / range * bins)) - 1;
        idx = std::clamp(idx, 0l, static_cast<long>(bins) - 1);
        ++counts[idx];
    }
    std::vector<double> histogram(bins);
    const double total = static_cast<double>(values.size());
    for (int i = 0; i < bins; ++i) histogram[i] = static_cast<double>(counts[i]) / total;
    return histogram;
}

DiffusionSignature build_histogram(const SpectralDecomposition& dec, double t,
                                   const SamplePlan& plan, int bins,
                                   std::optional<double> fixed_range) {
    if (bins < 2) throw std::invalid_argument("need at least 2 bins");
    if (plan.size() == 0) throw std::invalid_argument("empty sample plan");
    if (fixed_range && !(*fixed_range > 0.0))
        throw std::invalid_argument("fixed range must be positive");

    const int n = dec.dimension();
    std::vector<double> pooled;
    pooled.reserve(static_cast<size_t>(n) * plan.size());
    for (int s : plan.vertex_ids) {
        const VertexScalarField map = distance_map(dec, t, s);
        pooled.insert(pooled.end(), map.values.data(), map.values.data() + n);
    }

    double observed_max = 0.0;
    for (double v : pooled) observed_max = std::max(observed_max, v);

    DiffusionSignature sig;
    sig.t = t;
    sig.k = dec.size();
    sig.potential_kind = dec.potential_kind;
    sig.alpha = dec.alpha;
    sig.beta = dec.beta;
    sig.sample_count = plan.size();
    sig.s_factor = dec.s_factor;

    const double range = fixed_range ? *fixed_range : observed_max;
    if (!(range > 0.0)) {
        sig.histogram.assign(bins, 0.0);
        sig.histogram[0] = 1.0;
        sig.d_max = 0.0;
        sig.degenerate_range = true;
        return sig;
    }
    sig.histogram = histogram_from_values(pooled, bins, range);
    sig.d_max = range;
    return sig;
}

double emd_1d(const std::vector<double>& a, const std::vector<double>& b, bool normalized) {
    if (a.size() != b.size())
        throw BinMismatchError(static_cast<long>(a.size()), static_cast<long>(b.size()));
    if (a.size() < 2) throw std::invalid_argument("need at least 2 bins");
    double cum_a = 0.0, cum_b = 0.0, total = 0.0;
    for (size_t i = 0; i + 1 < a.size(); ++i) {
        cum_a += a[i];
        cum_b += b[i];
        total += std::abs(cum_a - cum_b);
    }
    return normalized ? total / static_cast<double>(a.size() - 1) : total;
}

double emd_1d(const DiffusionSignature& a, const DiffusionSignature& b, bool normalized) {
    if (a.bins() != b.bins()) throw BinMismatchError(a.bins(), b.bins());
    return emd_1d(a.histogram, b.histogram, normalized);
}

namespace {

using nlohmann::json;

template <typename T>
T require_field(const json& j, const char* field) {
    if (!j.contains(field)) throw SchemaError(std::string("missing field \"") + field + "\"");
    try {
        return j.at(field).get<T>();
    } catch (const json::exception&) {
        throw SchemaError(std::string("field \"") + field + "\" has the wrong type");
    }
}

} // namespace

std::string signature_to_json(const DiffusionSignature& sig) {
    json j;
    j["bins"] = sig.bins();
    j["histogram"] = sig.histogram;
    j["t"] = sig.t;
    j["k"] = sig.k;
    j["potential_kind"] = to_string(sig.potential_kind);
    j["alpha"] = sig.alpha;
    j["beta"] = sig.beta;
    j["sample_count"] = sig.sample_count;
    j["s_factor"] = sig.s_factor;
    j["mesh_hash"] = sig.mesh_hash;
    j["d_max"] = sig.d_max;
    j["degenerate_range"] = sig.degenerate_range;
    return j.dump(2) + "\n";
}

DiffusionSignature signature_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw SchemaError(std::string("not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw SchemaError("top level is not an object");

    DiffusionSignature sig;
    const int bins = require_field<int>(j, "bins");
    sig.histogram = require_field<std::vector<double>>(j, "histogram");
    sig.t = require_field<double>(j, "t");
    sig.k = require_field<int>(j, "k");
    const std::string kind = require_field<std::string>(j, "potential_kind");
    sig.alpha = require_field<double>(j, "alpha");
    sig.beta = require_field<double>(j, "beta");
    sig.sample_count = require_field<int>(j, "sample_count");
    sig.s_factor = require_field<double>(j, "s_factor");
    sig.mesh_hash = require_field<std::string>(j, "mesh_hash");
    sig.d_max = j.contains("d_max") ? require_field<double>(j, "d_max") : 0.0;
    sig.degenerate_range =
        j.contains("degenerate_range") ? require_field<bool>(j, "degenerate_range") : false;

    if (bins < 2) throw SchemaError("\"bins\" must be at least 2");
    if (sig.bins() != bins) throw SchemaError("\"histogram\" length does not match \"bins\"");
    if (!potential_kind_from_string(kind))
        throw SchemaError("unknown potential kind \"" + kind + "\"");
    sig.potential_kind = *potential_kind_from_string(kind);

    double sum = 0.0;
    for (double v : sig.histogram) {
        if (!std::isfinite(v) || v < 0.0) throw SchemaError("\"histogram\" entries must be nonnegative");
        sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-12) throw SchemaError("\"histogram\" does not sum to one");
    return sig;
}

void save_signature(const DiffusionSignature& sig, const std::filesystem::path& path) {
    write_file_atomically(path, signature_to_json(sig));
}

DiffusionSignature load_signature(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) throw IoError("read failure on " + path.string());
    return signature_from_json(text);
}

} // namespace schrodiff

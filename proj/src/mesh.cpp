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

#include "schrodiff/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <set>

#include <Eigen/Geometry>

namespace schrodiff {

double TriangleMesh::triangle_area(int t) const {
    const auto& tri = triangles[static_cast<size_t>(t)];
    const Eigen::Vector3d e1 = vertices[tri[1]] - vertices[tri[0]];
    const Eigen::Vector3d e2 = vertices[tri[2]] - vertices[tri[0]];
    return 0.5 * e1.cross(e2).norm();
}

Eigen::Vector3d TriangleMesh::centroid() const {
    Eigen::Vector3d c = Eigen::Vector3d::Zero();
    for (const auto& v : vertices) c += v;
    return c / static_cast<double>(vertices.size());
}

std::vector<double> TriangleMesh::unique_edge_lengths() const {
    std::set<std::pair<int, int>> seen;
    std::vector<double> lengths;
    for (const auto& tri : triangles) {
        for (int e = 0; e < 3; ++e) {
            int a = tri[e], b = tri[(e + 1) % 3];
            if (a > b) std::swap(a, b);
            if (seen.insert({a, b}).second)
                lengths.push_back((vertices[a] - vertices[b]).norm());
        }
    }
    return lengths;
}

double TriangleMesh::median_edge_length() const {
    std::vector<double> lengths = unique_edge_lengths();
    if (lengths.empty()) return 0.0;
    std::sort(lengths.begin(), lengths.end());
    const size_t n = lengths.size();
    return n % 2 == 1 ? lengths[n / 2] : 0.5 * (lengths[n / 2 - 1] + lengths[n / 2]);
}

std::vector<std::vector<int>> TriangleMesh::vertex_triangle_adjacency() const {
    std::vector<std::vector<int>> ring(vertices.size());
    for (int t = 0; t < triangle_count(); ++t)
        for (int c = 0; c < 3; ++c) ring[triangles[t][c]].push_back(t);
    return ring;
}

void TriangleMesh::validate() const {
    if (vertex_count() < 3) throw DegenerateMeshError("mesh has fewer than 3 vertices");
    if (triangle_count() < 1) throw DegenerateMeshError("mesh has no triangles");
    if (has_colors() && colors.size() != vertices.size())
        throw DegenerateMeshError("color count does not match vertex count");
    for (int t = 0; t < triangle_count(); ++t) {
        const auto& tri = triangles[t];
        for (int c = 0; c < 3; ++c)
            if (tri[c] < 0 || tri[c] >= vertex_count())
                throw ParseError("<mesh>", t, "triangle index out of range");
        if (tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2])
            throw DegenerateTriangleError(t, 0.0);
        const double area = triangle_area(t);
        if (!(area > kDegenerateAreaThreshold)) throw DegenerateTriangleError(t, area);
    }
}

VertexScalarField luminance(const TriangleMesh& mesh) {
    if (!mesh.has_colors()) throw MissingColorError();
    Eigen::VectorXd out(mesh.vertex_count());
    for (int i = 0; i < mesh.vertex_count(); ++i) {
        const Eigen::Vector3d& c = mesh.colors[i];
        double y = 0.2126 * c[0] + 0.7152 * c[1] + 0.0722 * c[2];
        out[i] = std::clamp(y, 0.0, 1.0);
    }
    return VertexScalarField(std::move(out));
}

namespace {

struct Fnv1a64 {
    uint64_t state = 1469598103934665603ull;

    void feed_bytes(const void* data, size_t len) {
        const auto* p = static_cast<const unsigned char*>(data);
        for (size_t i = 0; i < len; ++i) {
            state ^= p[i];
            state *= 1099511628211ull;
        }
    }
    void feed(double x) {
        uint64_t bits;
        std::memcpy(&bits, &x, sizeof bits);
        unsigned char le[8];
        for (int i = 0; i < 8; ++i) le[i] = static_cast<unsigned char>(bits >> (8 * i));
        feed_bytes(le, 8);
    }
    void feed(uint64_t v) {
        unsigned char le[8];
        for (int i = 0; i < 8; ++i) le[i] = static_cast<unsigned char>(v >> (8 * i));
        feed_bytes(le, 8);
    }
};

} // namespace

std::string mesh_content_hash(const TriangleMesh& mesh) {
    Fnv1a64 h;
    h.feed(static_cast<uint64_t>(mesh.vertex_count()));
    h.feed(static_cast<uint64_t>(mesh.triangle_count()));
    h.feed(static_cast<uint64_t>(mesh.has_colors() ? 1 : 0));
    for (const auto& v : mesh.vertices)
        for (int c = 0; c < 3; ++c) h.feed(v[c]);
    for (const auto& tri : mesh.triangles)
        for (int c = 0; c < 3; ++c) h.feed(static_cast<uint64_t>(tri[c]));
    for (const auto& col : mesh.colors)
        for (int c = 0; c < 3; ++c) h.feed(col[c]);

    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 0; i < 16; ++i) out[15 - i] = digits[(h.state >> (4 * i)) & 0xf];
    return out;
}

} // namespace schrodiff

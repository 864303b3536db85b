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

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "schrodiff/errors.hpp"

namespace schrodiff {

// Triangle area below this (in squared model units) counts as degenerate.
inline constexpr double kDegenerateAreaThreshold = 1e-12;

/// A triangle mesh with optional per-vertex RGB colors (each channel in [0,1]).
struct TriangleMesh {
    std::vector<Eigen::Vector3d> vertices;
    std::vector<std::array<int, 3>> triangles;
    std::vector<Eigen::Vector3d> colors; // empty, or one RGB triple per vertex

    int vertex_count() const { return static_cast<int>(vertices.size()); }
    int triangle_count() const { return static_cast<int>(triangles.size()); }
    bool has_colors() const { return !colors.empty(); }

    double triangle_area(int t) const;
    Eigen::Vector3d centroid() const;

    /// Lengths of the unique (undirected) edges, in triangle order.
    std::vector<double> unique_edge_lengths() const;
    double median_edge_length() const;

    /// vertex id -> indices of incident triangles (the one-ring).
    std::vector<std::vector<int>> vertex_triangle_adjacency() const;

    /// Throws if any structural invariant is broken (index range, repeated
    /// vertices inside a triangle, degenerate area, minimum counts).
    void validate() const;
};

/// One real value per vertex of a particular mesh.
struct VertexScalarField {
    Eigen::VectorXd values;

    VertexScalarField() = default;
    explicit VertexScalarField(Eigen::VectorXd v) : values(std::move(v)) {}
    static VertexScalarField zero(int n) { return VertexScalarField(Eigen::VectorXd::Zero(n)); }
    static VertexScalarField constant(int n, double c) {
        return VertexScalarField(Eigen::VectorXd::Constant(n, c));
    }

    int size() const { return static_cast<int>(values.size()); }
    double operator[](int i) const { return values[i]; }
    double& operator[](int i) { return values[i]; }

    bool bound_to(const TriangleMesh& mesh) const { return size() == mesh.vertex_count(); }
    bool all_finite() const { return values.allFinite(); }
};

/// Rec. 709 luma of the per-vertex colors, clamped to [0,1].
/// Throws MissingColor when the mesh carries no color data.
VertexScalarField luminance(const TriangleMesh& mesh);

/// FNV-1a content hash over vertex positions, connectivity and colors,
/// rendered as 16 hex digits. Identical meshes hash identically across runs.
std::string mesh_content_hash(const TriangleMesh& mesh);

} // namespace schrodiff

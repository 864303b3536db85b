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

#include <iosfwd>
#include <optional>
#include <string>

#include <Eigen/SparseCore>

#include "schrodiff/mesh.hpp"

namespace schrodiff {

enum class PotentialKind { none, raw, log_raw, grad, log_grad };

const char* to_string(PotentialKind kind);
std::optional<PotentialKind> potential_kind_from_string(const std::string& name);

/// How to turn a texture field into the nonnegative potential V:
///   none      V = 0
///   raw       V = alpha * (I - min I)
///   log_raw   V = alpha * log(1 + beta * (I - min I))
///   grad      V = alpha * |grad I|
///   log_grad  V = alpha * log(1 + beta * |grad I|)      (the default)
/// beta = nullopt requests the automatic choice 1 / mean(|grad I| > 0),
/// which makes the log potentials invariant to uniform texture rescaling.
struct PotentialSpec {
    PotentialKind kind = PotentialKind::log_grad;
    double alpha = 1.0;
    std::optional<double> beta; // nullopt = auto

    bool uses_texture() const { return kind != PotentialKind::none; }
    bool uses_beta() const {
        return kind == PotentialKind::log_raw || kind == PotentialKind::log_grad;
    }
};

/// The assembled symmetric operator H = (-Laplacian) + diag(V), stored with
/// both triangles mirrored exactly, plus the parameters that produced it.
/// Off-diagonals are <= 0, the diagonal is >= 0, and with V = 0 every row
/// sums to zero, so H is positive semidefinite.
struct SparseSymmetricOperator {
    Eigen::SparseMatrix<double> matrix;
    double bandwidth = 0.0; // s = s_factor * median edge length
    double s_factor = 0.0;
    PotentialKind potential_kind = PotentialKind::none;
    double alpha = 0.0;
    double beta = 0.0;

    int dimension() const { return static_cast<int>(matrix.rows()); }
    Eigen::VectorXd apply(const Eigen::VectorXd& f) const { return matrix * f; }
};

/// Assemble the Gaussian-weighted mesh Laplacian (as -Laplacian, so positive
/// semidefinite). Each triangle t with area A contributes, for every vertex
/// pair (a,b) in t, the weight
///     w = 1/(4 pi s^2) * A/3 * exp(-|v_a - v_b|^2 / (4 s))
/// to the (a,b) off-diagonal (as -w) and to both diagonals (as +w), with
/// s = s_factor * median(unique edge lengths). The support of each row is
/// the vertex one-ring. Weights are strictly positive on valid meshes.
SparseSymmetricOperator assemble_mesh_laplacian(const TriangleMesh& mesh, double s_factor = 0.2);

/// Norm of the surface gradient of I, estimated per incident triangle from
/// the two edge-direction difference quotients and averaged (unweighted)
/// over each vertex one-ring. Exact for linear fields over planar one-rings.
/// Throws SingularTriangle when a triangle's edge directions are nearly
/// collinear (Gram matrix condition number above 1e12).
VertexScalarField gradient_norm_field(const TriangleMesh& mesh, const VertexScalarField& I);

struct PotentialResult {
    VertexScalarField field;
    double resolved_beta = 0.0; // beta actually used (auto rule applied)
};

/// Evaluate the potential for `spec`. `texture` may be null only for
/// PotentialKind::none. The result is nonnegative everywhere.
PotentialResult build_potential(const TriangleMesh& mesh, const VertexScalarField* texture,
                                const PotentialSpec& spec);

/// H = (-Laplacian) + diag(V). Rejects potentials below -1e-12; values in
/// [-1e-12, 0) are clamped to zero. kind/alpha/beta are recorded as metadata.
SparseSymmetricOperator assemble_schrodinger(const SparseSymmetricOperator& laplacian,
                                             const VertexScalarField& V,
                                             PotentialKind kind = PotentialKind::none,
                                             double alpha = 0.0, double beta = 0.0);

/// Debug dump as "i j value" triplets, 0-based, upper triangle (i <= j) in
/// row-major order, 17 significant digits. For cross-implementation diffing.
void dump_operator(const SparseSymmetricOperator& op, std::ostream& out);

} // namespace schrodiff

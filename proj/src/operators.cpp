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

#include "schrodiff/operators.hpp"

#include <cassert>
#include <cmath>
#include <map>
#include <ostream>
#include <stdexcept>

namespace schrodiff {

const char* to_string(PotentialKind kind) {
    switch (kind) {
        case PotentialKind::none: return "none";
        case PotentialKind::raw: return "raw";
        case PotentialKind::log_raw: return "log_raw";
        case PotentialKind::grad: return "grad";
        case PotentialKind::log_grad: return "log_grad";
    }
    return "?";
}

std::optional<PotentialKind> potential_kind_from_string(const std::string& name) {
    if (name == "none") return PotentialKind::none;
    if (name == "raw") return PotentialKind::raw;
    if (name == "log_raw") return PotentialKind::log_raw;
    if (name == "grad") return PotentialKind::grad;
    if (name == "log_grad") return PotentialKind::log_grad;
    return std::nullopt;
}

SparseSymmetricOperator assemble_mesh_laplacian(const TriangleMesh& mesh, double s_factor) {
    if (!(s_factor > 0.0)) throw std::invalid_argument("s_factor must be positive");
    const double median = mesh.median_edge_length();
    if (!(median > 0.0)) throw DegenerateMeshError("median edge length is zero");
    const double s = s_factor * median;
    const double prefactor = 1.0 / (4.0 * M_PI * s * s);

    const int n = mesh.vertex_count();
    // Accumulate one value per unordered vertex pair and mirror it at the
    // end, so H(a,b) and H(b,a) are bitwise equal. Triangle order fixes the
    // summation order regardless of any caller-side parallelism.
    std::map<std::pair<int, int>, double> pair_weight;
    Eigen::VectorXd diagonal = Eigen::VectorXd::Zero(n);

    for (int t = 0; t < mesh.triangle_count(); ++t) {
        const auto& tri = mesh.triangles[t];
        const double area_term = prefactor * mesh.triangle_area(t) / 3.0;
        for (int e = 0; e < 3; ++e) {
            int a = tri[e], b = tri[(e + 1) % 3];
            const double d2 = (mesh.vertices[a] - mesh.vertices[b]).squaredNorm();
            const double w = area_term * std::exp(-d2 / (4.0 * s));
            assert(w > 0.0);
            if (a > b) std::swap(a, b);
            pair_weight[{a, b}] += w;
            diagonal[a] += w;
            diagonal[b] += w;
        }
    }

    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(2 * pair_weight.size() + n);
    for (const auto& [edge, w] : pair_weight) {
        triplets.emplace_back(edge.first, edge.second, -w);
        triplets.emplace_back(edge.second, edge.first, -w);
    }
    for (int i = 0; i < n; ++i)
        if (diagonal[i] != 0.0) triplets.emplace_back(i, i, diagonal[i]);

    SparseSymmetricOperator op;
    op.matrix.resize(n, n);
    op.matrix.setFromTriplets(triplets.begin(), triplets.end());
    op.matrix.makeCompressed();
    op.bandwidth = s;
    op.s_factor = s_factor;
    return op;
}

VertexScalarField gradient_norm_field(const TriangleMesh& mesh, const VertexScalarField& I) {
    if (!I.bound_to(mesh)) throw std::invalid_argument("field not bound to mesh");
    const auto ring = mesh.vertex_triangle_adjacency();
    Eigen::VectorXd out = Eigen::VectorXd::Zero(mesh.vertex_count());

    for (int v = 0; v < mesh.vertex_count(); ++v) {
        if (ring[v].empty()) continue;
        double sum = 0.0;
        for (int t : ring[v]) {
            const auto& tri = mesh.triangles[t];
            int u = -1, w = -1;
            for (int c = 0; c < 3; ++c)
                if (tri[c] != v) (u == -1 ? u : w) = tri[c];

            const Eigen::Vector3d eu = mesh.vertices[u] - mesh.vertices[v];
            const Eigen::Vector3d ew = mesh.vertices[w] - mesh.vertices[v];
            const double lu = eu.norm(), lw = ew.norm();
            const double cosang = eu.dot(ew) / (lu * lw);

            // Gram matrix of the unit edge directions is [[1,c],[c,1]];
            // its condition number blows up as the edges become collinear.
            const double cond = (1.0 + std::abs(cosang)) / std::max(1.0 - std::abs(cosang), 0.0);
            if (!(cond <= 1e12)) throw SingularTriangleError(t, cond);

            const double du = (I[u] - I[v]) / lu;
            const double dw = (I[w] - I[v]) / lw;
            const double q2 = (du * du - 2.0 * cosang * du * dw + dw * dw) /
                              (1.0 - cosang * cosang);
            sum += std::sqrt(std::max(q2, 0.0));
        }
        out[v] = sum / static_cast<double>(ring[v].size());
    }
    return VertexScalarField(std::move(out));
}

namespace {

double auto_beta(const VertexScalarField& grad_norm) {
    double sum = 0.0;
    long count = 0;
    for (int i = 0; i < grad_norm.size(); ++i)
        if (grad_norm[i] > 0.0) {
            sum += grad_norm[i];
            ++count;
        }
    return count > 0 ? static_cast<double>(count) / sum : 1.0;
}

} // namespace

PotentialResult build_potential(const TriangleMesh& mesh, const VertexScalarField* texture,
                                const PotentialSpec& spec) {
    if (!(spec.alpha >= 0.0)) throw std::invalid_argument("alpha must be nonnegative");
    if (spec.beta && !(*spec.beta >= 0.0)) throw std::invalid_argument("beta must be nonnegative");

    const int n = mesh.vertex_count();
    if (spec.kind == PotentialKind::none)
        return {VertexScalarField::zero(n), spec.beta.value_or(0.0)};

    if (texture == nullptr) throw MissingColorError();
    if (!texture->bound_to(mesh)) throw std::invalid_argument("texture field not bound to mesh");

    PotentialResult result;
    switch (spec.kind) {
        case PotentialKind::raw: {
            const double lo = texture->values.minCoeff();
            result.field = VertexScalarField(spec.alpha * (texture->values.array() - lo));
            result.resolved_beta = spec.beta.value_or(0.0);
            break;
        }
        case PotentialKind::log_raw: {
            // The auto beta rule is gradient-based for both log kinds.
            const double b = spec.beta ? *spec.beta : auto_beta(gradient_norm_field(mesh, *texture));
            const double lo = texture->values.minCoeff();
            result.field = VertexScalarField(
                spec.alpha * (b * (texture->values.array() - lo)).log1p());
            result.resolved_beta = b;
            break;
        }
        case PotentialKind::grad: {
            VertexScalarField g = gradient_norm_field(mesh, *texture);
            result.field = VertexScalarField(spec.alpha * g.values);
            result.resolved_beta = spec.beta.value_or(0.0);
            break;
        }
        case PotentialKind::log_grad: {
            VertexScalarField g = gradient_norm_field(mesh, *texture);
            const double b = spec.beta ? *spec.beta : auto_beta(g);
            result.field = VertexScalarField(spec.alpha * (b * g.values.array()).log1p());
            result.resolved_beta = b;
            break;
        }
        case PotentialKind::none: break; // handled above
    }
    return result;
}

SparseSymmetricOperator assemble_schrodinger(const SparseSymmetricOperator& laplacian,
                                             const VertexScalarField& V, PotentialKind kind,
                                             double alpha, double beta) {
    const int n = laplacian.dimension();
    if (V.size() != n) throw std::invalid_argument("potential dimension mismatch");

    Eigen::VectorXd clamped(n);
    for (int i = 0; i < n; ++i) {
        if (V[i] < -1e-12) throw NegativePotentialError(i, V[i]);
        clamped[i] = std::max(V[i], 0.0);
    }

    std::vector<Eigen::Triplet<double>> diag;
    diag.reserve(n);
    for (int i = 0; i < n; ++i)
        if (clamped[i] != 0.0) diag.emplace_back(i, i, clamped[i]);
    Eigen::SparseMatrix<double> D(n, n);
    D.setFromTriplets(diag.begin(), diag.end());

    SparseSymmetricOperator op;
    op.matrix = laplacian.matrix + D;
    op.matrix.makeCompressed();
    op.bandwidth = laplacian.bandwidth;
    op.s_factor = laplacian.s_factor;
    op.potential_kind = kind;
    op.alpha = alpha;
    op.beta = beta;
    return op;
}

void dump_operator(const SparseSymmetricOperator& op, std::ostream& out) {
    char buf[64];
    for (int i = 0; i < op.dimension(); ++i) {
        // Column i of the symmetric matrix holds row i transposed.
        for (Eigen::SparseMatrix<double>::InnerIterator it(op.matrix, i); it; ++it) {
            if (it.row() < i) continue; // symmetric: keep i <= j only
            std::snprintf(buf, sizeof buf, "%d %ld %.17g\n", i, static_cast<long>(it.row()),
                          it.value());
            out << buf;
        }
    }
}

} // namespace schrodiff

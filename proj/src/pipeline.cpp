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

#include "schrodiff/pipeline.hpp"

namespace schrodiff {

SparseSymmetricOperator build_operator(const TriangleMesh& mesh, const PipelineConfig& config) {
    const SparseSymmetricOperator laplacian = assemble_mesh_laplacian(mesh, config.s_factor);
    if (!config.potential.uses_texture())
        return assemble_schrodinger(laplacian, VertexScalarField::zero(mesh.vertex_count()),
                                    PotentialKind::none, config.potential.alpha, 0.0);

    const VertexScalarField texture = luminance(mesh);
    const PotentialResult potential = build_potential(mesh, &texture, config.potential);
    return assemble_schrodinger(laplacian, potential.field, config.potential.kind,
                                config.potential.alpha, potential.resolved_beta);
}

DiffusionSignature compute_signature(const TriangleMesh& mesh, const PipelineConfig& config) {
    const SparseSymmetricOperator H = build_operator(mesh, config);
    const int k = std::min(config.k, mesh.vertex_count());
    const SpectralDecomposition dec = eigendecompose(H, k);
    const double t = config.time.resolve(dec);
    const SamplePlan plan = farthest_point_sample(mesh, config.samples);
    DiffusionSignature sig = build_histogram(dec, t, plan, config.bins, config.fixed_range);
    sig.mesh_hash = mesh_content_hash(mesh);
    return sig;
}

} // namespace schrodiff

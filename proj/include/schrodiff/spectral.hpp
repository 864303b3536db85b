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
#include <vector>

#include "schrodiff/operators.hpp"

namespace schrodiff {

/// The k algebraically smallest eigenpairs of a SparseSymmetricOperator.
/// Eigenvalues are ascending and nonnegative up to roundoff; eigenvectors
/// are orthonormal, with the sign fixed so each vector's largest-magnitude
/// entry is positive (ties broken by lowest index).
struct SpectralDecomposition {
    Eigen::VectorXd eigenvalues;  // size k, ascending
    Eigen::MatrixXd eigenvectors; // n x k, column j pairs with eigenvalues[j]

    double bandwidth = 0.0;
    double s_factor = 0.0;
    PotentialKind potential_kind = PotentialKind::none;
    double alpha = 0.0;
    double beta = 0.0;

    int size() const { return static_cast<int>(eigenvalues.size()); }
    int dimension() const { return static_cast<int>(eigenvectors.rows()); }
};

enum class EigenMethod {
    automatic, // dense for small problems, Lanczos otherwise
    dense,
    lanczos
};

/// Compute the k smallest eigenpairs of H. The Lanczos path runs in
/// shift-invert mode (sparse LDLT of H + sigma I) with full
/// reorthogonalization and a deterministic start vector, so results are
/// reproducible bit-for-bit across runs.
SpectralDecomposition eigendecompose(const SparseSymmetricOperator& H, int k,
                                     EigenMethod method = EigenMethod::automatic);

/// Diffusion time, either fixed by the caller or derived from the spectrum:
/// auto resolves to ln 2 / (2 lambda_2), the time at which the slowest
/// nontrivial mode's distance contribution has decayed to one half.
struct DiffusionTime {
    static DiffusionTime automatic() { return DiffusionTime{true, 0.0}; }
    static DiffusionTime fixed(double t) { return DiffusionTime{false, t}; }

    /// Throws DegenerateSpectrum when lambda_2 <= 1e-12 * lambda_k
    /// (disconnected mesh or too few eigenpairs).
    double resolve(const SpectralDecomposition& dec) const;

    bool is_auto = true;
    double value = 0.0;
};

/// One row/column of the diffusion kernel at time t:
/// values[y] = sum_j exp(-lambda_j t) phi_j(x) phi_j(y), truncated at k.
VertexScalarField kernel_slice(const SpectralDecomposition& dec, double t, int x);

/// Diffusion distance between vertices x and y at time t:
/// sqrt( sum_j exp(-2 lambda_j t) (phi_j(x) - phi_j(y))^2 ).
double diffusion_distance(const SpectralDecomposition& dec, double t, int x, int y);

/// Diffusion distances from x to every vertex, in O(n k).
VertexScalarField distance_map(const SpectralDecomposition& dec, double t, int x);

/// Implicit-Euler evolution of du/dt = -H u over [0, t] in `steps` steps,
/// each solving (Id + (t/steps) H) u_{m+1} = u_m by sparse LDLT. Serves as
/// the time-stepping oracle for the spectral kernel.
VertexScalarField evolve(const SparseSymmetricOperator& H, const VertexScalarField& u0, double t,
                         int steps);

struct StabilityRow {
    double eps;
    double error; // || u_eps(t) - u_0(t) ||_2
};

/// Evolve u0 under potentials V + eps*N for each listed eps and report the
/// L2 deviation from the eps = 0 solution, rows sorted by eps descending.
/// All runs share the same solver settings. Throws HypothesisViolated when
/// V or any V + eps*N dips below zero.
std::vector<StabilityRow> stability_experiment(const SparseSymmetricOperator& laplacian,
                                               const VertexScalarField& V,
                                               const VertexScalarField& N,
                                               std::vector<double> eps_list,
                                               const VertexScalarField& u0, double t, int steps);

/// Least-squares slope of log(error) vs log(eps) over rows with positive
/// entries; NaN when fewer than two usable rows exist.
double log_log_slope(const std::vector<StabilityRow>& rows);

/// Text dump "vertex_id value" per line, 17 significant digits.
void write_field_dump(const VertexScalarField& field, std::ostream& out);

} // namespace schrodiff

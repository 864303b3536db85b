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

#include "schrodiff/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>

namespace schrodiff {

namespace {

// Deterministic, sign-mixed start vector (Weyl sequence); no RNG anywhere.
Eigen::VectorXd lanczos_start(int n, int sequence) {
    const double golden = 0.6180339887498949;
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) {
        double x = golden * static_cast<double>(i + 1 + 131 * sequence);
        v[i] = (x - std::floor(x)) - 0.5;
    }
    const double norm = v.norm();
    return norm > 0 ? Eigen::VectorXd(v / norm) : Eigen::VectorXd::Unit(n, 0);
}

void fix_signs(Eigen::MatrixXd& vectors) {
    for (int j = 0; j < vectors.cols(); ++j) {
        int best = 0;
        for (int i = 1; i < vectors.rows(); ++i)
            if (std::abs(vectors(i, j)) > std::abs(vectors(best, j))) best = i;
        if (vectors(best, j) < 0.0) vectors.col(j) = -vectors.col(j);
    }
}

double infinity_norm(const Eigen::SparseMatrix<double>& m) {
    Eigen::VectorXd row_sums = Eigen::VectorXd::Zero(m.rows());
    for (int c = 0; c < m.outerSize(); ++c)
        for (Eigen::SparseMatrix<double>::InnerIterator it(m, c); it; ++it)
            row_sums[it.row()] += std::abs(it.value());
    return m.nonZeros() > 0 ? row_sums.maxCoeff() : 0.0;
}

void check_decomposition(const SparseSymmetricOperator& H, const Eigen::VectorXd& values,
                         const Eigen::MatrixXd& vectors, long iterations) {
    const Eigen::MatrixXd gram = vectors.transpose() * vectors;
    const double ortho_defect =
        (gram - Eigen::MatrixXd::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
    if (ortho_defect > 1e-8)
        throw ConvergenceFailureError(iterations, "eigenvector orthonormality defect " +
                                                      std::to_string(ortho_defect));
    for (int j = 0; j < values.size(); ++j) {
        const double res = (H.matrix * vectors.col(j) - values[j] * vectors.col(j)).norm();
        if (res > 1e-6 * std::max(1.0, values[j]))
            throw ConvergenceFailureError(iterations, "eigenpair " + std::to_string(j) +
                                                          " residual " + std::to_string(res));
    }
}

std::pair<Eigen::VectorXd, Eigen::MatrixXd> dense_smallest(const SparseSymmetricOperator& H,
                                                           int k) {
    Eigen::MatrixXd dense(H.matrix);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(dense);
    if (solver.info() != Eigen::Success)
        throw ConvergenceFailureError(0, "dense symmetric eigensolver failed");
    return {solver.eigenvalues().head(k), solver.eigenvectors().leftCols(k)};
}

// Shift-invert Lanczos with full reorthogonalization. Factors H + sigma I
// once and extracts the largest eigenvalues of its inverse, which map to the
// smallest eigenvalues of H via lambda = 1/theta - sigma.
std::pair<Eigen::VectorXd, Eigen::MatrixXd> lanczos_smallest(const SparseSymmetricOperator& H,
                                                             int k) {
    const int n = H.dimension();
    const double hinf = infinity_norm(H.matrix);
    const double sigma = std::max(1e-12, 1e-6 * hinf);

    Eigen::SparseMatrix<double> shifted = H.matrix;
    std::vector<Eigen::Triplet<double>> diag;
    for (int i = 0; i < n; ++i) diag.emplace_back(i, i, sigma);
    Eigen::SparseMatrix<double> D(n, n);
    D.setFromTriplets(diag.begin(), diag.end());
    shifted = shifted + D;

    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(shifted);
    if (ldlt.info() != Eigen::Success)
        throw ConvergenceFailureError(0, "LDLT factorization of the shifted operator failed");

    long matvecs = 0;
    int m = std::min(n, std::max(2 * k + 32, 64));
    const double residual_target = 1e-9;

    while (true) {
        Eigen::MatrixXd basis(n, m);
        Eigen::VectorXd diag_a(m), offdiag_b(m); // b[j] couples step j to j+1
        int sequence = 0;
        basis.col(0) = lanczos_start(n, sequence++);
        int built = 0;

        for (int j = 0; j < m; ++j) {
            Eigen::VectorXd w = ldlt.solve(basis.col(j));
            ++matvecs;
            diag_a[j] = basis.col(j).dot(w);
            w -= diag_a[j] * basis.col(j);
            if (j > 0) w -= offdiag_b[j - 1] * basis.col(j - 1);
            // Full reorthogonalization, twice for good measure.
            auto seen = basis.leftCols(j + 1);
            w -= seen * (seen.transpose() * w);
            w -= seen * (seen.transpose() * w);
            built = j + 1;
            if (j + 1 == m) break;
            double b = w.norm();
            if (b < 1e-13) {
                // Invariant subspace found; continue in its complement.
                Eigen::VectorXd fresh = lanczos_start(n, sequence++);
                fresh -= seen * (seen.transpose() * fresh);
                const double fn = fresh.norm();
                if (fn < 1e-13) break; // complement exhausted (m close to n)
                offdiag_b[j] = 0.0;
                basis.col(j + 1) = fresh / fn;
            } else {
                offdiag_b[j] = b;
                basis.col(j + 1) = w / b;
            }
        }

        Eigen::MatrixXd tridiag = Eigen::MatrixXd::Zero(built, built);
        for (int j = 0; j < built; ++j) {
            tridiag(j, j) = diag_a[j];
            if (j + 1 < built) tridiag(j, j + 1) = tridiag(j + 1, j) = offdiag_b[j];
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> small(tridiag);
        if (small.info() != Eigen::Success)
            throw ConvergenceFailureError(matvecs, "tridiagonal eigensolver failed");

        if (built >= k) {
            // Largest theta of the inverse operator = smallest lambda of H.
            Eigen::VectorXd values(k);
            Eigen::MatrixXd vectors(n, k);
            bool ok = true;
            for (int j = 0; j < k; ++j) {
                const double theta = small.eigenvalues()[built - 1 - j];
                if (theta <= 0.0) {
                    ok = false;
                    break;
                }
                values[k - 1 - j] = 1.0 / theta - sigma;
                vectors.col(k - 1 - j) = basis.leftCols(built) * small.eigenvectors().col(built - 1 - j);
            }
            if (ok) {
                for (int j = 0; j < k; ++j) {
                    vectors.col(j).normalize();
                    const double res =
                        (H.matrix * vectors.col(j) - values[j] * vectors.col(j)).norm();
                    if (res > residual_target * std::max(1.0, values[j])) {
                        ok = false;
                        break;
                    }
                }
            }
            if (ok) return {values, vectors};
        }

        if (m >= n)
            throw ConvergenceFailureError(matvecs, "Lanczos did not converge at full subspace size");
        m = std::min(n, 2 * m);
    }
}

} // namespace

SpectralDecomposition eigendecompose(const SparseSymmetricOperator& H, int k, EigenMethod method) {
    const int n = H.dimension();
    if (k < 1 || k > n) throw KTooLargeError(k, n);

    if (method == EigenMethod::automatic)
        method = (n <= 600 || 4 * k >= n) ? EigenMethod::dense : EigenMethod::lanczos;

    auto [values, vectors] =
        method == EigenMethod::dense ? dense_smallest(H, k) : lanczos_smallest(H, k);

    // Ascending order (the dense path already is; keep it canonical).
    std::vector<int> order(k);
    for (int j = 0; j < k; ++j) order[j] = j;
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return values[a] < values[b]; });
    Eigen::VectorXd sorted_values(k);
    Eigen::MatrixXd sorted_vectors(n, k);
    for (int j = 0; j < k; ++j) {
        sorted_values[j] = values[order[j]];
        sorted_vectors.col(j) = vectors.col(order[j]);
    }
    fix_signs(sorted_vectors);
    check_decomposition(H, sorted_values, sorted_vectors, 0);

    SpectralDecomposition dec;
    dec.eigenvalues = std::move(sorted_values);
    dec.eigenvectors = std::move(sorted_vectors);
    dec.bandwidth = H.bandwidth;
    dec.s_factor = H.s_factor;
    dec.potential_kind = H.potential_kind;
    dec.alpha = H.alpha;
    dec.beta = H.beta;
    return dec;
}

double DiffusionTime::resolve(const SpectralDecomposition& dec) const {
    if (!is_auto) {
        if (!(value > 0.0)) throw std::invalid_argument("diffusion time must be positive");
        return value;
    }
    if (dec.size() < 2)
        throw DegenerateSpectrumError("auto time needs at least 2 eigenpairs");
    const double lambda2 = dec.eigenvalues[1];
    const double lambda_top = dec.eigenvalues[dec.size() - 1];
    if (lambda2 <= 1e-12 * lambda_top)
        throw DegenerateSpectrumError("second eigenvalue is numerically zero (disconnected mesh?)");
    return std::log(2.0) / (2.0 * lambda2);
}

VertexScalarField kernel_slice(const SpectralDecomposition& dec, double t, int x) {
    if (x < 0 || x >= dec.dimension()) throw std::invalid_argument("vertex id out of range");
    if (!(t >= 0.0)) throw std::invalid_argument("time must be nonnegative");
    const int n = dec.dimension(), k = dec.size();
    Eigen::VectorXd out = Eigen::VectorXd::Zero(n);
    for (int j = 0; j < k; ++j) {
        const double w = std::exp(-dec.eigenvalues[j] * t) * dec.eigenvectors(x, j);
        out += w * dec.eigenvectors.col(j);
    }
    return VertexScalarField(std::move(out));
}

double diffusion_distance(const SpectralDecomposition& dec, double t, int x, int y) {
    if (x < 0 || x >= dec.dimension() || y < 0 || y >= dec.dimension())
        throw std::invalid_argument("vertex id out of range");
    if (!(t >= 0.0)) throw std::invalid_argument("time must be nonnegative");
    double acc = 0.0;
    for (int j = 0; j < dec.size(); ++j) {
        const double d = dec.eigenvectors(x, j) - dec.eigenvectors(y, j);
        acc += std::exp(-2.0 * dec.eigenvalues[j] * t) * d * d;
    }
    return std::sqrt(acc);
}

VertexScalarField distance_map(const SpectralDecomposition& dec, double t, int x) {
    if (x < 0 || x >= dec.dimension()) throw std::invalid_argument("vertex id out of range");
    if (!(t >= 0.0)) throw std::invalid_argument("time must be nonnegative");
    const int n = dec.dimension(), k = dec.size();
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(n);
    // Accumulate over j in the same order as diffusion_distance so the two
    // routes agree bitwise; exponentials are evaluated once per mode.
    for (int j = 0; j < k; ++j) {
        const double decay = std::exp(-2.0 * dec.eigenvalues[j] * t);
        const double px = dec.eigenvectors(x, j);
        const auto col = dec.eigenvectors.col(j);
        for (int y = 0; y < n; ++y) {
            const double d = px - col[y];
            acc[y] += decay * d * d;
        }
    }
    return VertexScalarField(acc.cwiseSqrt());
}

VertexScalarField evolve(const SparseSymmetricOperator& H, const VertexScalarField& u0, double t,
                         int steps) {
    const int n = H.dimension();
    if (u0.size() != n) throw std::invalid_argument("initial value dimension mismatch");
    if (steps < 1) throw std::invalid_argument("steps must be positive");
    if (!(t >= 0.0)) throw std::invalid_argument("time must be nonnegative");
    if (t == 0.0) return u0;

    const double h = t / static_cast<double>(steps);
    Eigen::SparseMatrix<double> stepper = h * H.matrix;
    std::vector<Eigen::Triplet<double>> eye;
    eye.reserve(n);
    for (int i = 0; i < n; ++i) eye.emplace_back(i, i, 1.0);
    Eigen::SparseMatrix<double> identity(n, n);
    identity.setFromTriplets(eye.begin(), eye.end());
    stepper = stepper + identity;

    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(stepper);
    if (ldlt.info() != Eigen::Success)
        throw SolveFailureError("implicit Euler factorization failed");

    Eigen::VectorXd u = u0.values;
    for (int m = 0; m < steps; ++m) u = ldlt.solve(u);
    return VertexScalarField(std::move(u));
}

std::vector<StabilityRow> stability_experiment(const SparseSymmetricOperator& laplacian,
                                               const VertexScalarField& V,
                                               const VertexScalarField& N,
                                               std::vector<double> eps_list,
                                               const VertexScalarField& u0, double t, int steps) {
    const int n = laplacian.dimension();
    if (V.size() != n || N.size() != n || u0.size() != n)
        throw std::invalid_argument("field dimension mismatch");

    for (int i = 0; i < n; ++i)
        if (V[i] < -1e-12)
            throw HypothesisViolatedError("V[" + std::to_string(i) + "] = " + std::to_string(V[i]));
    for (double eps : eps_list)
        for (int i = 0; i < n; ++i)
            if (V[i] + eps * N[i] < -1e-12)
                throw HypothesisViolatedError("V + eps*N < 0 at vertex " + std::to_string(i) +
                                              " for eps = " + std::to_string(eps));

    std::sort(eps_list.begin(), eps_list.end(), std::greater<double>());

    const SparseSymmetricOperator base = assemble_schrodinger(laplacian, V);
    const VertexScalarField reference = evolve(base, u0, t, steps);

    std::vector<StabilityRow> rows;
    rows.reserve(eps_list.size());
    for (double eps : eps_list) {
        VertexScalarField perturbed(Eigen::VectorXd(V.values + eps * N.values));
        const SparseSymmetricOperator He = assemble_schrodinger(laplacian, perturbed);
        const VertexScalarField ue = evolve(He, u0, t, steps);
        rows.push_back({eps, (ue.values - reference.values).norm()});
    }
    return rows;
}

double log_log_slope(const std::vector<StabilityRow>& rows) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    for (const auto& r : rows) {
        if (!(r.eps > 0.0) || !(r.error > 0.0)) continue;
        const double x = std::log(r.eps), y = std::log(r.error);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++m;
    }
    if (m < 2) return std::numeric_limits<double>::quiet_NaN();
    const double denom = m * sxx - sx * sx;
    return denom != 0.0 ? (m * sxy - sx * sy) / denom : std::numeric_limits<double>::quiet_NaN();
}

void write_field_dump(const VertexScalarField& field, std::ostream& out) {
    char buf[64];
    for (int i = 0; i < field.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%d %.17g\n", i, field[i]);
        out << buf;
    }
}

} // namespace schrodiff

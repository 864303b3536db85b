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

#include <stdexcept>
#include <string>

namespace schrodiff {

// Coarse error categories, used by the CLI to map failures to exit codes.
enum class ErrorKind {
    parse,        // exit 1: malformed or unusable input data
    assembly,     // exit 2: operator or potential construction failed
    eigensolve,   // exit 3: spectral computation or linear solve failed
    io,           // exit 4: filesystem trouble
    bin_mismatch, // exit 5
    empty_database,     // exit 6
    hypothesis_violated // exit 7
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, std::string name, const std::string& what)
        : std::runtime_error(name + ": " + what), kind_(kind), name_(std::move(name)) {}

    ErrorKind kind() const noexcept { return kind_; }
    const std::string& name() const noexcept { return name_; }

private:
    ErrorKind kind_;
    std::string name_;
};

struct FileNotFoundError : Error {
    explicit FileNotFoundError(const std::string& path)
        : Error(ErrorKind::parse, "FileNotFound", path) {}
};

struct ParseError : Error {
    ParseError(const std::string& path, long line, const std::string& what)
        : Error(ErrorKind::parse, "ParseError",
                path + ":" + std::to_string(line) + ": " + what),
          line_number(line) {}
    long line_number;
};

struct NonTriangleFaceError : Error {
    NonTriangleFaceError(const std::string& path, long line, long vertex_count)
        : Error(ErrorKind::parse, "NonTriangleFace",
                path + ":" + std::to_string(line) + ": face with " +
                    std::to_string(vertex_count) + " vertices (only triangles accepted)") {}
};

struct DegenerateTriangleError : Error {
    DegenerateTriangleError(long face_index, double area)
        : Error(ErrorKind::parse, "DegenerateTriangle",
                "face " + std::to_string(face_index) + " has area " + std::to_string(area)),
          face_index(face_index) {}
    long face_index;
};

struct MissingColorError : Error {
    MissingColorError() : Error(ErrorKind::parse, "MissingColor", "mesh has no per-vertex color data") {}
};

struct SchemaError : Error {
    explicit SchemaError(const std::string& what) : Error(ErrorKind::parse, "SchemaError", what) {}
};

struct IoError : Error {
    explicit IoError(const std::string& what) : Error(ErrorKind::io, "IoError", what) {}
};

struct DegenerateMeshError : Error {
    explicit DegenerateMeshError(const std::string& what)
        : Error(ErrorKind::assembly, "DegenerateMesh", what) {}
};

struct SingularTriangleError : Error {
    SingularTriangleError(long face_index, double condition)
        : Error(ErrorKind::assembly, "SingularTriangle",
                "face " + std::to_string(face_index) + " has near-collinear edges (cond " +
                    std::to_string(condition) + ")") {}
};

struct NegativePotentialError : Error {
    NegativePotentialError(long vertex, double value)
        : Error(ErrorKind::assembly, "NegativePotential",
                "V[" + std::to_string(vertex) + "] = " + std::to_string(value)) {}
};

struct ConvergenceFailureError : Error {
    ConvergenceFailureError(long iterations, const std::string& what)
        : Error(ErrorKind::eigensolve, "ConvergenceFailure",
                what + " (after " + std::to_string(iterations) + " iterations)"),
          iterations(iterations) {}
    long iterations;
};

struct KTooLargeError : Error {
    KTooLargeError(long k, long n)
        : Error(ErrorKind::eigensolve, "KTooLarge",
                "requested " + std::to_string(k) + " eigenpairs of a " + std::to_string(n) +
                    "-dimensional operator") {}
};

struct SolveFailureError : Error {
    explicit SolveFailureError(const std::string& what)
        : Error(ErrorKind::eigensolve, "SolveFailure", what) {}
};

struct DegenerateSpectrumError : Error {
    explicit DegenerateSpectrumError(const std::string& what)
        : Error(ErrorKind::eigensolve, "DegenerateSpectrum", what) {}
};

struct BinMismatchError : Error {
    BinMismatchError(long a, long b)
        : Error(ErrorKind::bin_mismatch, "BinMismatch",
                std::to_string(a) + " vs " + std::to_string(b) + " bins") {}
};

struct EmptyDatabaseError : Error {
    explicit EmptyDatabaseError(const std::string& what)
        : Error(ErrorKind::empty_database, "EmptyDatabase", what) {}
};

struct HypothesisViolatedError : Error {
    explicit HypothesisViolatedError(const std::string& what)
        : Error(ErrorKind::hypothesis_violated, "HypothesisViolated", what) {}
};

} // namespace schrodiff

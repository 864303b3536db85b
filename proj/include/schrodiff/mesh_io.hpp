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

#include <filesystem>

#include "schrodiff/mesh.hpp"

namespace schrodiff {

/// Load a triangle mesh from an .off, .coff, ASCII .ply, or .obj file.
///
/// Per-vertex colors are picked up when the format carries them (COFF color
/// columns, PLY red/green/blue properties, OBJ "v x y z r g b" lines).
/// Integer-typed color channels are scaled by 1/255; float channels pass
/// through unchanged. Faces with other than three vertices are rejected,
/// never triangulated. The returned mesh satisfies every structural
/// invariant or an exception names the offending line or face.
TriangleMesh load_mesh(const std::filesystem::path& path);

} // namespace schrodiff

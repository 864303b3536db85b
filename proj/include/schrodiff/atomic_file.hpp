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
#include <string>

namespace schrodiff {

/// Write `content` to `path` via a sibling temp file plus rename, so readers
/// never observe a half-written file. Throws IoError on failure.
void write_file_atomically(const std::filesystem::path& path, const std::string& content);

} // namespace schrodiff

// Copyright 2026 The bimlab Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace bimlab::cli {

/// Process exit codes; a stable contract for scripts.
enum ExitCode : int { kOk = 0, kUsageOrConfig = 1, kIo = 2, kNumerical = 3 };

/// Runs one bimlab invocation. args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Where reconstruct stores example `index` for an SNR condition label.
std::filesystem::path result_dir(const std::filesystem::path& results_root, const std::string& snr_label,
                                 std::size_t index);

/// BIMLAB_THREADS when set to a positive integer, otherwise fallback.
int effective_jobs(int fallback);

}  // namespace bimlab::cli

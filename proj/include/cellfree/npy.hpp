// SPDX-License-Identifier: Apache-2.0
//
// cellfree: link-level simulator for user-centric cell-free wireless networks
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef CELLFREE_NPY_HPP
#define CELLFREE_NPY_HPP

#include "cellfree/types.hpp"

#include <filesystem>

namespace cellfree {

/// Writes the per-RRH channel blocks as a NumPy .npy file of shape
/// (num_rrh, num_ant, num_ue), dtype complex128, C order.
void write_npy_complex(const std::filesystem::path& path, const std::vector<CMatrix>& by_rrh);

} // namespace cellfree

#endif

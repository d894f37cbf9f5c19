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

#include "cellfree/npy.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace cellfree {

void write_npy_complex(const std::filesystem::path& path, const std::vector<CMatrix>& by_rrh) {
    if (by_rrh.empty()) {
        throw std::invalid_argument("write_npy_complex: empty block list");
    }
    const long rows = by_rrh[0].rows();
    const long cols = by_rrh[0].cols();

    std::ostringstream hs;
    hs << "{'descr': '<c16', 'fortran_order': False, 'shape': (" << by_rrh.size() << ", " << rows
       << ", " << cols << "), }";
    std::string header = hs.str();
    const size_t unpadded = 10 + header.size() + 1;
    header.append(64 - (unpadded % 64 == 0 ? 64 : unpadded % 64), ' ');
    header.push_back('\n');

    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw std::runtime_error("cannot write '" + path.string() + "'");
    }
    const char magic[] = "\x93NUMPY\x01\x00";
    f.write(magic, 8);
    const std::uint16_t hlen = std::uint16_t(header.size());
    f.put(char(hlen & 0xff));
    f.put(char(hlen >> 8));
    f.write(header.data(), long(header.size()));

    for (const CMatrix& m : by_rrh) {
        for (long r = 0; r < rows; ++r) {
            for (long c = 0; c < cols; ++c) {
                const Complex z = m(r, c);
                const double re = z.real(), im = z.imag();
                f.write(reinterpret_cast<const char*>(&re), sizeof(double));
                f.write(reinterpret_cast<const char*>(&im), sizeof(double));
            }
        }
    }
}

} // namespace cellfree

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
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "srmq/cartesian.hpp"

namespace srmq {

// Array files: ASCII (one integer per line) or binary
// ("RMQA", u32 version=1, u64 n, n little-endian signed 64-bit values).

inline void save_array_text(const value_array& a, std::ostream& os) {
    for (int64_t v : a) os << v << '\n';
}

inline value_array load_array_text(std::istream& is) {
    value_array a;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        a.push_back(std::stoll(line));
    }
    if (a.empty()) throw std::runtime_error("array: empty input");
    return a;
}

inline void save_array_bin(const value_array& a, std::ostream& os) {
    os.write("RMQA", 4);
    uint32_t version = 1;
    os.write(reinterpret_cast<const char*>(&version), 4);
    uint64_t n = a.size();
    os.write(reinterpret_cast<const char*>(&n), 8);
    os.write(reinterpret_cast<const char*>(a.data()), static_cast<std::streamsize>(8 * n));
}

inline value_array load_array_bin(std::istream& is) {
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, "RMQA", 4) != 0) throw std::runtime_error("array: bad magic");
    uint32_t version = 0;
    is.read(reinterpret_cast<char*>(&version), 4);
    if (version != 1) throw std::runtime_error("array: unsupported version");
    uint64_t n = 0;
    is.read(reinterpret_cast<char*>(&n), 8);
    if (!is || n == 0) throw std::runtime_error("array: bad length");
    value_array a(n);
    is.read(reinterpret_cast<char*>(a.data()), static_cast<std::streamsize>(8 * n));
    if (!is) throw std::runtime_error("array: truncated payload");
    return a;
}

}  // namespace srmq

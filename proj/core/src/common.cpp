// SPDX-License-Identifier: Apache-2.0
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

#include "otfsjrc/common.hpp"

#include <algorithm>
#include <cmath>

namespace otfsjrc {

const char* to_string(ErrorKind kind) noexcept
{
    switch (kind) {
    case ErrorKind::DomainMismatch: return "domain_mismatch";
    case ErrorKind::Dimension: return "dimension";
    case ErrorKind::Range: return "range";
    case ErrorKind::Validation: return "validation";
    case ErrorKind::InsufficientData: return "insufficient_data";
    case ErrorKind::NoSignal: return "no_signal";
    case ErrorKind::Io: return "io";
    case ErrorKind::Decode: return "decode";
    }
    return "unknown";
}

void raise(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

double energy(const ComplexMatrix& m) noexcept
{
    double e = 0.0;
    for (const auto& v : m.values()) e += std::norm(v);
    return e;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b)
{
    if (a.rows() != b.rows() || a.cols() != b.cols()) raise(ErrorKind::Dimension, "max_abs_diff: shape mismatch");
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a.values()[i] - b.values()[i]));
    return d;
}

} // namespace otfsjrc

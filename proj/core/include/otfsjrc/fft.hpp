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

#pragma once

#include "otfsjrc/common.hpp"

#include <span>

namespace otfsjrc::fft {

// Sign convention: Forward uses exp(-j 2 pi k n / L), Inverse exp(+j ...).
enum class Direction { Forward, Inverse };

/// In-place unnormalized 1D DFT of arbitrary length.
void dft(std::span<cplx> data, Direction dir);

/// In-place DFT along every row (length = cols), scaled by 1/sqrt(cols).
void rows_unitary(ComplexMatrix& m, Direction dir);

/// In-place 2D DFT scaled by 1/sqrt(rows*cols).
void dft2_unitary(ComplexMatrix& m, Direction dir);

} // namespace otfsjrc::fft

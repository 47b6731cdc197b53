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

#include "otfsjrc/fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <tuple>

namespace otfsjrc::fft {

namespace {

// Plans are built once per shape with FFTW_ESTIMATE (deterministic, no timing
// measurements) and FFTW_UNALIGNED so they can run on any std::vector buffer.
struct PlanKey {
    int rank;
    int n0;
    int n1;
    int howmany;
    int sign;
    auto operator<=>(const PlanKey&) const = default;
};

class PlanCache {
public:
    ~PlanCache()
    {
        for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
    }

    fftw_plan get(const PlanKey& key)
    {
        std::lock_guard lock(mutex_);
        if (auto it = plans_.find(key); it != plans_.end()) return it->second;

        const std::size_t len = static_cast<std::size_t>(key.n0) * (key.rank == 2 ? key.n1 : 1) * key.howmany;
        auto* buf = fftw_alloc_complex(len);
        const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
        fftw_plan plan = nullptr;
        if (key.rank == 1) {
            int n[] = {key.n0};
            plan = fftw_plan_many_dft(1, n, key.howmany, buf, nullptr, 1, key.n0, buf, nullptr, 1, key.n0, key.sign,
                                      flags);
        } else {
            plan = fftw_plan_dft_2d(key.n0, key.n1, buf, buf, key.sign, flags);
        }
        fftw_free(buf);
        if (plan == nullptr) raise(ErrorKind::Validation, "fftw could not build a plan");
        plans_.emplace(key, plan);
        return plan;
    }

private:
    std::mutex mutex_;
    std::map<PlanKey, fftw_plan> plans_;
};

PlanCache& cache()
{
    static PlanCache c;
    return c;
}

int sign_of(Direction dir) { return dir == Direction::Forward ? FFTW_FORWARD : FFTW_BACKWARD; }

fftw_complex* as_fftw(cplx* p) { return reinterpret_cast<fftw_complex*>(p); }

void scale(std::span<cplx> data, double s)
{
    for (auto& v : data) v *= s;
}

} // namespace

void dft(std::span<cplx> data, Direction dir)
{
    if (data.empty()) return;
    const PlanKey key{1, static_cast<int>(data.size()), 1, 1, sign_of(dir)};
    fftw_execute_dft(cache().get(key), as_fftw(data.data()), as_fftw(data.data()));
}

void rows_unitary(ComplexMatrix& m, Direction dir)
{
    if (m.size() == 0) return;
    const PlanKey key{1, static_cast<int>(m.cols()), 1, static_cast<int>(m.rows()), sign_of(dir)};
    fftw_execute_dft(cache().get(key), as_fftw(m.data()), as_fftw(m.data()));
    scale(m.values(), 1.0 / std::sqrt(static_cast<double>(m.cols())));
}

void dft2_unitary(ComplexMatrix& m, Direction dir)
{
    if (m.size() == 0) return;
    const PlanKey key{2, static_cast<int>(m.rows()), static_cast<int>(m.cols()), 1, sign_of(dir)};
    fftw_execute_dft(cache().get(key), as_fftw(m.data()), as_fftw(m.data()));
    scale(m.values(), 1.0 / std::sqrt(static_cast<double>(m.size())));
}

} // namespace otfsjrc::fft

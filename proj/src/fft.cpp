#include "lteaudio/fft.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <utility>

#include <fftw3.h>

namespace lteaudio {

namespace {

class PlanCache {
public:
    ~PlanCache() {
        for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
    }

    fftw_plan get(int n, int sign) {
        std::lock_guard lock(mutex_);
        auto it = plans_.find({n, sign});
        if (it != plans_.end()) return it->second;
        // Planning needs scratch buffers; execution later uses the new-array API.
        ComplexVec in(n), out(n);
        fftw_plan plan = fftw_plan_dft_1d(n, reinterpret_cast<fftw_complex*>(in.data()),
                                          reinterpret_cast<fftw_complex*>(out.data()), sign,
                                          FFTW_ESTIMATE | FFTW_UNALIGNED);
        plans_.emplace(std::make_pair(n, sign), plan);
        return plan;
    }

private:
    std::mutex mutex_;
    std::map<std::pair<int, int>, fftw_plan> plans_;
};

PlanCache& cache() {
    static PlanCache c;
    return c;
}

ComplexVec transform(std::span<const cf64> x, int sign) {
    const int n = static_cast<int>(x.size());
    if (n == 0) return {};
    ComplexVec in(x.begin(), x.end());
    ComplexVec out(n);
    fftw_execute_dft(cache().get(n, sign), reinterpret_cast<fftw_complex*>(in.data()),
                     reinterpret_cast<fftw_complex*>(out.data()));
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    for (auto& v : out) v *= scale;
    return out;
}

}  // namespace

ComplexVec fft_unitary(std::span<const cf64> x) { return transform(x, FFTW_FORWARD); }
ComplexVec ifft_unitary(std::span<const cf64> x) { return transform(x, FFTW_BACKWARD); }

}  // namespace lteaudio

#include "fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>

namespace gkeca::detail {

namespace {

// FFTW's planner is not thread-safe; execution of an existing plan on new
// arrays is. Plans are created once per (size, direction) under a lock.
class PlanCache {
public:
    ~PlanCache() {
        for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
    }

    fftw_plan get(int width, int height, int sign) {
        std::lock_guard lock(mutex_);
        auto key = std::make_tuple(width, height, sign);
        if (auto it = plans_.find(key); it != plans_.end()) return it->second;
        auto* buf = fftw_alloc_complex(static_cast<std::size_t>(width) * height);
        fftw_plan plan = fftw_plan_dft_2d(height, width, buf, buf, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
        fftw_free(buf);
        if (plan == nullptr) throw std::runtime_error("FFTW failed to create a plan");
        plans_.emplace(key, plan);
        return plan;
    }

private:
    std::mutex mutex_;
    std::map<std::tuple<int, int, int>, fftw_plan> plans_;
};

PlanCache& cache() {
    static PlanCache instance;
    return instance;
}

void run(std::vector<std::complex<double>>& data, int width, int height, int sign) {
    if (data.size() != static_cast<std::size_t>(width) * height) {
        throw std::invalid_argument("fft buffer size does not match lattice");
    }
    auto* p = reinterpret_cast<fftw_complex*>(data.data());
    fftw_execute_dft(cache().get(width, height, sign), p, p);
}

}  // namespace

void fft2d_forward(std::vector<std::complex<double>>& data, int width, int height) {
    run(data, width, height, FFTW_FORWARD);
}

void fft2d_inverse(std::vector<std::complex<double>>& data, int width, int height) {
    run(data, width, height, FFTW_BACKWARD);
}

}  // namespace gkeca::detail

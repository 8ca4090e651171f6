#include "ghost/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace ghost {

namespace {

// FFTW planning is not thread safe; executing a plan on fresh arrays is.
// Plans are created with FFTW_UNALIGNED so they may run on any buffer.
class PlanCache {
public:
    static PlanCache& instance() {
        static PlanCache cache;
        return cache;
    }

    fftw_plan get(int n, int sign) {
        std::lock_guard<std::mutex> lock(mutex_);
        auto key = std::make_pair(n, sign);
        auto it = plans_.find(key);
        if (it != plans_.end())
            return it->second;
        std::vector<std::complex<double>> scratch(static_cast<std::size_t>(n));
        fftw_plan plan = fftw_plan_dft_1d(
            n, reinterpret_cast<fftw_complex*>(scratch.data()),
            reinterpret_cast<fftw_complex*>(scratch.data()), sign,
            FFTW_ESTIMATE | FFTW_UNALIGNED);
        if (!plan)
            throw std::runtime_error("fft: planning failed");
        plans_.emplace(key, plan);
        return plan;
    }

private:
    PlanCache() = default;
    std::mutex mutex_;
    std::map<std::pair<int, int>, fftw_plan> plans_;
};

void execute(std::vector<std::complex<double>>& data, int sign) {
    if (data.empty())
        throw std::invalid_argument("fft: empty input");
    fftw_plan plan = PlanCache::instance().get(static_cast<int>(data.size()), sign);
    auto* buf = reinterpret_cast<fftw_complex*>(data.data());
    fftw_execute_dft(plan, buf, buf);
}

} // namespace

void fft_forward(std::vector<std::complex<double>>& data) {
    execute(data, FFTW_FORWARD);
}

void fft_inverse(std::vector<std::complex<double>>& data) {
    execute(data, FFTW_BACKWARD);
    const double inv_n = 1.0 / static_cast<double>(data.size());
    for (auto& v : data)
        v *= inv_n;
}

double fft_angular_frequency(int j, int n, double spacing) {
    const int folded = (j <= n / 2) ? j : j - n;
    return 2.0 * std::numbers::pi * folded / (n * spacing);
}

} // namespace ghost

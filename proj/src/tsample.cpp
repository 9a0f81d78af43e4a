#include "tb/tsample.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "tb/errors.hpp"

namespace tb::diffusion {

SamplerMode sampler_mode_from_string(const std::string& s) {
    if (s == "uniform") return SamplerMode::uniform;
    if (s == "snr_weighted") return SamplerMode::snr_weighted;
    throw ConfigError("unknown sampler mode '" + s + "' (expected uniform|snr_weighted)");
}

std::string to_string(SamplerMode mode) {
    return mode == SamplerMode::uniform ? "uniform" : "snr_weighted";
}

void TimestepDistribution::rebuild_cdf() {
    cdf.resize(probs.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        acc += probs[i];
        cdf[i] = acc;
    }
    if (!cdf.empty()) cdf.back() = 1.0;
}

TimestepDistribution uniform_probs(std::size_t T) {
    TimestepDistribution d;
    d.mode = SamplerMode::uniform;
    d.probs.assign(T, 1.0 / static_cast<double>(T));
    d.rebuild_cdf();
    return d;
}

TimestepDistribution snr_weighted_probs(const NoiseSchedule& s) {
    TimestepDistribution d;
    d.mode = SamplerMode::snr_weighted;
    const double c = *std::max_element(s.log_snr.begin(), s.log_snr.end());
    std::vector<double> w(s.T);
    double total = 0.0;
    for (std::size_t t = 0; t < s.T; ++t) {
        w[t] = c - s.log_snr[t];
        total += w[t];
    }
    if (total <= 0.0) {
        // all log-SNR equal; no preference expressible
        d = uniform_probs(s.T);
        d.mode = SamplerMode::snr_weighted;
        d.degenerate = true;
        return d;
    }
    d.probs.resize(s.T);
    for (std::size_t t = 0; t < s.T; ++t) d.probs[t] = w[t] / total;
    d.rebuild_cdf();
    return d;
}

TimestepDistribution make_timestep_distribution(SamplerMode mode,
                                                const NoiseSchedule& s) {
    return mode == SamplerMode::uniform ? uniform_probs(s.T) : snr_weighted_probs(s);
}

std::size_t sample_one(const TimestepDistribution& dist, Rng& rng) {
    const double u = rng.uniform01();
    // first index with cdf > u; zero-probability entries are never hit
    auto it = std::upper_bound(dist.cdf.begin(), dist.cdf.end(), u);
    if (it == dist.cdf.end()) --it;
    return static_cast<std::size_t>(it - dist.cdf.begin());
}

std::vector<std::size_t> sample(const TimestepDistribution& dist, Rng& rng,
                                std::size_t n) {
    if (n < 1) throw ArgumentError("sample: n must be >= 1");
    std::vector<std::size_t> out(n);
    for (auto& t : out) t = sample_one(dist, rng);
    return out;
}

void export_distribution_csv(const TimestepDistribution& dist,
                             const NoiseSchedule& s, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw IoError("cannot open " + path + " for writing");
    f << "t,log_snr,prob\n";
    f.precision(17);
    for (std::size_t t = 0; t < dist.probs.size(); ++t) {
        f << t << "," << s.log_snr[t] << "," << dist.probs[t] << "\n";
    }
}

}  // namespace tb::diffusion

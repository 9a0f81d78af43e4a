#pragma once

#include <string>
#include <vector>

#include "tb/rng.hpp"
#include "tb/schedule.hpp"

namespace tb::diffusion {

enum class SamplerMode { uniform, snr_weighted };

SamplerMode sampler_mode_from_string(const std::string& s);
std::string to_string(SamplerMode mode);

struct TimestepDistribution {
    std::vector<double> probs;  // length T, sums to 1
    SamplerMode mode = SamplerMode::uniform;
    bool degenerate = false;    // all log-SNR equal; fell back to uniform
    std::vector<double> cdf;    // inverse-CDF sampling table

    void rebuild_cdf();
};

TimestepDistribution uniform_probs(std::size_t T);

// p(t) = (C - log SNR(t)) / sum, C = max log SNR. The max-SNR timestep gets
// probability exactly zero.
TimestepDistribution snr_weighted_probs(const NoiseSchedule& s);

TimestepDistribution make_timestep_distribution(SamplerMode mode,
                                                const NoiseSchedule& s);

std::size_t sample_one(const TimestepDistribution& dist, Rng& rng);
std::vector<std::size_t> sample(const TimestepDistribution& dist, Rng& rng,
                                std::size_t n);

// CSV rows (t, log_snr, prob) for plotting the sampling curve.
void export_distribution_csv(const TimestepDistribution& dist,
                             const NoiseSchedule& s, const std::string& path);

}  // namespace tb::diffusion

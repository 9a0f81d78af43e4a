#pragma once

#include <functional>
#include <string>
#include <vector>

#include "tb/rng.hpp"
#include "tb/tensor.hpp"

namespace tb::diffusion {

enum class ScheduleKind { linear, cosine };

ScheduleKind schedule_kind_from_string(const std::string& s);
std::string to_string(ScheduleKind kind);

// Discrete variance-preserving schedule, t = 0 .. T-1.
//   alpha_bar[t] = prod_{i<=t} (1 - beta[i]),  x_t = sqrt(ab)*x0 + sqrt(1-ab)*eps
struct NoiseSchedule {
    std::size_t T = 0;
    ScheduleKind kind = ScheduleKind::linear;
    std::vector<double> betas;
    std::vector<double> alphas;      // 1 - beta
    std::vector<double> alpha_bars;  // cumulative product, strictly decreasing
    std::vector<double> sigmas;      // sqrt(1 - alpha_bar)
    std::vector<double> log_snr;     // log(alpha_bar / (1 - alpha_bar))

    double snr(std::size_t t) const { return alpha_bars[t] / (1.0 - alpha_bars[t]); }
};

NoiseSchedule make_schedule(ScheduleKind kind, std::size_t T, double beta_start,
                            double beta_end);

// x_t = sqrt(alpha_bar_t) * x0 + sqrt(1 - alpha_bar_t) * eps
Tensor add_noise(const Tensor& x0, const Tensor& eps, std::size_t t,
                 const NoiseSchedule& s);

// x_{t-1} = (x_t - beta_t/sqrt(1-alpha_bar_t) * eps_pred) / sqrt(alpha_t) + sigma~_t z
// with sigma~_t^2 = beta_t and no noise at t = 0.
Tensor ddpm_step(const Tensor& x_t, const Tensor& eps_pred, std::size_t t,
                 const NoiseSchedule& s, const Tensor& z);

// Denoiser callable: (x_t, t, condition) -> predicted eps.
using DenoiseFn =
    std::function<Tensor(const Tensor& x_t, std::size_t t, const Tensor& condition)>;

// Full reverse loop t = T-1 .. 0. Each image index draws its own rng stream
// derived from (seed, index), so results are per-image deterministic.
std::vector<Tensor> generate(const DenoiseFn& denoiser, const Tensor& condition,
                             const NoiseSchedule& s, std::uint64_t seed,
                             std::size_t n_images,
                             const std::vector<std::size_t>& image_shape);

}  // namespace tb::diffusion

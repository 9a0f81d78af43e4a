#include "tb/schedule.hpp"

#include <cmath>

#include "tb/errors.hpp"

namespace tb::diffusion {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

ScheduleKind schedule_kind_from_string(const std::string& s) {
    if (s == "linear") return ScheduleKind::linear;
    if (s == "cosine") return ScheduleKind::cosine;
    throw ConfigError("unknown schedule kind '" + s + "' (expected linear|cosine)");
}

std::string to_string(ScheduleKind kind) {
    return kind == ScheduleKind::linear ? "linear" : "cosine";
}

NoiseSchedule make_schedule(ScheduleKind kind, std::size_t T, double beta_start,
                            double beta_end) {
    if (T < 2) throw ConfigError("make_schedule: T must be >= 2");
    NoiseSchedule s;
    s.T = T;
    s.kind = kind;
    s.betas.resize(T);
    if (kind == ScheduleKind::linear) {
        if (!(beta_start > 0.0 && beta_start <= beta_end && beta_end < 1.0)) {
            throw ConfigError("make_schedule: need 0 < beta_start <= beta_end < 1");
        }
        for (std::size_t t = 0; t < T; ++t) {
            s.betas[t] = beta_start +
                         (beta_end - beta_start) * static_cast<double>(t) /
                             static_cast<double>(T - 1);
        }
    } else {
        // squared-cosine alpha_bar; beta bounds are ignored.
        auto abar = [T](double t) {
            const double v = std::cos((t / static_cast<double>(T) + 0.008) / 1.008 *
                                      kPi / 2.0);
            return v * v;
        };
        for (std::size_t t = 0; t < T; ++t) {
            const double b = 1.0 - abar(static_cast<double>(t) + 1.0) /
                                        abar(static_cast<double>(t));
            s.betas[t] = std::min(b, 0.999);
        }
    }
    s.alphas.resize(T);
    s.alpha_bars.resize(T);
    s.sigmas.resize(T);
    s.log_snr.resize(T);
    double prod = 1.0;
    for (std::size_t t = 0; t < T; ++t) {
        s.alphas[t] = 1.0 - s.betas[t];
        prod *= s.alphas[t];
        s.alpha_bars[t] = prod;
        s.sigmas[t] = std::sqrt(1.0 - prod);
        s.log_snr[t] = std::log(prod) - std::log(1.0 - prod);
    }
    return s;
}

Tensor add_noise(const Tensor& x0, const Tensor& eps, std::size_t t,
                 const NoiseSchedule& s) {
    if (t >= s.T) throw ArgumentError("add_noise: t out of range");
    if (!x0.same_shape(eps)) {
        throw ArgumentError("add_noise: x0 " + x0.shape_str() + " vs eps " +
                            eps.shape_str());
    }
    const double a = std::sqrt(s.alpha_bars[t]);
    const double b = std::sqrt(1.0 - s.alpha_bars[t]);
    Tensor out(x0.shape());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = a * x0[i] + b * eps[i];
    return out;
}

Tensor ddpm_step(const Tensor& x_t, const Tensor& eps_pred, std::size_t t,
                 const NoiseSchedule& s, const Tensor& z) {
    if (t >= s.T) throw ArgumentError("ddpm_step: t out of range");
    if (!x_t.same_shape(eps_pred) || !x_t.same_shape(z)) {
        throw ArgumentError("ddpm_step: shape mismatch");
    }
    const double inv_sqrt_alpha = 1.0 / std::sqrt(s.alphas[t]);
    const double coef = s.betas[t] / std::sqrt(1.0 - s.alpha_bars[t]);
    const double sigma = t == 0 ? 0.0 : std::sqrt(s.betas[t]);
    Tensor out(x_t.shape());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = inv_sqrt_alpha * (x_t[i] - coef * eps_pred[i]) + sigma * z[i];
    }
    return out;
}

std::vector<Tensor> generate(const DenoiseFn& denoiser, const Tensor& condition,
                             const NoiseSchedule& s, std::uint64_t seed,
                             std::size_t n_images,
                             const std::vector<std::size_t>& image_shape) {
    std::vector<Tensor> out;
    out.reserve(n_images);
    for (std::size_t idx = 0; idx < n_images; ++idx) {
        Rng rng = derive_rng(seed, "generate", idx);
        Tensor x = Tensor::randn(image_shape, rng);
        for (std::size_t step = s.T; step-- > 0;) {
            Tensor eps_pred = denoiser(x, step, condition);
            Tensor z(image_shape);
            if (step > 0) {
                for (std::size_t i = 0; i < z.size(); ++i) z[i] = rng.normal();
            }
            x = ddpm_step(x, eps_pred, step, s, z);
        }
        out.push_back(std::move(x));
    }
    return out;
}

}  // namespace tb::diffusion

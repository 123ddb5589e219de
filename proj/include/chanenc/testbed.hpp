#pragma once

// Synthetic aliased datasets and a brute-force decoding oracle.
//
// The generators realize the situation the channel representation is built
// for: several distinct outputs attached to the same input.  Relations are
// mapped affinely into the given banks' decodable domains, with sampling
// restricted to the region where the branches' channel supports stay
// disjoint.  All randomness flows from the spec's seed through a local
// generator, so identical specs produce byte-identical datasets on every
// platform.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "channel.hpp"
#include "decode.hpp"
#include "learn.hpp"

namespace chanenc {

enum class SyntheticName { two_branch, circle, single_valued };

inline SyntheticName synthetic_name_from_string(const std::string& s) {
    if (s == "two_branch") return SyntheticName::two_branch;
    if (s == "circle") return SyntheticName::circle;
    if (s == "single_valued") return SyntheticName::single_valued;
    throw std::invalid_argument("unknown dataset name '" + s +
                                "' (expected two_branch, circle or single_valued)");
}

inline std::string to_string(SyntheticName name) {
    switch (name) {
        case SyntheticName::two_branch: return "two_branch";
        case SyntheticName::circle: return "circle";
        case SyntheticName::single_valued: return "single_valued";
    }
    return "?";
}

struct SyntheticSpec {
    SyntheticName name = SyntheticName::two_branch;
    int samples = 0;           ///< number of (x, y) pairs M
    double noise_sigma = 0.0;  ///< stddev of Gaussian noise added to y
    std::uint64_t seed = 0;
};

namespace detail {

/// Deterministic uniform/Gaussian source.  mt19937_64 plus explicit
/// bit-to-double conversion and Box-Muller, so streams do not depend on
/// the standard library's distribution implementations.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    /// Uniform in [0, 1).
    double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Standard normal via Box-Muller; two draws per value.
    double gaussian() {
        const double u1 = static_cast<double>((eng_() >> 11) + 1) * 0x1.0p-53; // (0, 1]
        const double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

  private:
    std::mt19937_64 eng_;
};

/// Affine frames the generators place their relations in: inputs use a 2%
/// inset of the bank domain, outputs a 5% inset around the domain center.
struct AxisFrame {
    double lo, hi;
    double center() const { return 0.5 * (lo + hi); }
    double half_span() const { return 0.5 * (hi - lo); }
};

inline AxisFrame input_frame(const ChannelConfig& cfg) {
    const double lo = domain_lo(cfg), hi = domain_hi(cfg);
    const double inset = 0.02 * (hi - lo);
    return {lo + inset, hi - inset};
}

inline AxisFrame output_frame(const ChannelConfig& cfg) {
    const double lo = domain_lo(cfg), hi = domain_hi(cfg);
    const double inset = 0.05 * (hi - lo);
    return {lo + inset, hi - inset};
}

inline const ChannelConfig& single_axis(const BankSet& banks, const char* which) {
    if (banks.axes() != 1) {
        throw std::invalid_argument(std::string("dataset generators need one ") + which +
                                    " axis, got " + std::to_string(banks.axes()));
    }
    return banks.bank(0);
}

inline void check_noise_headroom(const ChannelConfig& out_cfg, double sigma) {
    if (!std::isfinite(sigma) || sigma < 0.0) {
        throw std::invalid_argument("noise sigma must be finite and >= 0");
    }
    const double span = domain_hi(out_cfg) - domain_lo(out_cfg);
    if (6.0 * sigma > 0.045 * span) {
        throw std::invalid_argument("output bank domain too narrow for noise level sigma = " +
                                    std::to_string(sigma));
    }
}

/// Clamp a noisy output into the encodable part of the domain.
inline double clamp_into_domain(const ChannelConfig& cfg, double y) {
    const double lo = domain_lo(cfg), hi = domain_hi(cfg);
    const double inset = 0.005 * (hi - lo);
    return std::clamp(y, lo + inset, hi - inset);
}

/// Smallest squared branch ordinate at which two branches +-amp*g keep
/// their output channel supports disjoint (one spare channel of margin).
inline double min_branch_sq(const ChannelConfig& out_cfg, double amp) {
    const double sep = (out_cfg.overlap + 2) * out_cfg.spacing;
    const double r = sep / (2.0 * amp);
    if (r * r >= 0.98) {
        throw std::invalid_argument(
            "output bank domain too narrow to separate the two branches");
    }
    return r * r;
}

} // namespace detail

/// The noiseless branch pair of the two-branch relation at input x, under
/// the same affine frames gen_two_branch uses.  x is clamped to the
/// generator's input window.
inline std::pair<double, double> two_branch_truth(const BankSet& banks_in,
                                                  const BankSet& banks_out, double x) {
    const auto fx = detail::input_frame(detail::single_axis(banks_in, "input"));
    const auto fy = detail::output_frame(detail::single_axis(banks_out, "output"));
    const double t = std::clamp((x - fx.lo) / (fx.hi - fx.lo), 0.0, 1.0);
    const double dev = fy.half_span() * std::sqrt(t);
    return {fy.center() + dev, fy.center() - dev};
}

/// Branch pair of the circle relation at input x (clamped to the circle).
inline std::pair<double, double> circle_truth(const BankSet& banks_in, const BankSet& banks_out,
                                              double x) {
    const auto fx = detail::input_frame(detail::single_axis(banks_in, "input"));
    const auto fy = detail::output_frame(detail::single_axis(banks_out, "output"));
    const double t = std::clamp((x - fx.center()) / fx.half_span(), -1.0, 1.0);
    const double dev = fy.half_span() * std::sqrt(1.0 - t * t);
    return {fy.center() + dev, fy.center() - dev};
}

/// The monotone relation of gen_single_valued at input x.
inline double single_valued_truth(const BankSet& banks_in, const BankSet& banks_out, double x) {
    const auto fx = detail::input_frame(detail::single_axis(banks_in, "input"));
    const auto fy = detail::output_frame(detail::single_axis(banks_out, "output"));
    const double t = std::clamp((x - fx.lo) / (fx.hi - fx.lo), 0.0, 1.0);
    const double f = t + std::sin(2.0 * std::numbers::pi * t) / (8.0 * std::numbers::pi);
    return fy.lo + (fy.hi - fy.lo) * f;
}

/// Two-branch dataset: each sampled x appears twice, once per branch of
/// y = center +- amp*sqrt(x_raw).  Sampling starts above the branch point
/// so the two outputs' channel supports never touch.
inline TrainingSet gen_two_branch(const SyntheticSpec& spec, const BankSet& banks_in,
                                  const BankSet& banks_out) {
    const ChannelConfig& in_cfg = detail::single_axis(banks_in, "input");
    const ChannelConfig& out_cfg = detail::single_axis(banks_out, "output");
    if (spec.samples < 1) throw std::invalid_argument("sample count must be >= 1");
    if (spec.samples % 2 != 0) {
        throw std::invalid_argument("two-branch datasets need an even sample count");
    }
    detail::check_noise_headroom(out_cfg, spec.noise_sigma);

    const auto fx = detail::input_frame(in_cfg);
    const auto fy = detail::output_frame(out_cfg);
    const double t_min = detail::min_branch_sq(out_cfg, fy.half_span());

    detail::Rng rng(spec.seed);
    TrainingSet train{banks_in, banks_out, {}};
    train.pairs.reserve(spec.samples);
    for (int i = 0; i < spec.samples / 2; ++i) {
        const double t = rng.uniform(t_min, 1.0);
        const double x = fx.lo + t * (fx.hi - fx.lo);
        const double dev = fy.half_span() * std::sqrt(t);
        for (double sign : {1.0, -1.0}) {
            double y = fy.center() + sign * dev + spec.noise_sigma * rng.gaussian();
            train.pairs.push_back({{x}, {detail::clamp_into_domain(out_cfg, y)}});
        }
    }
    return train;
}

/// Circle dataset: y = center +- amp*sqrt(1 - x_raw^2), sampled away from
/// the tangency points where the branches meet.
inline TrainingSet gen_circle(const SyntheticSpec& spec, const BankSet& banks_in,
                              const BankSet& banks_out) {
    const ChannelConfig& in_cfg = detail::single_axis(banks_in, "input");
    const ChannelConfig& out_cfg = detail::single_axis(banks_out, "output");
    if (spec.samples < 1) throw std::invalid_argument("sample count must be >= 1");
    if (spec.samples % 2 != 0) {
        throw std::invalid_argument("circle datasets need an even sample count");
    }
    detail::check_noise_headroom(out_cfg, spec.noise_sigma);

    const auto fx = detail::input_frame(in_cfg);
    const auto fy = detail::output_frame(out_cfg);
    const double c_max = std::sqrt(1.0 - detail::min_branch_sq(out_cfg, fy.half_span()));

    detail::Rng rng(spec.seed);
    TrainingSet train{banks_in, banks_out, {}};
    train.pairs.reserve(spec.samples);
    for (int i = 0; i < spec.samples / 2; ++i) {
        const double t = rng.uniform(-c_max, c_max);
        const double x = fx.center() + t * fx.half_span();
        const double dev = fy.half_span() * std::sqrt(1.0 - t * t);
        for (double sign : {1.0, -1.0}) {
            double y = fy.center() + sign * dev + spec.noise_sigma * rng.gaussian();
            train.pairs.push_back({{x}, {detail::clamp_into_domain(out_cfg, y)}});
        }
    }
    return train;
}

/// Aliasing-free baseline: a smooth monotone relation, one y per x.
inline TrainingSet gen_single_valued(const SyntheticSpec& spec, const BankSet& banks_in,
                                     const BankSet& banks_out) {
    const ChannelConfig& in_cfg = detail::single_axis(banks_in, "input");
    const ChannelConfig& out_cfg = detail::single_axis(banks_out, "output");
    if (spec.samples < 1) throw std::invalid_argument("sample count must be >= 1");
    detail::check_noise_headroom(out_cfg, spec.noise_sigma);

    const auto fx = detail::input_frame(in_cfg);
    detail::Rng rng(spec.seed);
    TrainingSet train{banks_in, banks_out, {}};
    train.pairs.reserve(spec.samples);
    for (int i = 0; i < spec.samples; ++i) {
        const double x = rng.uniform(fx.lo, fx.hi);
        double y = single_valued_truth(banks_in, banks_out, x) +
                   spec.noise_sigma * rng.gaussian();
        train.pairs.push_back({{x}, {detail::clamp_into_domain(out_cfg, y)}});
    }
    return train;
}

inline TrainingSet generate(const SyntheticSpec& spec, const BankSet& banks_in,
                            const BankSet& banks_out) {
    switch (spec.name) {
        case SyntheticName::two_branch: return gen_two_branch(spec, banks_in, banks_out);
        case SyntheticName::circle: return gen_circle(spec, banks_in, banks_out);
        case SyntheticName::single_valued: return gen_single_valued(spec, banks_in, banks_out);
    }
    throw std::invalid_argument("unknown dataset name");
}

/// Brute-force mode extraction by exhaustive grid search, for verifying
/// the analytic decoder.  Scans the decodable domain, scores each grid
/// point by Re<enc(x), v>, and returns the local maxima whose confidence
/// (match / overlap) exceeds min_confidence.  No phase arithmetic.
inline std::vector<ModeEstimate> oracle_decode(const ChannelConfig& cfg, const ChannelVector& v,
                                               double grid_step, double min_confidence = 0.1) {
    if (!std::isfinite(grid_step) || grid_step <= 0.0 || grid_step >= cfg.spacing / 4.0) {
        throw std::invalid_argument("oracle: grid_step must be in (0, spacing/4)");
    }
    if (v.length() != cfg.count) {
        throw std::invalid_argument("oracle: vector length " + std::to_string(v.length()) +
                                    " does not match channel count " +
                                    std::to_string(cfg.count));
    }

    const double lo = domain_lo(cfg), hi = domain_hi(cfg);
    std::vector<double> grid, match;
    for (double x = lo + 0.5 * grid_step; x < hi; x += grid_step) {
        double m = 0.0;
        for (int k : active_channels(cfg, x)) {
            const Complex z = v.at(k);
            if (z != Complex{0.0, 0.0}) {
                m += (std::conj(channel_basis(cfg, x, k)) * z).real();
            }
        }
        grid.push_back(x);
        match.push_back(m);
    }

    std::vector<ModeEstimate> modes;
    const std::size_t n = grid.size();
    for (std::size_t j = 0; j < n; ++j) {
        const bool up = (j == 0) || match[j] > match[j - 1];
        const bool down = (j == n - 1) || match[j] >= match[j + 1];
        if (!up || !down) continue;
        const double confidence = match[j] / cfg.overlap;
        if (confidence <= min_confidence) continue;

        ModeEstimate est;
        est.value = grid[j];
        est.confidence = confidence;
        Complex aligned{0.0, 0.0};
        double total_mag = 0.0;
        for (int k : active_channels(cfg, grid[j])) {
            const Complex z = v.at(k);
            if (z != Complex{0.0, 0.0}) {
                aligned += std::conj(channel_basis(cfg, grid[j], k)) * z;
                total_mag += std::abs(z);
                est.support.push_back(k);
            }
        }
        est.coherence = total_mag > 0.0 ? std::abs(aligned) / total_mag : 0.0;
        modes.push_back(std::move(est));
    }
    detail::sort_by_confidence(modes);
    return modes;
}

} // namespace chanenc

#pragma once

// Recovery of real values from channel vectors.
//
// A coherent run of channel coefficients determines a value in two steps:
// the phase-aligned mean s = (1/|S|) * sum_k v[k] * exp(-i*omega*k*T) has
// argument omega*x (mod 2*pi), and the active indices pin down which
// 2*pi-period x lives in, because all of the run's supports intersect in a
// window narrower than one phase period.  Superposed vectors are split into
// runs and decoded run by run, yielding one mode per superposition term.

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "channel.hpp"
#include "errors.hpp"

namespace chanenc {

/// One decoded value with the evidence behind it.
struct ModeEstimate {
    double value = 0.0;       ///< decoded x in input units
    double confidence = 0.0;  ///< mean coefficient magnitude; recovers the superposition weight
    double coherence = 0.0;   ///< |phase-aligned mean| / mean magnitude, 1 for a pure encoding
    std::vector<int> support; ///< channel indices used
};

struct DecodeParams {
    double magnitude_floor = 1e-9; ///< entries below this are treated as zero
    double coherence_min = 0.9;    ///< minimum coherence to accept a mode
    std::optional<double> merge_tol{}; ///< estimates closer than this merge; default spacing/2
};

/// Intersection [lo, hi) of the supports of channels k_lo..k_hi.
/// Always narrower than one phase period by the config invariant.
inline std::pair<double, double> support_intersection(const ChannelConfig& cfg, int k_lo,
                                                      int k_hi) {
    return {cfg.origin + k_hi * cfg.spacing, cfg.origin + (k_lo + cfg.overlap) * cfg.spacing};
}

namespace detail {

inline double wrap_pm_pi(double a) { return std::remainder(a, 2.0 * std::numbers::pi); }

/// Decodes the consecutive channels k_lo..k_hi of `entries` as one mode.
/// Throws DecodeError{phase_mismatch} when the phase points outside the
/// channels' common support window.
inline ModeEstimate decode_run(const ChannelConfig& cfg,
                               const std::map<int, Complex>& entries, int k_lo, int k_hi) {
    Complex s{0.0, 0.0};
    double mean_mag = 0.0;
    std::vector<int> support;
    for (int k = k_lo; k <= k_hi; ++k) {
        const Complex z = entries.at(k);
        s += z * std::polar(1.0, -cfg.omega * k * cfg.spacing);
        mean_mag += std::abs(z);
        support.push_back(k);
    }
    const double count = static_cast<double>(k_hi - k_lo + 1);
    s /= count;
    mean_mag /= count;

    const auto [win_lo, win_hi] = support_intersection(cfg, k_lo, k_hi);
    const double mid = 0.5 * (win_lo + win_hi);
    const double phase = std::arg(s);
    // The window is narrower than 2*pi/omega, so at most one branch of the
    // phase lands inside it: the one nearest the window midpoint.
    double x = mid + wrap_pm_pi(phase - cfg.omega * mid) / cfg.omega;

    const double tol = 1e-9 * std::max({1.0, std::abs(win_lo), std::abs(win_hi)});
    if (x < win_lo - tol || x >= win_hi + tol) {
        std::ostringstream msg;
        msg << "decode: phase selects x = " << x << " outside the support window [" << win_lo
            << ", " << win_hi << ") of channels " << k_lo << ".." << k_hi;
        throw DecodeError(DecodeError::Kind::phase_mismatch, msg.str());
    }
    if (x < win_lo) x = win_lo;
    if (x >= win_hi) x = std::nextafter(win_hi, win_lo);

    ModeEstimate est;
    est.value = x;
    est.confidence = mean_mag;
    est.coherence = std::abs(s) / mean_mag;
    est.support = std::move(support);
    return est;
}

/// Indices with magnitude >= floor, ascending.
inline std::vector<int> floored_support(const ChannelVector& v, double floor) {
    std::vector<int> idx;
    for (const auto& [k, z] : v.entries()) {
        if (std::abs(z) >= floor) idx.push_back(k);
    }
    return idx;
}

/// Splits sorted indices into maximal consecutive runs.
inline std::vector<std::pair<int, int>> consecutive_runs(const std::vector<int>& idx) {
    std::vector<std::pair<int, int>> runs;
    for (std::size_t i = 0; i < idx.size();) {
        std::size_t j = i;
        while (j + 1 < idx.size() && idx[j + 1] == idx[j] + 1) ++j;
        runs.emplace_back(idx[i], idx[j]);
        i = j + 1;
    }
    return runs;
}

inline void sort_by_confidence(std::vector<ModeEstimate>& modes) {
    std::sort(modes.begin(), modes.end(), [](const ModeEstimate& a, const ModeEstimate& b) {
        if (a.confidence != b.confidence) return a.confidence > b.confidence;
        return a.value < b.value;
    });
}

} // namespace detail

/// Decodes a vector holding a single mode.  The active set after the
/// magnitude floor must be one consecutive run of at most `overlap`
/// channels; anything else raises a DecodeError with the matching kind.
inline ModeEstimate decode_single(const ChannelConfig& cfg, const ChannelVector& v,
                                  const DecodeParams& params = {}) {
    const std::vector<int> idx = detail::floored_support(v, params.magnitude_floor);
    if (idx.empty()) {
        throw DecodeError(DecodeError::Kind::empty_input,
                          "decode: no entries above the magnitude floor");
    }
    const auto runs = detail::consecutive_runs(idx);
    if (runs.size() != 1 || runs[0].second - runs[0].first + 1 > cfg.overlap) {
        throw DecodeError(DecodeError::Kind::ambiguous_support,
                          "decode: active channels do not form one run of <= overlap indices; "
                          "use decode_modes for superposed vectors");
    }
    ModeEstimate est = detail::decode_run(cfg, v.entries(), runs[0].first, runs[0].second);
    if (est.coherence < params.coherence_min) {
        std::ostringstream msg;
        msg << "decode: coherence " << est.coherence << " below threshold "
            << params.coherence_min << "; the window blends several values";
        throw DecodeError(DecodeError::Kind::incoherent, msg.str());
    }
    return est;
}

/// Extracts every decodable mode from a possibly superposed vector,
/// sorted by descending confidence.  Never throws on odd content: windows
/// that fail to decode are skipped.
inline std::vector<ModeEstimate> decode_modes(const ChannelConfig& cfg, const ChannelVector& v,
                                              const DecodeParams& params = {}) {
    const double merge_tol = params.merge_tol.value_or(cfg.spacing / 2.0);
    std::vector<ModeEstimate> modes;

    for (const auto& [run_lo, run_hi] : detail::consecutive_runs(
             detail::floored_support(v, params.magnitude_floor))) {
        const int run_len = run_hi - run_lo + 1;
        if (run_len <= cfg.overlap) {
            try {
                ModeEstimate est = detail::decode_run(cfg, v.entries(), run_lo, run_hi);
                if (est.coherence >= params.coherence_min) modes.push_back(std::move(est));
            } catch (const DecodeError&) {
            }
            continue;
        }

        // Run longer than one support: slide a window of width `overlap`,
        // decode the coherent windows, and merge nearby estimates.
        struct Cluster {
            double weighted_value = 0.0;
            double weight = 0.0;
            ModeEstimate best;
        };
        std::vector<Cluster> clusters;
        for (int lo = run_lo; lo + cfg.overlap - 1 <= run_hi; ++lo) {
            ModeEstimate est;
            try {
                est = detail::decode_run(cfg, v.entries(), lo, lo + cfg.overlap - 1);
            } catch (const DecodeError&) {
                continue;
            }
            if (est.coherence < params.coherence_min) continue;
            Cluster* home = nullptr;
            for (auto& c : clusters) {
                if (std::abs(est.value - c.weighted_value / c.weight) < merge_tol) {
                    home = &c;
                    break;
                }
            }
            if (home == nullptr) {
                clusters.push_back({});
                home = &clusters.back();
            }
            home->weighted_value += est.confidence * est.value;
            home->weight += est.confidence;
            if (est.confidence >= home->best.confidence) home->best = std::move(est);
        }
        for (auto& c : clusters) {
            ModeEstimate merged = std::move(c.best);
            merged.value = c.weighted_value / c.weight;
            const auto [win_lo, win_hi] =
                support_intersection(cfg, merged.support.front(), merged.support.back());
            merged.value = std::clamp(merged.value, win_lo, std::nextafter(win_hi, win_lo));
            modes.push_back(std::move(merged));
        }
    }

    detail::sort_by_confidence(modes);
    return modes;
}

/// Per-axis multi-mode decoding of a concatenated vector.
inline std::vector<std::vector<ModeEstimate>> decode_point(const BankSet& banks,
                                                           const ChannelVector& v,
                                                           const DecodeParams& params = {}) {
    if (v.length() != banks.total_length()) {
        throw std::invalid_argument("decode: vector length " + std::to_string(v.length()) +
                                    " does not match bank total " +
                                    std::to_string(banks.total_length()));
    }
    std::vector<std::vector<ModeEstimate>> per_axis;
    per_axis.reserve(banks.axes());
    for (int b = 0; b < banks.axes(); ++b) {
        const int off = banks.offset(b);
        const int n = banks.bank(b).count;
        std::map<int, Complex> block;
        for (const auto& [k, z] : v.entries()) {
            if (k > off && k <= off + n) block.emplace(k - off, z);
        }
        per_axis.push_back(
            decode_modes(banks.bank(b), ChannelVector(n, std::move(block)), params));
    }
    return per_axis;
}

} // namespace chanenc

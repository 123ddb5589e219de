#pragma once

// Complex-valued channel representation of scalars and small vectors.
//
// A channel bank covers an interval of the real line with N overlapping
// channels.  Channel k responds on [origin + k*T, origin + (k+m)*T) and its
// response to an in-support value x is the unit complex number
// exp(i*omega*(x + k*T)).  Encoding a value therefore produces a sparse
// vector with exactly m entries on the unit circle; values far apart in
// input space map to orthogonal vectors.

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace chanenc {

using Complex = std::complex<double>;

/// Parameters of one scalar channel bank.  Channels are 1-based, k = 1..count.
struct ChannelConfig {
    double omega = 1.0;   ///< phase rate, radians per input unit
    double spacing = 1.0; ///< channel spacing T in input units
    int count = 1;        ///< number of channels N
    int overlap = 1;      ///< channels simultaneously active at an in-domain point
    double origin = 0.0;  ///< left edge of channel 1's support

    friend bool operator==(const ChannelConfig&, const ChannelConfig&) = default;
};

/// Left edge of the decodable domain D.  Points left of this have a
/// truncated active set and are rejected by encode_scalar.
inline double domain_lo(const ChannelConfig& cfg) {
    return cfg.origin + cfg.overlap * cfg.spacing;
}

/// Right edge (exclusive) of the decodable domain D.
inline double domain_hi(const ChannelConfig& cfg) {
    return cfg.origin + (cfg.count + 1) * cfg.spacing;
}

inline bool in_domain(const ChannelConfig& cfg, double x) {
    return x >= domain_lo(cfg) && x < domain_hi(cfg);
}

/// Validates and returns a channel bank configuration.
///
/// The key invariant is phase injectivity: omega * overlap * spacing < 2*pi,
/// so the phase omega*x never wraps within one support-intersection window
/// and decoding is unambiguous.
inline ChannelConfig make_config(double omega, double spacing, int count, int overlap,
                                 double origin) {
    if (!std::isfinite(omega) || !std::isfinite(spacing) || !std::isfinite(origin)) {
        throw std::invalid_argument("channel config: omega, spacing and origin must be finite");
    }
    if (omega <= 0.0) {
        throw std::invalid_argument("channel config: omega must be > 0");
    }
    if (spacing <= 0.0) {
        throw std::invalid_argument("channel config: spacing must be > 0");
    }
    if (count < 1) {
        throw std::invalid_argument("channel config: count must be >= 1");
    }
    if (overlap < 1) {
        throw std::invalid_argument("channel config: overlap must be >= 1");
    }
    if (overlap > count) {
        throw std::invalid_argument("channel config: overlap must not exceed count");
    }
    if (omega * overlap * spacing >= 2.0 * std::numbers::pi) {
        std::ostringstream msg;
        msg << "channel config: omega*overlap*spacing = " << omega * overlap * spacing
            << " must be < 2*pi for unambiguous decoding";
        throw std::invalid_argument(msg.str());
    }
    return ChannelConfig{omega, spacing, count, overlap, origin};
}

/// Sparse complex vector of channel coefficients.  Zero coefficients are
/// never stored; a pure encoding has exactly `overlap` unit-magnitude
/// entries.  Immutable after construction.
class ChannelVector {
  public:
    ChannelVector() = default;

    /// Zero vector of the given length.
    explicit ChannelVector(int length) : length_(check_length(length)) {}

    ChannelVector(int length, std::map<int, Complex> entries)
        : length_(check_length(length)), entries_(std::move(entries)) {
        for (auto it = entries_.begin(); it != entries_.end();) {
            const auto& [k, z] = *it;
            if (k < 1 || k > length_) {
                throw std::invalid_argument("channel vector: index " + std::to_string(k) +
                                            " outside [1, " + std::to_string(length_) + "]");
            }
            if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
                throw std::invalid_argument("channel vector: non-finite coefficient at index " +
                                            std::to_string(k));
            }
            it = (std::abs(z) == 0.0) ? entries_.erase(it) : std::next(it);
        }
    }

    int length() const noexcept { return length_; }

    const std::map<int, Complex>& entries() const noexcept { return entries_; }

    /// Coefficient at channel k, zero if absent.
    Complex at(int k) const {
        auto it = entries_.find(k);
        return it == entries_.end() ? Complex{0.0, 0.0} : it->second;
    }

    /// Sorted indices of the nonzero entries.
    std::vector<int> support() const {
        std::vector<int> idx;
        idx.reserve(entries_.size());
        for (const auto& [k, z] : entries_) idx.push_back(k);
        return idx;
    }

    bool empty() const noexcept { return entries_.empty(); }

    friend bool operator==(const ChannelVector&, const ChannelVector&) = default;

  private:
    static int check_length(int length) {
        if (length < 0) throw std::invalid_argument("channel vector: negative length");
        return length;
    }

    int length_ = 0;
    std::map<int, Complex> entries_;
};

/// Indices of all channels whose support contains x, in increasing order.
/// For x in the decodable domain this is exactly `overlap` consecutive
/// indices; outside it the set is shorter or empty.
inline std::vector<int> active_channels(const ChannelConfig& cfg, double x) {
    if (!std::isfinite(x)) throw std::invalid_argument("active_channels: x must be finite");
    int k_hi = static_cast<int>(std::floor((x - cfg.origin) / cfg.spacing));
    // Snap against the same boundary expressions used by domain_lo/domain_hi
    // so membership agrees with the domain check at channel edges.
    while (k_hi + 1 <= cfg.count && cfg.origin + (k_hi + 1) * cfg.spacing <= x) ++k_hi;
    while (k_hi >= 1 && cfg.origin + k_hi * cfg.spacing > x) --k_hi;

    const int lo = std::max(1, k_hi - cfg.overlap + 1);
    const int hi = std::min(cfg.count, k_hi);
    std::vector<int> idx;
    for (int k = lo; k <= hi; ++k) idx.push_back(k);
    return idx;
}

/// Channel coefficient of value x on channel k: exp(i*omega*(x + k*T)).
inline Complex channel_basis(const ChannelConfig& cfg, double x, int k) {
    return std::polar(1.0, cfg.omega * (x + k * cfg.spacing));
}

/// Encodes an in-domain scalar into its sparse channel vector.
inline ChannelVector encode_scalar(const ChannelConfig& cfg, double x) {
    if (!std::isfinite(x) || !in_domain(cfg, x)) {
        std::ostringstream msg;
        msg << "encode: x = " << x << " outside decodable domain [" << domain_lo(cfg) << ", "
            << domain_hi(cfg) << ")";
        throw std::domain_error(msg.str());
    }
    std::map<int, Complex> entries;
    for (int k : active_channels(cfg, x)) entries.emplace(k, channel_basis(cfg, x, k));
    return ChannelVector(cfg.count, std::move(entries));
}

/// A bank per axis of a vector-valued quantity.  Axis b occupies the
/// contiguous index block (offset(b), offset(b) + bank(b).count] of the
/// concatenated vector.
class BankSet {
  public:
    BankSet() = default;

    explicit BankSet(std::vector<ChannelConfig> banks) : banks_(std::move(banks)) {
        if (banks_.empty()) throw std::invalid_argument("bank set: at least one bank required");
        offsets_.reserve(banks_.size());
        int off = 0;
        for (const auto& cfg : banks_) {
            make_config(cfg.omega, cfg.spacing, cfg.count, cfg.overlap, cfg.origin);
            offsets_.push_back(off);
            off += cfg.count;
        }
        total_ = off;
    }

    int axes() const noexcept { return static_cast<int>(banks_.size()); }
    int total_length() const noexcept { return total_; }
    int offset(int axis) const { return offsets_.at(axis); }
    const ChannelConfig& bank(int axis) const { return banks_.at(axis); }
    const std::vector<ChannelConfig>& banks() const noexcept { return banks_; }

    friend bool operator==(const BankSet& a, const BankSet& b) { return a.banks_ == b.banks_; }

  private:
    std::vector<ChannelConfig> banks_;
    std::vector<int> offsets_;
    int total_ = 0;
};

/// Encodes a point with one component per bank into the concatenated
/// sparse vector.  Axis b's entries land at indices offset(b) + k.
inline ChannelVector encode_point(const BankSet& banks, const std::vector<double>& x) {
    if (static_cast<int>(x.size()) != banks.axes()) {
        throw std::invalid_argument("encode: point has " + std::to_string(x.size()) +
                                    " components but bank set has " +
                                    std::to_string(banks.axes()) + " axes");
    }
    std::map<int, Complex> entries;
    for (int b = 0; b < banks.axes(); ++b) {
        try {
            ChannelVector axis = encode_scalar(banks.bank(b), x[b]);
            for (const auto& [k, z] : axis.entries()) entries.emplace(banks.offset(b) + k, z);
        } catch (const std::domain_error& e) {
            throw std::domain_error("axis " + std::to_string(b + 1) + ": " + e.what());
        }
    }
    return ChannelVector(banks.total_length(), std::move(entries));
}

/// Entrywise weighted complex sum of channel vectors.  Weights are
/// nonnegative confidences; entries whose sum is exactly zero are dropped.
inline ChannelVector superpose(const std::vector<std::pair<double, ChannelVector>>& terms) {
    if (terms.empty()) throw std::invalid_argument("superpose: at least one term required");
    const int n = terms.front().second.length();
    std::map<int, Complex> sum;
    for (const auto& [w, v] : terms) {
        if (!std::isfinite(w) || w < 0.0) {
            throw std::invalid_argument("superpose: weights must be finite and >= 0");
        }
        if (v.length() != n) {
            throw std::invalid_argument("superpose: vector length mismatch (" +
                                        std::to_string(v.length()) + " vs " + std::to_string(n) +
                                        ")");
        }
        for (const auto& [k, z] : v.entries()) sum[k] += w * z;
    }
    return ChannelVector(n, std::move(sum));
}

/// Euclidean distance between two channel vectors, missing entries as zero.
inline double distance(const ChannelVector& a, const ChannelVector& b) {
    if (a.length() != b.length()) {
        throw std::invalid_argument("distance: vector length mismatch (" +
                                    std::to_string(a.length()) + " vs " +
                                    std::to_string(b.length()) + ")");
    }
    double sq = 0.0;
    auto ia = a.entries().begin();
    auto ib = b.entries().begin();
    while (ia != a.entries().end() || ib != b.entries().end()) {
        Complex d;
        if (ib == b.entries().end() || (ia != a.entries().end() && ia->first < ib->first)) {
            d = ia->second;
            ++ia;
        } else if (ia == a.entries().end() || ib->first < ia->first) {
            d = -ib->second;
            ++ib;
        } else {
            d = ia->second - ib->second;
            ++ia;
            ++ib;
        }
        sq += std::norm(d);
    }
    return std::sqrt(sq);
}

/// Hermitian inner product <a, b> = sum conj(a_k) * b_k.
inline Complex inner(const ChannelVector& a, const ChannelVector& b) {
    if (a.length() != b.length()) {
        throw std::invalid_argument("inner: vector length mismatch (" +
                                    std::to_string(a.length()) + " vs " +
                                    std::to_string(b.length()) + ")");
    }
    Complex acc{0.0, 0.0};
    const auto& small = a.entries().size() <= b.entries().size() ? a : b;
    const auto& large = a.entries().size() <= b.entries().size() ? b : a;
    for (const auto& [k, z] : small.entries()) {
        Complex other = large.at(k);
        if (&small == &a) {
            acc += std::conj(z) * other;
        } else {
            acc += std::conj(other) * z;
        }
    }
    return acc;
}

} // namespace chanenc

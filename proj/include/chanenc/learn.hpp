#pragma once

// Linear map between input and output channel spaces.
//
// Training pairs are encoded into the columns of A (inputs) and U
// (outputs); fit computes the complex matrix C minimizing
// ||U - C*A||_F^2 + ridge*||C||_F^2 via an SVD of A, treating singular
// values below rcond * sigma_max as zero.  With ridge = 0 this is the
// minimum-norm least-squares solution, so rank-deficient sample sets
// (sparse encodings of few points) stay well defined.

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "channel.hpp"
#include "errors.hpp"

namespace chanenc {

/// Input/output banks plus the (x, y) sample pairs.  Duplicate inputs with
/// different outputs are legal; that is the aliasing case the channel
/// representation exists to carry.
struct TrainingSet {
    BankSet input_banks;
    BankSet output_banks;
    std::vector<std::pair<std::vector<double>, std::vector<double>>> pairs;
};

struct FitMeta {
    double ridge = 0.0;
    double rcond = 1e-10;
    double residual = 0.0; ///< Frobenius norm of U - C*A on the training set
};

/// Trained complex map together with the channel spaces it connects.
/// Immutable; safe to share across threads.
class ChannelMap {
  public:
    ChannelMap() = default;

    ChannelMap(BankSet input_banks, BankSet output_banks, Eigen::MatrixXcd matrix, FitMeta meta)
        : input_banks_(std::move(input_banks)), output_banks_(std::move(output_banks)),
          matrix_(std::move(matrix)), meta_(meta) {
        if (matrix_.rows() != output_banks_.total_length() ||
            matrix_.cols() != input_banks_.total_length()) {
            throw std::invalid_argument("channel map: matrix is " +
                                        std::to_string(matrix_.rows()) + "x" +
                                        std::to_string(matrix_.cols()) + " but banks need " +
                                        std::to_string(output_banks_.total_length()) + "x" +
                                        std::to_string(input_banks_.total_length()));
        }
        if (!matrix_.allFinite()) {
            throw std::invalid_argument("channel map: matrix has non-finite entries");
        }
    }

    const BankSet& input_banks() const noexcept { return input_banks_; }
    const BankSet& output_banks() const noexcept { return output_banks_; }
    const Eigen::MatrixXcd& matrix() const noexcept { return matrix_; }
    const FitMeta& meta() const noexcept { return meta_; }

  private:
    BankSet input_banks_;
    BankSet output_banks_;
    Eigen::MatrixXcd matrix_;
    FitMeta meta_;
};

namespace detail {

inline Eigen::VectorXcd to_dense(const ChannelVector& v) {
    Eigen::VectorXcd d = Eigen::VectorXcd::Zero(v.length());
    for (const auto& [k, z] : v.entries()) d(k - 1) = z;
    return d;
}

/// Encodes the training pairs into sample-per-column matrices (A, U).
inline std::pair<Eigen::MatrixXcd, Eigen::MatrixXcd> encode_samples(const TrainingSet& train) {
    const auto m = static_cast<Eigen::Index>(train.pairs.size());
    Eigen::MatrixXcd a(train.input_banks.total_length(), m);
    Eigen::MatrixXcd u(train.output_banks.total_length(), m);
    for (Eigen::Index i = 0; i < m; ++i) {
        a.col(i) = to_dense(encode_point(train.input_banks, train.pairs[i].first));
        u.col(i) = to_dense(encode_point(train.output_banks, train.pairs[i].second));
    }
    return {std::move(a), std::move(u)};
}

} // namespace detail

/// Drops entries with magnitude <= floor.
inline ChannelVector sparsify(const ChannelVector& v, double floor) {
    if (!std::isfinite(floor) || floor < 0.0) {
        throw std::invalid_argument("sparsify: floor must be finite and >= 0");
    }
    std::map<int, Complex> kept;
    for (const auto& [k, z] : v.entries()) {
        if (std::abs(z) > floor) kept.emplace(k, z);
    }
    return ChannelVector(v.length(), std::move(kept));
}

/// Fits the channel-space map by complex least squares.
///
/// Deterministic: identical training sets and parameters produce a
/// bit-identical map.
inline ChannelMap fit(const TrainingSet& train, double ridge = 0.0, double rcond = 1e-10) {
    if (train.pairs.empty()) throw std::invalid_argument("fit: empty training set");
    if (!std::isfinite(ridge) || ridge < 0.0) {
        throw std::invalid_argument("fit: ridge must be finite and >= 0");
    }
    if (!std::isfinite(rcond) || rcond <= 0.0) {
        throw std::invalid_argument("fit: rcond must be finite and > 0");
    }

    auto [a, u] = detail::encode_samples(train);
    if (!a.allFinite() || !u.allFinite()) {
        throw NumericalError("fit: encoded samples contain non-finite values");
    }

    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd& sigma = svd.singularValues();

    Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(u.rows(), a.rows());
    if (sigma.size() > 0 && sigma(0) > 0.0) {
        const double cutoff = rcond * sigma(0);
        Eigen::Index rank = 0;
        while (rank < sigma.size() && sigma(rank) >= cutoff && sigma(rank) > 0.0) ++rank;
        if (rank > 0) {
            // A = W * diag(sigma) * V^H; C = U * V * diag(sigma/(sigma^2+ridge)) * W^H.
            Eigen::MatrixXcd uv = u * svd.matrixV().leftCols(rank);
            for (Eigen::Index i = 0; i < rank; ++i) {
                uv.col(i) *= sigma(i) / (sigma(i) * sigma(i) + ridge);
            }
            c.noalias() = uv * svd.matrixU().leftCols(rank).adjoint();
        }
    }
    if (!c.allFinite()) throw NumericalError("fit: solution contains non-finite values");

    FitMeta meta;
    meta.ridge = ridge;
    meta.rcond = rcond;
    meta.residual = (u - c * a).norm();
    return ChannelMap(train.input_banks, train.output_banks, std::move(c), meta);
}

/// Applies the map to an encoded input, exploiting its sparsity: only the
/// columns of C at the input's active indices contribute.  Output entries
/// below rel_floor times the largest output magnitude are dropped.
inline ChannelVector predict(const ChannelMap& map, const ChannelVector& a,
                             double rel_floor = 1e-6) {
    if (a.length() != map.input_banks().total_length()) {
        throw std::invalid_argument("predict: input length " + std::to_string(a.length()) +
                                    " does not match map input size " +
                                    std::to_string(map.input_banks().total_length()));
    }
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(map.matrix().rows());
    for (const auto& [k, z] : a.entries()) out += map.matrix().col(k - 1) * z;

    double max_mag = 0.0;
    for (Eigen::Index i = 0; i < out.size(); ++i) max_mag = std::max(max_mag, std::abs(out(i)));

    std::map<int, Complex> entries;
    for (Eigen::Index i = 0; i < out.size(); ++i) {
        entries.emplace(static_cast<int>(i) + 1, out(i));
    }
    return sparsify(ChannelVector(static_cast<int>(out.size()), std::move(entries)),
                    rel_floor * max_mag);
}

/// Frobenius norm of U - C*A over the given training set.
inline double residual(const ChannelMap& map, const TrainingSet& train) {
    if (!(train.input_banks == map.input_banks()) ||
        !(train.output_banks == map.output_banks())) {
        throw std::invalid_argument("residual: training banks do not match the map's banks");
    }
    auto [a, u] = detail::encode_samples(train);
    return (u - map.matrix() * a).norm();
}

} // namespace chanenc

#pragma once

#include <stdexcept>
#include <string>

namespace chanenc {

/// Raised when a channel vector cannot be decoded.  The kind tells the
/// caller whether to give up (corrupted input) or to fall back to
/// multi-mode decoding.
class DecodeError : public std::runtime_error {
  public:
    enum class Kind {
        empty_input,       ///< no entries above the magnitude floor
        ambiguous_support, ///< active set is not one run of <= overlap channels
        phase_mismatch,    ///< no value in the support window matches the phase
        incoherent,        ///< phase consistency below the caller's threshold
    };

    DecodeError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

    Kind kind() const noexcept { return kind_; }

  private:
    Kind kind_;
};

/// Raised when a numerical routine produces non-finite results.
class NumericalError : public std::runtime_error {
  public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace chanenc

#pragma once

#include <stdexcept>
#include <string>

namespace hped {

/// A runtime consistency check failed; carries the frame it was detected in.
class InvariantViolation : public std::runtime_error {
public:
    InvariantViolation(long long frame, const std::string& what)
        : std::runtime_error("frame " + std::to_string(frame) + ": " + what), frame_(frame) {}
    long long frame() const { return frame_; }

private:
    long long frame_;
};

}  // namespace hped

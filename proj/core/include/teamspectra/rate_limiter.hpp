#pragma once

#include <deque>
#include <vector>

namespace teamspectra::client {

struct RateWindow {
    int count = 1;         // grants allowed per window
    double window_s = 1.0;
};

// Sliding-window request pacing over one or more (count, window)
// constraints. Time is caller-supplied monotonic seconds, so schedules can
// be tested without sleeping. Windows are half-open: a grant exactly
// window_s older no longer occupies the window, which makes the rule
// "among sorted grants, the (i + count)-th is at least window_s after the
// i-th" for every constraint.
class RateLimiter {
public:
    explicit RateLimiter(std::vector<RateWindow> windows);

    // Earliest instant >= now at which one more request violates no
    // window. The grant is recorded at the returned instant. `now` must
    // not decrease across calls.
    double acquire_permit(double now);

    // The same computation without recording a grant.
    double peek(double now) const;

    const std::vector<RateWindow>& windows() const { return windows_; }

private:
    std::vector<RateWindow> windows_;
    std::deque<double> grants_;  // grant instants, non-decreasing
    double horizon_ = 0.0;       // longest window; older grants never block
};

}  // namespace teamspectra::client

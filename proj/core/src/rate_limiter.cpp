#include "teamspectra/rate_limiter.hpp"

#include <algorithm>

#include "teamspectra/errors.hpp"

namespace teamspectra::client {

RateLimiter::RateLimiter(std::vector<RateWindow> windows)
    : windows_(std::move(windows)) {
    if (windows_.empty())
        throw DomainError("rate limiter needs at least one window");
    for (const RateWindow& w : windows_) {
        if (w.count < 1) throw DomainError("window count must be positive");
        if (w.window_s <= 0.0) throw DomainError("window length must be positive");
        horizon_ = std::max(horizon_, w.window_s);
    }
}

double RateLimiter::peek(double now) const {
    double t = now;
    if (!grants_.empty()) t = std::max(t, grants_.back());
    for (const RateWindow& w : windows_) {
        const auto count = static_cast<std::size_t>(w.count);
        if (grants_.size() < count) continue;
        // The count-th most recent grant must have left the window.
        t = std::max(t, grants_[grants_.size() - count] + w.window_s);
    }
    return t;
}

double RateLimiter::acquire_permit(double now) {
    const double t = peek(now);
    grants_.push_back(t);
    while (grants_.front() <= t - horizon_) grants_.pop_front();
    return t;
}

}  // namespace teamspectra::client

#pragma once

#include <chrono>
#include <functional>
#include <string>
#include <thread>

#include "emoclick/errors.hpp"

namespace emoclick {

// Bounded retry with exponential backoff for transient transport failures.
// `sleeper` is injectable so tests run without real delays.
struct RetryPolicy {
    int max_attempts = 3;
    std::chrono::milliseconds initial_delay{200};
    double backoff_factor = 2.0;
    std::function<void(std::chrono::milliseconds)> sleeper =
        [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
};

// Runs `fn`, retrying on TransportError up to policy.max_attempts total
// attempts. Exhaustion surfaces as BackendUnavailableError carrying the
// last transport message. Non-transport errors propagate immediately.
template <typename Fn>
auto with_retries(const RetryPolicy& policy, Fn&& fn) -> decltype(fn()) {
    auto delay = policy.initial_delay;
    std::string last_error;
    for (int attempt = 1; attempt <= policy.max_attempts; ++attempt) {
        try {
            return fn();
        } catch (const TransportError& e) {
            last_error = e.what();
            if (attempt < policy.max_attempts && policy.sleeper) {
                policy.sleeper(delay);
                delay = std::chrono::milliseconds(static_cast<long long>(
                    static_cast<double>(delay.count()) * policy.backoff_factor));
            }
        }
    }
    throw BackendUnavailableError("backend unavailable after " +
                                  std::to_string(policy.max_attempts) +
                                  " attempts: " + last_error);
}

}  // namespace emoclick

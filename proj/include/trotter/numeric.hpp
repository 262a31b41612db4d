// numeric.hpp: small shared numerical helpers.

#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <functional>
#include <span>
#include <thread>
#include <vector>

namespace trotter {

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 1.0;
};

// Ordinary least squares y = intercept + slope * x. r2 is 1 when y has no spread.
LinearFit fit_line(std::span<const double> x, std::span<const double> y);

// Adaptive Simpson on [a, b] to absolute tolerance, starting from `panels`
// equal panels (each refined independently with tolerance split by length).
double integrate_adaptive_simpson(const std::function<double(double)>& f, double a, double b, double abs_tol,
                                  long panels = 1);

// Runs body(i) for i in [0, count) on up to `threads` workers. Callers write
// into pre-sized slots by index, so results never depend on scheduling.
template <class Body>
void parallel_for(std::size_t count, unsigned threads, Body&& body) {
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(count)));
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) {
            body(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(threads);
    {
        std::vector<std::jthread> workers;
        workers.reserve(threads);
        for (unsigned w = 0; w < threads; ++w) {
            workers.emplace_back([&, w] {
                try {
                    for (std::size_t i = next++; i < count; i = next++) {
                        body(i);
                    }
                } catch (...) {
                    errors[w] = std::current_exception();
                    next = count;
                }
            });
        }
    }
    for (auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
}

} // namespace trotter

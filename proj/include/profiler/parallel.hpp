#pragma once

#include <cstddef>
#include <exception>
#include <limits>
#include <mutex>

namespace profiler {

// Exceptions cannot cross an OpenMP region boundary. Loop bodies run through
// capture(); after the region, rethrow() raises the exception of the lowest
// failing iteration, so the error matches what the serial loop reports.
class ParallelErrors {
 public:
  template <typename F>
  void capture(std::size_t iteration, F&& body) noexcept {
    try {
      body();
    } catch (...) {
      std::lock_guard<std::mutex> lock(mu_);
      if (iteration < iteration_) {
        iteration_ = iteration;
        error_ = std::current_exception();
      }
    }
  }

  void rethrow() const {
    if (error_) std::rethrow_exception(error_);
  }

 private:
  std::mutex mu_;
  std::size_t iteration_ = std::numeric_limits<std::size_t>::max();
  std::exception_ptr error_;
};

}  // namespace profiler

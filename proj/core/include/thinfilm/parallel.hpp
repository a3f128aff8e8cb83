#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

namespace thinfilm {

/// Neumaier-compensated accumulator. Adding exact zeros leaves the state unchanged.
class CompensatedSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  CompensatedSum& operator+=(double x) noexcept {
    add(x);
    return *this;
  }
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// Worker count used by the data-parallel loops; 1 by default.
void set_num_threads(int n);
int num_threads();

// Runs body(b) for every block b in [0, n_blocks). Blocks are distributed over
// the configured workers; body must only write to block-private state.
void parallel_blocks(std::size_t n_blocks, const std::function<void(std::size_t)>& body);

// Sum of block_value(b) over all blocks. Each block is evaluated independently
// and the partial results are combined in block order, so the result does not
// depend on the worker count.
double ordered_block_sum(std::size_t n_blocks, const std::function<double(std::size_t)>& block_value);

}  // namespace thinfilm

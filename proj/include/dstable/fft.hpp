#pragma once

#include <vector>

#include "dstable/special_fn.hpp"

namespace dstable::detail {

/// Forward transform X_k = sum_j x_j e^{-2 pi i j k / N}, N a power of two,
/// by iterative radix-2 decimation in time.
void fft_forward(std::vector<ComplexValue>& data);

/// Same transform by direct O(N^2) summation with the same twiddle table.
std::vector<ComplexValue> dft_forward(const std::vector<ComplexValue>& data);

bool is_power_of_two(long long n);

}  // namespace dstable::detail

#pragma once

namespace ktrr {

/// Thread cap for the parallel sections (kernel rows, k-means restarts).
/// Initialized from KTRR_NUM_THREADS when set; 0 means library default.
int max_threads();
void set_max_threads(int n);

}  // namespace ktrr

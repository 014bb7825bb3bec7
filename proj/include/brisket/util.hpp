#pragma once
#include <functional>

namespace brisket {

// Runs fn(0..count-1) across up to `jobs` threads. Callers own making the
// bodies independent; results must be written to per-index slots so the
// output is identical to the serial order. jobs <= 1 runs inline.
void parallel_for(int count, int jobs, const std::function<void(int)>& fn);

} // namespace brisket

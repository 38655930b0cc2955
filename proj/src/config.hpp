#pragma once

namespace eeclass {

// Worker-thread budget for batch operations. n <= 0 resets to the hardware
// concurrency. All results are independent of this setting.
void set_threads(int n);
int threads();

}  // namespace eeclass

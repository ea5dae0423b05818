#pragma once

#include <cstddef>
#include <functional>

namespace nhsense::sweep {

enum class Execution { Serial, OpenMP };

struct Options {
  Execution execution = Execution::OpenMP;
  int threads = 0;  // 0 = library default
};

/// Runs fn(i) for i in [0, count). The OpenMP path distributes iterations
/// across threads; results must be written to per-index slots so output is
/// identical to the serial reference regardless of scheduling.
void for_each_index(std::size_t count, const std::function<void(std::size_t)>& fn,
                    const Options& opts = {});

}  // namespace nhsense::sweep

#include "latlab/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>

namespace latlab {

int configuredWorkers() {
  if (const char* env = std::getenv("LATLAB_WORKERS")) {
    try {
      const int w = std::stoi(env);
      if (w > 0) return w;
    } catch (...) {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<WorkerRange> partitionTrials(std::uint64_t trials, int workers) {
  std::vector<WorkerRange> out;
  if (workers < 1) workers = 1;
  const std::uint64_t w = std::min<std::uint64_t>(static_cast<std::uint64_t>(workers), std::max<std::uint64_t>(trials, 1));
  const std::uint64_t base = trials / w;
  const std::uint64_t extra = trials % w;
  std::uint64_t begin = 0;
  for (std::uint64_t i = 0; i < w; ++i) {
    const std::uint64_t len = base + (i < extra ? 1 : 0);
    out.push_back({static_cast<int>(i), begin, begin + len});
    begin += len;
  }
  return out;
}

}  // namespace latlab

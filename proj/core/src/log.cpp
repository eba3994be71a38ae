#include "latlab/log.hpp"

#include <cstdlib>
#include <iostream>
#include <mutex>

namespace latlab {

void logWarning(const std::string& message) {
  static std::mutex mu;
  if (std::getenv("LATLAB_QUIET") != nullptr) return;
  std::lock_guard<std::mutex> lock(mu);
  std::cerr << "latlab: warning: " << message << '\n';
}

}  // namespace latlab

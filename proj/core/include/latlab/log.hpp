#pragma once

#include <string>

namespace latlab {

/// Writes a warning line to stderr unless LATLAB_QUIET is set.
void logWarning(const std::string& message);

}  // namespace latlab

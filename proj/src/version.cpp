#include "packing/version.hpp"

namespace packing {

const char* tool_version() { return "packbound 1.0.0"; }

}  // namespace packing

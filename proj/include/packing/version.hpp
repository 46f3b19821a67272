#pragma once

namespace packing {

// Single source of truth for the tool version recorded in certificates.
const char* tool_version();

}  // namespace packing

#pragma once

// Umbrella header for the exact verification kernel of the truncated
// CMC hierarchy with its Virasoro extension.

#include "cmch/report.hpp"

#pragma once

#include <cstddef>
#include <functional>

namespace radarmi {

/// Thread budget for parallel loops: min(RADAR_MI_THREADS, items), where the
/// env var value 0 or absence means "use the hardware concurrency". Garbage
/// values throw config_error.
std::size_t resolve_thread_count(std::size_t items);

/// Runs body(0..count-1), possibly on several threads. The body must write
/// only to its own index's slot; exceptions are rethrown on the caller.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

} // namespace radarmi

#pragma once

#include "tkz/solvers.hpp"

#include <filesystem>
#include <iosfwd>

namespace tkz {

// TraceFile: '#' metadata lines, then the CSV header
// "iteration,elapsed_seconds,residual" and one row per log point.

void write_trace(std::ostream& out, const RunTrace& trace);
void save_trace(const std::filesystem::path& path, const RunTrace& trace);

/// Parses the data rows and the metadata written by write_trace. Unknown
/// metadata lines are ignored.
RunTrace read_trace(std::istream& in);
RunTrace load_trace(const std::filesystem::path& path);

}  // namespace tkz

#pragma once

#include "continuized/ensemble.hpp"

#include <filesystem>
#include <iosfwd>
#include <vector>

namespace continuized {

/// "t,metric,mean,q05,q95" (+ ",bound" when the run set carries bounds), one row
/// per (checkpoint, metric), 12 significant digits.
void write_csv(const RunSet& runset, std::ostream& out);
void emit_csv(const RunSet& runset, const std::filesystem::path& path);

/// Reads a file produced by emit_csv back into aggregate rows.
std::vector<AggregateRow> read_csv(const std::filesystem::path& path);

}  // namespace continuized

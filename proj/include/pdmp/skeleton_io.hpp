#ifndef PDMP_SKELETON_IO_HPP
#define PDMP_SKELETON_IO_HPP

#include <iosfwd>
#include <string>

#include "pdmp/core.hpp"

namespace pdmp {

/// 17 significant digits, '.' decimal separator.
[[nodiscard]] std::string format_double(double value);

/// CSV with header t,x0..x{d-1},v0..v{d-1}. The first row is the initial
/// state at t = 0, followed by one row per event.
void write_skeleton_csv(std::ostream& out, const Skeleton& skeleton);
void write_skeleton_csv(const std::string& path, const Skeleton& skeleton);

/// Inverse of write_skeleton_csv. final_time/final_state are taken from the
/// last row.
[[nodiscard]] Skeleton read_skeleton_csv(std::istream& in);

}  // namespace pdmp

#endif  // PDMP_SKELETON_IO_HPP

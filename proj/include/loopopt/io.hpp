#pragma once

#include "loopopt/loop_curve.hpp"

#include <filesystem>
#include <string>

namespace loopopt {

/// "%.17g"; round-trips every finite double.
std::string format_double(double x);

/// {"n": N, "points": [[x0, y0], ...]}
std::string curve_to_json(const LoopCurve& c);
LoopCurve curve_from_json(const std::string& text);

/// Header "theta,x,y".
std::string curve_to_csv(const LoopCurve& c);
LoopCurve curve_from_csv(const std::string& text);

/// Reads a curve from .json or .csv, by extension.
LoopCurve read_curve_file(const std::filesystem::path& path);

/// Writes via a temporary sibling and rename. Throws IoError.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);
std::string read_file(const std::filesystem::path& path);

}  // namespace loopopt

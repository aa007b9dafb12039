#pragma once

#include <string>
#include <utility>
#include <vector>

#include "alstop/trace.hpp"

namespace alstop {

// Learning curve: F on the held-out fold (y, percent) against annotations
// (x), with one labeled vertical line per criterion stop point. Writes a
// standalone SVG plus the underlying curve CSV ("annotations,f"). Stop
// labels that would collide horizontally are stacked.
void render_learning_curve(const RunTrace& trace,
                           const std::vector<std::pair<std::string, long>>& stops,
                           const std::string& svg_path, const std::string& csv_path);

// Across-fold average: mean F at each annotation count present in every
// trace (the common prefix of annotation grids).
void render_average_curve(const std::vector<RunTrace>& traces,
                          const std::vector<std::pair<std::string, double>>& mean_stops,
                          const std::string& svg_path, const std::string& csv_path);

}  // namespace alstop

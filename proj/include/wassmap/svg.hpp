#pragma once

#include <string>
#include <vector>

#include "wassmap/measure.hpp"

namespace wassmap {

/// Dependency-free scatter plot. Points are drawn as filled circles
/// colored by label (all one color when labels are empty); the
/// optional truth configuration is overlaid as crosses. No timestamps
/// or other run-varying metadata are emitted.
std::string scatter_svg(const Matrix& points, const std::vector<int>& labels = {},
                        const Matrix& truth = Matrix(), const std::string& title = "");

void save_scatter_svg(const std::string& path, const Matrix& points,
                      const std::vector<int>& labels = {}, const Matrix& truth = Matrix(),
                      const std::string& title = "");

}  // namespace wassmap

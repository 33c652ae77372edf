#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "ktchart/chart.hpp"

namespace ktchart {

struct RenderOptions {
  int width = 960;
  int panel_height = 300;
  std::string title;
};

/// Standalone SVG with the a chart stacked over the R^2 chart. Limit lines
/// carry class "limit <name>"; warning lines are dashed. Out-of-control
/// points carry class "point out". Throws InvalidArgument for no points.
void render_charts(std::ostream& out, const std::vector<ChartPoint>& points,
                   const ChartLimits& a_chart, const ChartLimits& r2_chart,
                   const RenderOptions& options = {});

}  // namespace ktchart

#pragma once

#include <string>

#include "fdhomog/ddplot.hpp"

namespace fdhomog::cli {

/// Standalone SVG scatter of a DD-plot: one circle per pooled curve (class
/// "f" or "g" by origin, exact depths in data-df / data-dg), the (0,0)-(1,1)
/// reference line, and axis labels naming both reference samples.
std::string render_ddplot_svg(const DDPlot& dd, const std::string& name_f, const std::string& name_g);

}  // namespace fdhomog::cli

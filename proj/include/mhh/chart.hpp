#pragma once

#include "mhh/specseq.hpp"

#include <string>
#include <vector>

namespace mhh {

struct ChartSpec {
    int s_max = 16;
    int t_max = 15;
    int cell = 40;    // pixels per unit of s or t
    int stack = 10;   // vertical offset between classes sharing a slot
    int margin = 40;
    int max_page = 0;  // arrows for pages <= max_page; 0 draws all
};

// SVG of the classes of `page` in the chart window, with one arrow per logged differential
// whose ends are both drawn. Classes in a slot are stacked upward in basis order.
std::string emit_chart(const Page& page, const std::vector<LogEntry>& log, const ChartSpec& spec);

}  // namespace mhh

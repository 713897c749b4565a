#pragma once

#include <string>
#include <vector>

namespace stirred::io {

struct Series {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

/// Line plot with axes, tick labels and a legend. Returns a placeholder
/// document labelled "no data" when every series is empty. Output depends
/// only on the input.
std::string svg_line_plot(const std::vector<Series>& series, const std::string& title, const std::string& xlabel,
                          const std::string& ylabel);

/// Nullclines of the lily-pad reaction field on 0 <= v <= u <= 1:
/// eta_1 = 0 (gamma_1) and eta_2 = 0 with v > 0 (gamma_2), each traced by
/// bisection along vertical lines u = const.
std::vector<Series> lily_pad_nullclines(double c, int samples = 400);

/// Phase portrait of eta: a grid of unit direction arrows plus the two
/// nullclines.
std::string svg_phase_portrait(double c, int arrows = 20);

}  // namespace stirred::io

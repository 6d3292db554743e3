#pragma once

#include <string>
#include <vector>

#include "ntnsim/sweep.hpp"

namespace ntnsim {

/// Figure-reproduction presets fig2..fig5. Each preset pins every
/// parameter the experiment needs, documented inline in the preset text.
const std::vector<std::string>& figure_ids();
bool is_figure_id(const std::string& id);

/// Base config text of a preset; throws ConfigError on unknown id with a
/// usage message listing the valid ids.
std::string preset_text(const std::string& figure_id);

/// Preset plus its parameter sweep.
SweepSpec figure_sweep(const std::string& figure_id);

struct FigureOutput {
    std::string csv;  // full per-flow metric rows
    std::string dat;  // tidy columns matching the figure's axes
};

/// Runs the preset sweep and returns both the CSV and the gnuplot-ready
/// data file.
FigureOutput reproduce_figure(const std::string& figure_id, int jobs);

}  // namespace ntnsim

#pragma once

#include <string>
#include <vector>

#include "core/common.hpp"
#include "core/grid.hpp"
#include "core/visibility.hpp"

namespace tat {

/// 8-bit grayscale PGM, linearly mapped from [min, max]; the range is noted
/// in a small companion .txt.
void write_pgm(const ScalarField& f, const std::string& path);

/// Log-log decay plot with a fitted-slope annotation.
void write_decay_svg(const std::vector<double>& k, const std::vector<double>& ratio,
                     double slope, const std::string& path);

/// Direction fan: per-bin mean mask weight drawn as a wedge fan.
void write_fan_svg(const ConeMask& mask, const std::string& path);

struct PlotOutcome {
    int written = 0;
    std::vector<std::string> warnings;
};

/// Renders the standard artifact set from a run directory: phantom,
/// reconstruction, |difference| maps, visibility fan, cross-term decay.
/// Missing artifacts are skipped with a warning.
PlotOutcome export_plots(const std::string& artifact_dir);

}  // namespace tat

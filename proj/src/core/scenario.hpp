#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "core/common.hpp"
#include "core/fan.hpp"
#include "core/geometry.hpp"
#include "core/grid.hpp"
#include "core/metrics.hpp"
#include "core/phantom.hpp"
#include "core/sound_speed.hpp"
#include "core/visibility.hpp"

namespace tat {

/// Everything a run needs, parsed from the JSON configuration. The schema is
/// documented in the repository README.
struct ScenarioConfig {
    std::string name = "scenario";

    Grid grid;
    SoundSpeedModel speed;
    std::vector<PhantomPrimitive> phantom;
    double mollify_sigma_cells = 2.0;
    DomainGeometry geom;

    // discretization
    size_t n_dirs = 64;
    size_t time_half_samples = 128;
    size_t surface_samples = 0;  // 0 -> derived (grid columns / boundary arc)
    double fan_spacing_cells = 2.0;
    size_t quad_dirs = 0;        // 0 -> 4 * n_dirs
    double r_max_frac = 0.5;     // fraction of the grid Nyquist
    double dr_period = 12.0;     // radial step = 2*pi / dr_period

    // pipeline
    std::string pipeline = "hyperplane";  // hyperplane | patches
    double window_plateau_frac = 0.8;
    double window_support_frac = 0.985;
    bool window_explicit = false;  // explicit surface window override
    double window_support_lo = 0.0, window_support_hi = 0.0;
    double window_plateau_lo = 0.0, window_plateau_hi = 0.0;
    double t_plateau_frac = 0.85;
    size_t n_patches = 6;
    double patch_taper_frac = 0.3;
    double b0_floor_frac = 0.05;

    VisibilityOptions vis;
    EdgeScoreOptions edge;
    double score_visible_threshold = 0.9;
    double score_invisible_ceiling = 0.4;

    double cfl_factor = 0.8;
    bool cross_term = false;
    std::vector<double> cross_term_carriers = {8.0, 16.0, 32.0, 64.0};

    uint64_t seed = 12345;
    int threads = 0;
};

ScenarioConfig parse_config_file(const std::string& path);
ScenarioConfig parse_config_text(const std::string& json_text);

/// Structural checks plus the derived-resolution preconditions (CFL bound,
/// time-axis Nyquist versus the frequency band, taper margins). Throws
/// ValidationError before any compute starts.
void validate_config(const ScenarioConfig& cfg);

struct ScenarioMetrics {
    double eikonal_residual_max = 0.0;
    double table_grad_lower_bound = 0.0;
    double initial_phase_error = 0.0;
    double initial_amp_error = 0.0;
    double table_coverage = 0.0;
    double energy_drift = 0.0;
    double forward_rel_l2 = 0.0;  // GO forward trace vs FDTD trace
    double min_visible_score = 0.0;
    double max_invisible_score = 0.0;
    double max_visible_localization = 0.0;
    size_t n_visible = 0, n_invisible = 0;
    double cross_term_ratio_last = 0.0;
    double cross_term_exponent = 0.0;
    double chi_partition_error = 0.0;    // patches mode
    double theta_partition_error = 0.0;  // patches mode
};

struct ScenarioResult {
    ScenarioMetrics metrics;
    std::string summary_json;
    std::vector<std::string> artifacts;
};

/// fields -> rays/visibility -> tables -> forward data -> reconstruction ->
/// metrics; writes artifacts and a versioned machine-readable summary into
/// out_dir. Throws on stage failure (partial artifacts are kept on disk).
ScenarioResult run_scenario(const ScenarioConfig& cfg, const std::string& out_dir);

/// Reads back the summary of a finished run.
std::string load_summary(const std::string& artifact_dir);

}  // namespace tat

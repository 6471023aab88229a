#pragma once

#include "bhct/geometry.hpp"
#include "bhct/io.hpp"
#include "bhct/sinogram.hpp"
#include "bhct/spectral.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace bhct {

struct LineSelector {
    std::size_t disk_a = 0;
    std::size_t disk_b = 1;
    std::string case_tag = "++"; // "++", "--", "+-" or "external"
    std::size_t index = 0;       // among lines matching pair and tag, in enumeration order
};

struct ProfileRequest {
    std::string label;
    LineSelector line;
    std::vector<double> nus{-0.4, 0.4, 1.3};
    double half_width = 0.25;
    std::size_t n_samples = 1001;
    std::optional<double> exclusion_radius; // defaults to twice the mollifier radius
};

struct WaterSettings {
    bool enabled = false;
    std::optional<double> t_max; // defaults to 2 fov_radius max(density1)
    std::size_t n_table = 1025;
};

struct ExperimentConfig {
    Json phantom_spec = "paper";
    Phantom phantom = paper_phantom();
    Json spectral_spec = "paper";
    SpectralModel spectral = paper_spectral_model(64);
    SinogramGrid grid;
    double epsilon = 0.015;
    std::size_t image_n = 1201;
    double wl = -0.03;
    double ww = 0.18;
    WaterSettings water;
    std::vector<ProfileRequest> profiles;
    std::string output_dir = "out";
    std::vector<std::string> formats{"bin", "pgm", "csv", "json"};
    std::uint64_t seed = 20240601;
    int threads = 0;
    std::size_t verify_lines = 1000;
    double verify_step = 1e-4;

    double exclusion_for(const ProfileRequest& r) const { return r.exclusion_radius.value_or(2.0 * epsilon); }
    bool wants(const std::string& format) const;
};

struct Overrides {
    std::optional<std::string> out;
    std::optional<double> delta_energy;
    bool paper_scale = false;
    std::optional<int> threads;
    std::optional<double> wl, ww;
    std::optional<std::uint64_t> seed;
};

// Relative paths inside the document resolve against base_dir.
ExperimentConfig config_from_json(const Json& doc, const std::string& base_dir);
ExperimentConfig load_config(const std::optional<std::string>& path, const Overrides& overrides);
void apply_overrides(ExperimentConfig& cfg, const Overrides& overrides);

// Fully resolved configuration; loading it reproduces the run.
Json effective_config_json(const ExperimentConfig& cfg);

SpectralModel resolve_spectral(const Json& spec, const std::string& base_dir);

const TangentLine& select_line(const std::vector<TangentLine>& lines, const LineSelector& sel);

} // namespace bhct

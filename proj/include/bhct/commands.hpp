#pragma once

#include "bhct/config.hpp"

#include <optional>
#include <ostream>
#include <string>

namespace bhct {

// Each command writes into cfg.output_dir and prints a JSON summary to `out`.
// Return value is the process exit status; failures surface as bhct::Error.
int cmd_simulate(const ExperimentConfig& cfg, std::ostream& out);
int cmd_reconstruct(const ExperimentConfig& cfg, const std::optional<std::string>& sinogram_path,
                    std::ostream& out);
int cmd_tangents(const ExperimentConfig& cfg, std::ostream& out);
int cmd_profiles(const ExperimentConfig& cfg, const std::optional<std::string>& image_path,
                 std::ostream& out);
int cmd_verify(const ExperimentConfig& cfg, std::ostream& out);
int cmd_report(const ExperimentConfig& cfg, std::ostream& out);

// Loads the configuration, dispatches, and converts errors into a JSON line on `err`
// plus the matching exit status (2 validation, 3 numeric, 4 I/O).
int run_command(const std::string& name, const std::optional<std::string>& config_path,
                const Overrides& overrides, const std::optional<std::string>& input,
                std::ostream& out, std::ostream& err);

} // namespace bhct

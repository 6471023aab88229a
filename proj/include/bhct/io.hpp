#pragma once

#include "bhct/analysis.hpp"
#include "bhct/geometry.hpp"
#include "bhct/recon.hpp"
#include "bhct/sinogram.hpp"
#include "bhct/spectral.hpp"
#include "bhct/streaks.hpp"

#include <json.hpp>

#include <string>

namespace bhct {

using Json = nlohmann::json;

Json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const Json& doc);
void write_text_file(const std::string& path, const std::string& text);

Json phantom_to_json(const Phantom& phantom);
Phantom phantom_from_json(const Json& doc);

Json spectral_to_json(const SpectralModel& model);
SpectralModel spectral_from_json(const Json& doc);

Json grid_to_json(const SinogramGrid& grid);

// Raw little-endian float64 payload at `path`, metadata at `path + ".json"`.
void write_sinogram(const std::string& path, const Sinogram& sino, const std::string& description);
Sinogram read_sinogram(const std::string& path);

// Same layout for images; the coverage mask goes to `path + ".mask"` as one byte per pixel.
void write_image(const std::string& path, const ImageGrid& image, const std::string& description);
ImageGrid read_image(const std::string& path);

// Binary PGM with +y at the top.
void write_pgm(const std::string& path, const ImageGrid& image, double wl, double ww);

Json tangent_line_to_json(const TangentLine& line);
Json prediction_to_json(const StreakPrediction& pred);
Json fit_to_json(const ProfileFit& fit);
Json comparison_to_json(const Comparison& cmp);

// Columns: h, sample.
void write_profile_csv(const std::string& path, const Profile& profile);

} // namespace bhct

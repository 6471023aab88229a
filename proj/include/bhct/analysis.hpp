#pragma once

#include "bhct/geometry.hpp"
#include "bhct/recon.hpp"
#include "bhct/streaks.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace bhct {

struct Profile {
    TangentLine line;
    double nu = 0.0;
    Vec2 x0;
    Vec2 direction;
    double half_width = 0.0;
    std::vector<double> h_values;
    std::vector<double> samples;
};

struct ProfileFit {
    double a0 = 0.0, a1 = 0.0, a2 = 0.0, a3 = 0.0; // 1, h, |h|, h ln|h|
    double residual_rms = 0.0;
    double exclusion_radius = 0.0;
    Shape dominant = Shape::Mixed;
    int dominant_sign = 0;
    double energy_abs = 0.0;
    double energy_hlog = 0.0;
    double condition = 0.0;
    std::size_t n_used = 0;
};

struct Comparison {
    Shape predicted = Shape::AbsH;
    Shape fitted = Shape::Mixed;
    bool shape_match = false;
    bool sign_agrees = false;
    double amplitude_ratio = 0.0; // fitted / predicted dominant coefficient
};

// Offsets h_j = half_width (2j - (n-1)) / (n-1), so h = 0 is sampled exactly.
std::vector<double> symmetric_offsets(double half_width, std::size_t n_samples);

// Samples along the frame normal through point_on_tangent(line, nu).
Profile extract_profile(const ImageGrid& image, const TangentLine& line, double nu,
                        double half_width, std::size_t n_samples);

ProfileFit fit_profile(const Profile& profile, double exclusion_radius,
                       double dominance_ratio = 3.0);

Comparison compare(const ProfileFit& fit, const StreakPrediction& prediction);

// Outer-segment sign pattern: matching |h| signs on external lines,
// opposite h ln|h| signs on internal lines.
bool sign_pattern_match(CaseTag tag, const ProfileFit& before, const ProfileFit& after);

// Mean over the annulus 0.7R..0.9R minus mean over r < 0.2R.
double cupping_metric(const ImageGrid& image, const Disk& disk);

std::string comparison_table_header();
std::string comparison_table_row(const std::string& label, double nu, const ProfileFit& fit,
                                 const Comparison& cmp);

} // namespace bhct

#pragma once

#include "bhct/geometry.hpp"
#include "bhct/spectral.hpp"

#include <complex>
#include <cstddef>
#include <string>

namespace bhct {

enum class Kappa { PlusI, One, MinusI };

std::complex<double> kappa_value(Kappa k);
std::string kappa_name(Kappa k);

// Sign table for the ++ case; the +- case uses e((3/2)(-sgn_lambda + sgn_mu)), e(r) = exp(i r pi / 2).
Kappa kappa_from_signs(int sgn_lambda, int sgn_mu, CaseTag tag);

enum class Shape { AbsH, HLogH, Mixed };
std::string shape_name(Shape s);

// Oriented frame of a double tangent used for predictions and profiles.
// External lines: normal points toward both disk centers.
// Internal lines: normal points toward the center of disk_indices.second.
// Labels follow perp = (x1 - x2)/|x1 - x2|, so they may be swapped relative to the record.
struct StreakFrame {
    double alpha = 0.0;
    Vec2 normal;
    Vec2 perp;
    Vec2 x1, x2;
    double p_prime1 = 0.0, p_prime2 = 0.0;
    bool labels_swapped = false;

    // Map a record parameter nu to the frame parameter.
    double frame_nu(double nu) const { return labels_swapped ? 1.0 - nu : nu; }
};

StreakFrame streak_frame(const TangentLine& line);

struct StreakPrediction {
    TangentLine line;
    double nu = 0.0;
    Vec2 x0;
    Vec2 direction; // profile axis, the frame normal
    Kappa kappa = Kappa::One;
    double c0 = 0.0;
    double b_coeff = 0.0;
    Shape shape = Shape::AbsH;
    int sign = 0;           // sign of the non-vanishing coefficient below
    double coef_abs = 0.0;  // multiplies |h|
    double coef_hlog = 0.0; // multiplies h ln|h|
};

// Conormal coefficient of the sqrt(t) edge at the side-sign + tangent of one disk.
double b_half(const SpectralModel& model, const Phantom& phantom, std::size_t disk_index,
              double alpha);

// Streak coefficient: minus the W-weighted covariance of the two edge attenuations.
double b_streak(const SpectralModel& model, const Phantom& phantom, const TangentLine& line);

Kappa kappa_for(const TangentLine& line, double nu);

double c0_general(const TangentLine& line, double nu, double b_coeff);
double c0_simplified(const TangentLine& line, double nu, double b_coeff);
// Evaluates both forms and checks that they agree.
double c0_amplitude(const TangentLine& line, double nu, double b_coeff);

StreakPrediction predict_profile(const TangentLine& line, double nu, const SpectralModel& model,
                                 const Phantom& phantom);

// Leading-order model value at x0 + h * direction.
double predicted_value(const StreakPrediction& pred, double h);

} // namespace bhct

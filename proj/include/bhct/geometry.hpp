#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace bhct {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator-(Vec2 a) { return {-a.x, -a.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }

// (cos a, sin a) and its left perpendicular (-sin a, cos a).
inline Vec2 unit_normal(double alpha) { return {std::cos(alpha), std::sin(alpha)}; }
inline Vec2 unit_perp(double alpha) { return {-std::sin(alpha), std::cos(alpha)}; }

enum class Basis { One = 1, Two = 2 };

struct Disk {
    Vec2 center;
    double radius = 1.0;
    double density1 = 0.0;
    double density2 = 0.0;

    double density(Basis which) const { return which == Basis::One ? density1 : density2; }
    double curvature() const { return 1.0 / radius; }
};

// Disjoint disks inside a circular field of view. Validated on construction.
class Phantom {
public:
    Phantom() = default;
    Phantom(std::vector<Disk> disks, double fov_radius);

    const std::vector<Disk>& disks() const { return disks_; }
    const Disk& disk(std::size_t i) const { return disks_.at(i); }
    std::size_t size() const { return disks_.size(); }
    double fov_radius() const { return fov_radius_; }

private:
    std::vector<Disk> disks_;
    double fov_radius_ = 1.0;
};

// The line {x : (cos a, sin a).x = p}. (a, p) and (a + pi, -p) are the same line.
struct LineCoord {
    double alpha = 0.0;
    double p = 0.0;

    Vec2 normal() const { return unit_normal(alpha); }
    Vec2 perp() const { return unit_perp(alpha); }
    // Representative with alpha in [0, pi).
    LineCoord canonical() const;
};

enum class CaseTag { PlusPlus, MinusMinus, PlusMinus };

std::string case_tag_name(CaseTag tag);
bool is_external(CaseTag tag);

struct TangentLine {
    LineCoord coord;
    std::pair<std::size_t, std::size_t> disk_indices{0, 1};
    std::pair<Vec2, Vec2> tangency_points;
    // +1 when the disk center lies on the +normal side of the line.
    std::pair<int, int> side_signs{1, 1};
    CaseTag case_tag = CaseTag::PlusPlus;
    // perp(alpha) . x_j, which for a disk equals perp(alpha) . c_j.
    std::pair<double, double> p_prime{0.0, 0.0};
};

// (p_minus, p_plus): edges where the disk support starts (side sign +) and ends (side sign -).
std::pair<double, double> disk_tangent_offsets(const Disk& disk, double alpha);

// All four common tangents of every disk pair, canonical alpha in [0, pi), sorted by (pair, alpha).
std::vector<TangentLine> enumerate_double_tangents(const Phantom& phantom);

Vec2 point_on_tangent(const TangentLine& line, double nu);

double chord_length(const Disk& disk, const LineCoord& line);

// Same line with the roles of the two tangency points exchanged.
TangentLine swap_labels(const TangentLine& line);

// Two-ball phantom used throughout the experiments: FOV radius 6.
Phantom paper_phantom();

} // namespace bhct

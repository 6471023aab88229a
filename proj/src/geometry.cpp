#include "bhct/geometry.hpp"

#include "bhct/error.hpp"

#include <algorithm>
#include <numbers>
#include <sstream>

namespace bhct {

namespace {

// Disks closer than this (relative to their center distance) make the two
// internal tangents nearly coincide; such phantoms are rejected.
constexpr double kNearContactGap = 1e-8;

bool finite(Vec2 v) { return std::isfinite(v.x) && std::isfinite(v.y); }

double wrap_two_pi(double a) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    a = std::fmod(a, two_pi);
    if (a < 0.0) a += two_pi;
    if (a >= two_pi) a -= two_pi;
    return a;
}

} // namespace

Phantom::Phantom(std::vector<Disk> disks, double fov_radius)
    : disks_(std::move(disks)), fov_radius_(fov_radius) {
    if (!(fov_radius_ > 0.0) || !std::isfinite(fov_radius_))
        fail_validation("phantom.fov_radius", "fov_radius must be positive and finite");
    for (std::size_t i = 0; i < disks_.size(); ++i) {
        const Disk& d = disks_[i];
        std::ostringstream where;
        where << "disk " << i;
        if (!finite(d.center) || !std::isfinite(d.radius) || !std::isfinite(d.density1) ||
            !std::isfinite(d.density2))
            fail_validation("phantom.non_finite", where.str() + " has a non-finite field");
        if (!(d.radius > 0.0))
            fail_validation("phantom.radius", where.str() + " must have a positive radius");
        if (norm(d.center) + d.radius > fov_radius_ * (1.0 + 1e-12))
            fail_validation("phantom.fov", where.str() + " is not contained in the field of view");
    }
    for (std::size_t i = 0; i < disks_.size(); ++i) {
        for (std::size_t j = i + 1; j < disks_.size(); ++j) {
            const double dist = norm(disks_[i].center - disks_[j].center);
            const double gap = dist - (disks_[i].radius + disks_[j].radius);
            std::ostringstream what;
            what << "disks " << i << " and " << j;
            if (!(gap > 0.0))
                fail_validation("phantom.disjointness", what.str() + " overlap or touch");
            if (gap < kNearContactGap * dist)
                fail_validation("phantom.near_contact",
                                what.str() + " are so close that their internal tangents coincide");
        }
    }
}

LineCoord LineCoord::canonical() const {
    double a = wrap_two_pi(alpha);
    double q = p;
    if (a >= std::numbers::pi) {
        a -= std::numbers::pi;
        q = -q;
    }
    return {a, q};
}

std::string case_tag_name(CaseTag tag) {
    switch (tag) {
    case CaseTag::PlusPlus: return "++";
    case CaseTag::MinusMinus: return "--";
    case CaseTag::PlusMinus: return "+-";
    }
    return "?";
}

bool is_external(CaseTag tag) { return tag != CaseTag::PlusMinus; }

std::pair<double, double> disk_tangent_offsets(const Disk& disk, double alpha) {
    const double c = dot(unit_normal(alpha), disk.center);
    return {c - disk.radius, c + disk.radius};
}

namespace {

TangentLine make_tangent(const Disk& d1, const Disk& d2, std::size_t i, std::size_t j,
                         double alpha, int s1, int s2) {
    double p = dot(unit_normal(alpha), d1.center) - s1 * d1.radius;

    // One Newton step on the two tangency residuals.
    const Vec2 n = unit_normal(alpha);
    const Vec2 t = unit_perp(alpha);
    const double r1 = dot(n, d1.center) - p - s1 * d1.radius;
    const double r2 = dot(n, d2.center) - p - s2 * d2.radius;
    const double t1 = dot(t, d1.center);
    const double t2 = dot(t, d2.center);
    const double da = -(r1 - r2) / (t1 - t2);
    alpha += da;
    p += t1 * da + r1;

    LineCoord raw{alpha, p};
    LineCoord canon = raw.canonical();
    // Flipping the orientation flips the side signs.
    if (wrap_two_pi(alpha) >= std::numbers::pi) {
        s1 = -s1;
        s2 = -s2;
    }

    TangentLine line;
    line.coord = canon;
    line.disk_indices = {i, j};
    line.side_signs = {s1, s2};
    const Vec2 cn = canon.normal();
    const Vec2 cp = canon.perp();
    line.tangency_points = {d1.center - (dot(cn, d1.center) - canon.p) * cn,
                            d2.center - (dot(cn, d2.center) - canon.p) * cn};
    line.p_prime = {dot(cp, d1.center), dot(cp, d2.center)};
    if (s1 != s2)
        line.case_tag = CaseTag::PlusMinus;
    else
        line.case_tag = s1 > 0 ? CaseTag::PlusPlus : CaseTag::MinusMinus;
    return line;
}

} // namespace

std::vector<TangentLine> enumerate_double_tangents(const Phantom& phantom) {
    if (phantom.size() < 2)
        fail_validation("geometry.too_few_disks", "double tangents need at least two disks");
    std::vector<TangentLine> lines;
    for (std::size_t i = 0; i < phantom.size(); ++i) {
        for (std::size_t j = i + 1; j < phantom.size(); ++j) {
            const Disk& a = phantom.disk(i);
            const Disk& b = phantom.disk(j);
            const Vec2 delta = a.center - b.center;
            const double dist = norm(delta);
            if (!(dist > a.radius + b.radius))
                fail_validation("phantom.disjointness", "tangent enumeration needs disjoint disks");
            const double phi = std::atan2(delta.y, delta.x);
            // The normal satisfies n.(c_a - c_b) = s1 R_a - s2 R_b.
            for (const auto& [s1, s2] : {std::pair{1, 1}, std::pair{1, -1}}) {
                const double q = (s1 * a.radius - s2 * b.radius) / dist;
                const double spread = std::acos(std::clamp(q, -1.0, 1.0));
                for (const double alpha : {phi + spread, phi - spread})
                    lines.push_back(make_tangent(a, b, i, j, alpha, s1, s2));
            }
        }
    }
    std::sort(lines.begin(), lines.end(), [](const TangentLine& l, const TangentLine& r) {
        if (l.disk_indices != r.disk_indices) return l.disk_indices < r.disk_indices;
        return l.coord.alpha < r.coord.alpha;
    });
    return lines;
}

Vec2 point_on_tangent(const TangentLine& line, double nu) {
    const auto& [x1, x2] = line.tangency_points;
    return x1 + nu * (x2 - x1);
}

double chord_length(const Disk& disk, const LineCoord& line) {
    const double d = line.p - dot(line.normal(), disk.center);
    if (!(std::abs(d) < disk.radius)) return 0.0;
    // Factored form keeps relative accuracy close to tangency.
    return 2.0 * std::sqrt((disk.radius - d) * (disk.radius + d));
}

TangentLine swap_labels(const TangentLine& line) {
    TangentLine out = line;
    std::swap(out.disk_indices.first, out.disk_indices.second);
    std::swap(out.tangency_points.first, out.tangency_points.second);
    std::swap(out.side_signs.first, out.side_signs.second);
    std::swap(out.p_prime.first, out.p_prime.second);
    return out;
}

Phantom paper_phantom() {
    return Phantom({Disk{{-1.8, -2.0}, 1.8, 1.0, 0.0}, Disk{{2.1, 2.2}, 1.7, 0.0, 1.0}}, 6.0);
}

} // namespace bhct

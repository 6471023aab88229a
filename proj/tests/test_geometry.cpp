#include "bhct/error.hpp"
#include "bhct/geometry.hpp"
#include "bhct/sinogram.hpp"
#include "bhct/verify.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <numbers>
#include <random>

using namespace bhct;
using doctest::Approx;

namespace {

double line_distance(const LineCoord& l, Vec2 x) { return std::abs(dot(l.normal(), x) - l.p); }

// Tangent lines by root finding: for each alpha place the line tangent to disk a with side sign
// s1, then locate zeros of disk b's tangency residual by scanning and bisection.
std::vector<LineCoord> brute_force_tangents(const Disk& a, const Disk& b, int s1, int s2) {
    auto residual = [&](double alpha) {
        const Vec2 n = unit_normal(alpha);
        const double p = dot(n, a.center) - s1 * a.radius;
        return dot(n, b.center) - p - s2 * b.radius;
    };
    std::vector<LineCoord> out;
    const int n = 20000;
    const double step = 2.0 * std::numbers::pi / n;
    for (int i = 0; i < n; ++i) {
        double lo = i * step, hi = (i + 1) * step;
        double flo = residual(lo), fhi = residual(hi);
        if (flo == 0.0) fhi = flo, hi = lo;
        if ((flo > 0) == (fhi > 0) && flo != 0.0) continue;
        for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
            const double mid = 0.5 * (lo + hi);
            const double fm = residual(mid);
            if ((fm > 0) == (flo > 0)) lo = mid, flo = fm;
            else hi = mid;
        }
        const double alpha = 0.5 * (lo + hi);
        out.push_back(LineCoord{alpha, dot(unit_normal(alpha), a.center) - s1 * a.radius}.canonical());
    }
    return out;
}

bool same_line(const LineCoord& x, const LineCoord& y, double tol) {
    const LineCoord a = x.canonical(), b = y.canonical();
    double da = std::abs(a.alpha - b.alpha);
    if (da > std::numbers::pi / 2) {
        // Lines near alpha = 0 and alpha = pi are the same with p flipped.
        return std::abs(std::numbers::pi - da) < tol && std::abs(a.p + b.p) < tol;
    }
    return da < tol && std::abs(a.p - b.p) < tol;
}

} // namespace

TEST_CASE("disk_tangent_offsets") {
    auto [lo, hi] = disk_tangent_offsets(Disk{{0, 0}, 1.0}, 0.0);
    CHECK(lo == -1.0);
    CHECK(hi == 1.0);
    std::tie(lo, hi) = disk_tangent_offsets(Disk{{-1.8, -2.0}, 1.8}, 0.0);
    CHECK(lo == Approx(-3.6).epsilon(1e-15));
    CHECK(hi == Approx(0.0).epsilon(1e-15));
    std::tie(lo, hi) = disk_tangent_offsets(Disk{{2.1, 2.2}, 1.7}, std::numbers::pi / 2);
    CHECK(lo == Approx(0.5).epsilon(1e-14));
    CHECK(hi == Approx(3.9).epsilon(1e-14));
}

TEST_CASE("external tangents of two symmetric unit disks") {
    const Phantom ph({Disk{{-2, 0}, 1, 1, 0}, Disk{{2, 0}, 1, 1, 0}}, 4.0);
    const auto lines = enumerate_double_tangents(ph);
    REQUIRE(lines.size() == 4);
    int external = 0;
    for (const TangentLine& l : lines) {
        if (!is_external(l.case_tag)) continue;
        ++external;
        CHECK(l.coord.alpha == Approx(std::numbers::pi / 2).epsilon(1e-14));
        CHECK(std::abs(l.coord.p) == Approx(1.0).epsilon(1e-14));
        const double y = l.coord.p;
        CHECK(l.tangency_points.first.x == Approx(-2.0).epsilon(1e-14));
        CHECK(l.tangency_points.second.x == Approx(2.0).epsilon(1e-14));
        CHECK(l.tangency_points.first.y == Approx(y).epsilon(1e-14));
        CHECK(l.tangency_points.second.y == Approx(y).epsilon(1e-14));
    }
    CHECK(external == 2);
}

TEST_CASE("internal tangents of two symmetric unit disks match a root-finding oracle") {
    const Disk a{{-2, 0}, 1, 1, 0}, b{{2, 0}, 1, 1, 0};
    const Phantom ph({a, b}, 4.0);
    std::vector<LineCoord> oracle = brute_force_tangents(a, b, 1, -1);
    REQUIRE(oracle.size() == 2);
    int internal = 0;
    for (const TangentLine& l : enumerate_double_tangents(ph)) {
        if (l.case_tag != CaseTag::PlusMinus) continue;
        ++internal;
        // Through the origin at 30 degrees to the center line.
        CHECK(std::abs(l.coord.p) < 1e-14);
        CHECK(std::abs(std::cos(l.coord.alpha)) == Approx(0.5).epsilon(1e-13));
        bool found = false;
        for (const LineCoord& o : oracle) found = found || same_line(o, l.coord, 1e-10);
        CHECK(found);
        // Tangency points on opposite sides of the line.
        CHECK(l.side_signs.first == -l.side_signs.second);
    }
    CHECK(internal == 2);
}

TEST_CASE("reference phantom has two external and two internal double tangents") {
    const Phantom ph = paper_phantom();
    const auto lines = enumerate_double_tangents(ph);
    REQUIRE(lines.size() == 4);
    CHECK(norm(ph.disk(0).center - ph.disk(1).center) == Approx(5.7315).epsilon(1e-4));
    int ext = 0, inter = 0;
    for (const TangentLine& l : lines) {
        (is_external(l.case_tag) ? ext : inter)++;
        CHECK(l.coord.alpha >= 0.0);
        CHECK(l.coord.alpha < std::numbers::pi);
        const Disk& d1 = ph.disk(l.disk_indices.first);
        const Disk& d2 = ph.disk(l.disk_indices.second);
        const double tol = 1e-12 * ph.fov_radius();
        CHECK(std::abs(line_distance(l.coord, d1.center) - d1.radius) < tol);
        CHECK(std::abs(line_distance(l.coord, d2.center) - d2.radius) < tol);
        CHECK(line_distance(l.coord, l.tangency_points.first) < tol);
        CHECK(line_distance(l.coord, l.tangency_points.second) < tol);
        CHECK(std::abs(norm(l.tangency_points.first - d1.center) - d1.radius) < tol);
        CHECK(std::abs(norm(l.tangency_points.second - d2.center) - d2.radius) < tol);
        // P' from tangency point and from center agree.
        CHECK(l.p_prime.first == Approx(dot(l.coord.perp(), d1.center)).epsilon(1e-12));
        CHECK(l.p_prime.first == Approx(dot(l.coord.perp(), l.tangency_points.first)).epsilon(1e-12));
        CHECK(l.p_prime.first != l.p_prime.second);
        // Side sign is the side of the center.
        CHECK(l.side_signs.first == (dot(l.coord.normal(), d1.center) > l.coord.p ? 1 : -1));
        CHECK(l.side_signs.second == (dot(l.coord.normal(), d2.center) > l.coord.p ? 1 : -1));
        CHECK(is_external(l.case_tag) == (l.side_signs.first == l.side_signs.second));
    }
    CHECK(ext == 2);
    CHECK(inter == 2);
    for (std::size_t i = 1; i < lines.size(); ++i) CHECK(lines[i - 1].coord.alpha <= lines[i].coord.alpha);
}

TEST_CASE("double tangents rotate with the phantom") {
    const Phantom ph = paper_phantom();
    const auto base = enumerate_double_tangents(ph);
    for (const double theta : {0.37, 1.9, -2.6}) {
        const auto rot = enumerate_double_tangents(testing_support::rotated(ph, theta));
        REQUIRE(rot.size() == base.size());
        for (const TangentLine& l : base) {
            const LineCoord moved{l.coord.alpha + theta, l.coord.p};
            int hits = 0;
            for (const TangentLine& r : rot)
                if (same_line(moved, r.coord, 1e-12) && is_external(r.case_tag) == is_external(l.case_tag)) ++hits;
            CHECK(hits == 1);
        }
    }
}

TEST_CASE("point_on_tangent interpolates between tangency points") {
    TangentLine l;
    l.tangency_points = {{0, 1}, {4, 1}};
    CHECK(point_on_tangent(l, 0.0).x == 0.0);
    CHECK(point_on_tangent(l, 1.0).x == 4.0);
    const Vec2 x = point_on_tangent(l, 0.4);
    CHECK(x.x == Approx(1.6));
    CHECK(x.y == Approx(1.0));
}

TEST_CASE("chord_length") {
    const Disk unit{{0, 0}, 1.0, 1.0, 0.0};
    CHECK(chord_length(unit, {0.0, 0.0}) == 2.0);
    CHECK(chord_length(unit, {0.7, 1.0}) == 0.0);
    const Disk ball{{-1.8, -2.0}, 1.8, 1.0, 0.0};
    const double a = 0.9;
    CHECK(chord_length(ball, {a, dot(unit_normal(a), ball.center)}) == Approx(3.6).epsilon(1e-15));
}

TEST_CASE("chord_length converges to the midpoint-rule line integral") {
    // The midpoint oracle is first order at the two edge crossings, so its error bound
    // scales with the step; check the bound and first-order convergence on random lines.
    const Phantom ph({Disk{{0.3, -0.2}, 1.0, 1.0, 0.0}}, 2.0);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> ua(0, std::numbers::pi), up(-1.3, 1.1);
    double worst_coarse = 0.0, worst_fine = 0.0;
    for (int i = 0; i < 100; ++i) {
        const LineCoord l{ua(rng), up(rng)};
        const double exact = chord_length(ph.disk(0), l);
        worst_coarse = std::max(worst_coarse, std::abs(line_integral_oracle(ph, l, Basis::One, 1e-3) - exact));
        worst_fine = std::max(worst_fine, std::abs(line_integral_oracle(ph, l, Basis::One, 1e-4) - exact));
    }
    CHECK(worst_coarse < 5e-3);
    CHECK(worst_fine < 5e-4);
    CHECK(worst_fine < 0.3 * worst_coarse);
}

TEST_CASE("chord edge law recovers 2 sqrt(2R)") {
    for (const double r : {0.5, 1.0, 1.8}) {
        const CheckResult c = check_chord_edge_law(Disk{{0.2, -0.1}, r, 1, 0}, 0.7);
        CHECK_MESSAGE(c.passed, c.detail);
    }
}

TEST_CASE("phantom validation") {
    auto code_of = [](auto&& f) {
        try {
            f();
        } catch (const Error& e) {
            return e.code();
        }
        return std::string("none");
    };
    CHECK(code_of([] { Phantom({Disk{{0, 0}, 1}, Disk{{1.5, 0}, 1}}, 5); }) == "phantom.disjointness");
    CHECK(code_of([] { Phantom({Disk{{0, 0}, 1}, Disk{{2.0, 0}, 1}}, 5); }) == "phantom.disjointness");
    CHECK(code_of([] { Phantom({Disk{{0, 0}, 1}, Disk{{2.0 + 1e-12, 0}, 1}}, 5); }) == "phantom.near_contact");
    CHECK(code_of([] { Phantom({Disk{{4.5, 0}, 1}}, 5); }) == "phantom.fov");
    CHECK(code_of([] { Phantom({Disk{{0, 0}, -1}}, 5); }) == "phantom.radius");
    CHECK(code_of([] { enumerate_double_tangents(Phantom({Disk{{0, 0}, 1}}, 5)); }) == "geometry.too_few_disks");
}

TEST_CASE("swap_labels exchanges the tangency roles") {
    const auto lines = enumerate_double_tangents(paper_phantom());
    for (const TangentLine& l : lines) {
        const TangentLine s = swap_labels(l);
        CHECK(s.disk_indices.first == l.disk_indices.second);
        CHECK(s.tangency_points.first.x == l.tangency_points.second.x);
        CHECK(s.side_signs.first == l.side_signs.second);
        CHECK(s.case_tag == l.case_tag);
        const Vec2 a = point_on_tangent(l, 0.3), b = point_on_tangent(s, 0.7);
        CHECK(norm(a - b) < 1e-14);
    }
}

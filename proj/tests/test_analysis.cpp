#include "bhct/analysis.hpp"
#include "bhct/error.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace bhct;
using doctest::Approx;

namespace {

double hlog(double h) { return h == 0.0 ? 0.0 : h * std::log(std::abs(h)); }

Profile synthetic(double a0, double a1, double a2, double a3, std::size_t n = 1001, double hw = 0.25) {
    Profile p;
    p.half_width = hw;
    p.h_values = symmetric_offsets(hw, n);
    for (const double h : p.h_values) p.samples.push_back(a0 + a1 * h + a2 * std::abs(h) + a3 * hlog(h));
    return p;
}

const TangentLine& line_with_tag(const std::vector<TangentLine>& lines, const std::string& tag) {
    for (const TangentLine& l : lines)
        if (case_tag_name(l.case_tag) == tag) return l;
    throw std::runtime_error("no line with tag " + tag);
}

} // namespace

TEST_CASE("symmetric offsets") {
    const auto h = symmetric_offsets(0.25, 5);
    REQUIRE(h.size() == 5);
    CHECK(h[0] == -0.25);
    CHECK(h[2] == 0.0);
    CHECK(h[4] == 0.25);
    const auto many = symmetric_offsets(0.25, 1001);
    for (std::size_t i = 0; i < many.size(); ++i) {
        CHECK(many[i] == -many[many.size() - 1 - i]);
        if (i) CHECK(many[i] > many[i - 1]);
    }
}

TEST_CASE("extract_profile") {
    const Phantom ph = paper_phantom();
    const auto lines = enumerate_double_tangents(ph);
    const TangentLine& l1 = line_with_tag(lines, "++");
    const StreakFrame frame = streak_frame(l1);

    ImageGrid constant(201, 6.0);
    for (double& v : constant.values) v = 0.75;
    const Profile c = extract_profile(constant, l1, 0.4, 0.25, 1001);
    for (const double v : c.samples) CHECK(v == Approx(0.75).epsilon(1e-15));
    CHECK(c.h_values.size() == 1001);
    CHECK(c.h_values[500] == 0.0);
    CHECK(norm(c.x0 - point_on_tangent(l1, 0.4)) == 0.0);
    CHECK(dot(c.direction, frame.normal) == Approx(1.0));

    ImageGrid ramp(201, 6.0);
    for (std::size_t r = 0; r < ramp.n; ++r)
        for (std::size_t col = 0; col < ramp.n; ++col) ramp.at(r, col) = dot(frame.normal, ramp.pixel_center(r, col));
    const Profile lin = extract_profile(ramp, l1, 1.3, 0.25, 101);
    const double offset = dot(frame.normal, lin.x0);
    for (std::size_t i = 0; i < lin.samples.size(); ++i)
        CHECK(lin.samples[i] == Approx(offset + lin.h_values[i]).epsilon(1e-12));

    try {
        extract_profile(constant, l1, 40.0, 0.25, 101);
        FAIL("expected out-of-FOV");
    } catch (const Error& e) {
        CHECK(e.code() == "profile.out_of_fov");
        CHECK(std::string(e.what()).find("h=-0.25") != std::string::npos);
    }
    try {
        extract_profile(constant, l1, 0.4, 0.25, 100);
        FAIL("expected sample-count error");
    } catch (const Error& e) {
        CHECK(e.code() == "profile.samples");
    }
}

TEST_CASE("fit_profile recovers exact basis combinations") {
    {
        const ProfileFit f = fit_profile(synthetic(0, 0, 2, 0), 0.0);
        CHECK(std::abs(f.a0) < 1e-10);
        CHECK(std::abs(f.a1) < 1e-10);
        CHECK(std::abs(f.a2 - 2.0) < 1e-10);
        CHECK(std::abs(f.a3) < 1e-10);
        CHECK(f.dominant == Shape::AbsH);
        CHECK(f.dominant_sign == 1);
        CHECK(f.n_used == 1000); // h = 0 is never part of the fit window
    }
    {
        const ProfileFit f = fit_profile(synthetic(0, 0, 0, 1), 0.0);
        CHECK(std::abs(f.a0) < 1e-10);
        CHECK(std::abs(f.a1) < 1e-10);
        CHECK(std::abs(f.a2) < 1e-10);
        CHECK(std::abs(f.a3 - 1.0) < 1e-10);
        CHECK(f.dominant == Shape::HLogH);
    }
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int k = 0; k < 50; ++k) {
        const double c[4] = {u(rng), u(rng), u(rng), u(rng)};
        const ProfileFit f = fit_profile(synthetic(c[0], c[1], c[2], c[3]), 0.03);
        CHECK(std::abs(f.a0 - c[0]) < 1e-10);
        CHECK(std::abs(f.a1 - c[1]) < 1e-10);
        CHECK(std::abs(f.a2 - c[2]) < 1e-10);
        CHECK(std::abs(f.a3 - c[3]) < 1e-10);
        CHECK(f.residual_rms >= 0.0);
        CHECK(f.residual_rms < 1e-12);
        CHECK(f.exclusion_radius == 0.03);
    }
}

TEST_CASE("fit_profile under noise") {
    Profile p = synthetic(0.3, 0.1, 0.0, 1.0);
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> noise(-1e-4, 1e-4);
    for (double& v : p.samples) v += noise(rng);
    const ProfileFit f = fit_profile(p, 0.03);
    CHECK(f.a3 == Approx(1.0).epsilon(0.01));
    CHECK(f.dominant == Shape::HLogH);
    CHECK(f.dominant_sign == 1);
    CHECK(f.residual_rms < 1e-4);
}

TEST_CASE("fit_profile is equivariant") {
    const Profile p = synthetic(0.02, -0.3, 0.4, -0.15);
    Profile noisy = p;
    std::mt19937_64 rng(9);
    std::normal_distribution<double> noise(0.0, 1e-3);
    for (double& v : noisy.samples) v += noise(rng);
    const ProfileFit base = fit_profile(noisy, 0.03);

    Profile scaled = noisy;
    for (double& v : scaled.samples) v *= -2.5;
    const ProfileFit s = fit_profile(scaled, 0.03);
    CHECK(s.a0 == Approx(-2.5 * base.a0).epsilon(1e-10));
    CHECK(s.a1 == Approx(-2.5 * base.a1).epsilon(1e-10));
    CHECK(s.a2 == Approx(-2.5 * base.a2).epsilon(1e-10));
    CHECK(s.a3 == Approx(-2.5 * base.a3).epsilon(1e-10));

    Profile tilted = noisy;
    for (std::size_t i = 0; i < tilted.samples.size(); ++i) tilted.samples[i] += 0.8 * tilted.h_values[i];
    const ProfileFit t = fit_profile(tilted, 0.03);
    CHECK(std::abs(t.a0 - base.a0) < 1e-12);
    CHECK(t.a1 == Approx(base.a1 + 0.8).epsilon(1e-12));
    CHECK(std::abs(t.a2 - base.a2) < 1e-11);
    CHECK(std::abs(t.a3 - base.a3) < 1e-11);
}

TEST_CASE("fit_profile dominance and errors") {
    // Comparable energies in both singular components.
    const Profile mixed = synthetic(0.0, 0.0, 1.0, -1.0);
    const ProfileFit m = fit_profile(mixed, 0.03);
    CHECK(m.energy_abs > 0.0);
    CHECK(m.energy_hlog > 0.0);
    CHECK(m.dominant == (m.energy_hlog > 3 * m.energy_abs ? Shape::HLogH
                         : m.energy_abs > 3 * m.energy_hlog ? Shape::AbsH
                                                             : Shape::Mixed));
    // Balance the two energies exactly so neither side reaches the 3x threshold.
    double e_abs = 0.0, e_hlog = 0.0;
    for (const double h : symmetric_offsets(0.25, 1001))
        if (std::abs(h) > 0.03) {
            e_abs += h * h;
            e_hlog += hlog(h) * hlog(h);
        }
    const ProfileFit m2 = fit_profile(synthetic(0.0, 0.0, std::sqrt(e_hlog / e_abs), -1.0), 0.03);
    CHECK(m2.energy_abs == Approx(m2.energy_hlog).epsilon(1e-9));
    CHECK(m2.dominant == Shape::Mixed);
    CHECK(m2.dominant_sign == 0);

    CHECK_THROWS_AS(fit_profile(synthetic(0, 0, 1, 0, 21), 0.24), Error);
    try {
        fit_profile(synthetic(0, 0, 1, 0), -1.0);
        FAIL("expected exclusion error");
    } catch (const Error& e) {
        CHECK(e.code() == "fit.exclusion");
    }

    // One-sided offsets make |h| and h identical columns.
    Profile one_sided;
    for (int i = 1; i <= 20; ++i) {
        one_sided.h_values.push_back(0.01 * i);
        one_sided.samples.push_back(std::sin(0.1 * i));
    }
    one_sided.half_width = 0.2;
    try {
        fit_profile(one_sided, 0.0);
        FAIL("expected rank error");
    } catch (const Error& e) {
        CHECK(e.code() == "fit.rank");
        CHECK(e.kind() == ErrorKind::Numeric);
    }
}

TEST_CASE("compare and sign patterns") {
    const Phantom ph = paper_phantom();
    const SpectralModel m = paper_spectral_model(64);
    const auto lines = enumerate_double_tangents(ph);
    const TangentLine& l1 = line_with_tag(lines, "++");
    const TangentLine& l2 = line_with_tag(lines, "+-");

    const StreakPrediction mid = predict_profile(l1, 0.4, m, ph);
    const ProfileFit hfit = fit_profile(synthetic(0.1, 0.0, 0.0, 3.0 * mid.coef_hlog), 0.03);
    const Comparison c = compare(hfit, mid);
    CHECK(c.shape_match);
    CHECK(c.sign_agrees);
    CHECK(c.amplitude_ratio == Approx(3.0).epsilon(1e-9));

    const ProfileFit flipped = fit_profile(synthetic(0.1, 0.0, 0.0, -0.5 * mid.coef_hlog), 0.03);
    CHECK_FALSE(compare(flipped, mid).sign_agrees);
    CHECK(compare(flipped, mid).amplitude_ratio == Approx(-0.5).epsilon(1e-9));

    const StreakPrediction outer = predict_profile(l1, 1.3, m, ph);
    const Comparison wrong = compare(hfit, outer);
    CHECK_FALSE(wrong.shape_match);

    const ProfileFit pos_abs = fit_profile(synthetic(0, 0, 0.02, 0), 0.03);
    const ProfileFit neg_abs = fit_profile(synthetic(0, 0, -0.02, 0), 0.03);
    const ProfileFit pos_log = fit_profile(synthetic(0, 0, 0, 0.05), 0.03);
    const ProfileFit neg_log = fit_profile(synthetic(0, 0, 0, -0.05), 0.03);
    CHECK(sign_pattern_match(l1.case_tag, pos_abs, pos_abs));
    CHECK_FALSE(sign_pattern_match(l1.case_tag, pos_abs, neg_abs));
    CHECK_FALSE(sign_pattern_match(l1.case_tag, pos_log, pos_log));
    CHECK(sign_pattern_match(l2.case_tag, pos_log, neg_log));
    CHECK_FALSE(sign_pattern_match(l2.case_tag, neg_log, neg_log));
    CHECK_FALSE(sign_pattern_match(l2.case_tag, pos_abs, neg_abs));

    CHECK(comparison_table_row("L1", 0.4, hfit, c).find("L1") != std::string::npos);
    CHECK(!comparison_table_header().empty());
}

TEST_CASE("cupping metric") {
    const Disk disk{{0.5, -0.4}, 1.5, 1.0, 0.0};
    ImageGrid flat(301, 3.0);
    for (std::size_t r = 0; r < flat.n; ++r)
        for (std::size_t c = 0; c < flat.n; ++c)
            flat.at(r, c) = norm(flat.pixel_center(r, c) - disk.center) < disk.radius ? 1.2 : 0.0;
    CHECK(std::abs(cupping_metric(flat, disk)) < 0.012);

    ImageGrid cup = flat;
    for (std::size_t r = 0; r < cup.n; ++r)
        for (std::size_t c = 0; c < cup.n; ++c) {
            const double rr = norm(cup.pixel_center(r, c) - disk.center) / disk.radius;
            if (rr < 1.0) cup.at(r, c) = 1.0 + 0.1 * rr * rr;
        }
    const double expected_gap = 0.1 * (0.8 * 0.8 + 0.02 / 3.0) - 0.1 * 0.02; // approximate ring and core means
    CHECK(cupping_metric(cup, disk) > 0.0);
    CHECK(cupping_metric(cup, disk) == Approx(expected_gap).epsilon(0.05));
    CHECK_THROWS_AS(cupping_metric(cup, Disk{{2.5, 0}, 1.0, 1.0, 0.0}), Error);
}

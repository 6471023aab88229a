#include "bhct/commands.hpp"

#include "bhct/analysis.hpp"
#include "bhct/error.hpp"
#include "bhct/recon.hpp"
#include "bhct/streaks.hpp"
#include "bhct/verify.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <sstream>

namespace bhct {

namespace fs = std::filesystem;

namespace {

std::string out_path(const ExperimentConfig& cfg, const std::string& name) {
    return (fs::path(cfg.output_dir) / name).string();
}

void prepare_output(const ExperimentConfig& cfg) {
    std::error_code ec;
    fs::create_directories(cfg.output_dir, ec);
    if (ec) fail_io("io.mkdir", "cannot create output directory " + cfg.output_dir + ": " + ec.message());
    write_json_file(out_path(cfg, "effective_config.json"), effective_config_json(cfg));
}

std::string nu_tag(double nu) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", nu);
    return buf;
}

double default_water_t_max(const ExperimentConfig& cfg) {
    double dmax = 0.0;
    for (const Disk& d : cfg.phantom.disks()) dmax = std::max(dmax, d.density1);
    return 2.0 * cfg.grid.fov_radius * std::max(dmax, 1.0);
}

struct ProfilesOutcome {
    Json report = Json::array();
    std::string table;
    bool all_pass = true;
};

ProfilesOutcome evaluate_profiles(const ExperimentConfig& cfg, const ImageGrid& image) {
    ProfilesOutcome res;
    std::ostringstream table;
    table << comparison_table_header() << "\n";
    const std::vector<TangentLine> lines =
        cfg.phantom.size() >= 2 ? enumerate_double_tangents(cfg.phantom) : std::vector<TangentLine>{};
    if (cfg.wants("csv")) fs::create_directories(out_path(cfg, "profiles"));

    for (const ProfileRequest& req : cfg.profiles) {
        Json entry = {{"label", req.label}};
        try {
            const TangentLine& line = select_line(lines, req.line);
            entry["line"] = tangent_line_to_json(line);
            Json rows = Json::array();
            std::optional<ProfileFit> before, after;
            for (const double nu : req.nus) {
                Json row = {{"nu", nu}};
                try {
                    const StreakPrediction pred = predict_profile(line, nu, cfg.spectral, cfg.phantom);
                    const Profile prof = extract_profile(image, line, nu, req.half_width, req.n_samples);
                    const ProfileFit fit = fit_profile(prof, cfg.exclusion_for(req));
                    const Comparison cmp = compare(fit, pred);
                    if (cfg.wants("csv"))
                        write_profile_csv(out_path(cfg, "profiles/" + req.label + "_nu" + nu_tag(nu) + ".csv"), prof);
                    row["prediction"] = prediction_to_json(pred);
                    row["fit"] = fit_to_json(fit);
                    row["comparison"] = comparison_to_json(cmp);
                    table << comparison_table_row(req.label, nu, fit, cmp) << "\n";
                    if (!cmp.shape_match) res.all_pass = false;
                    if (nu < 0.0 && !before) before = fit;
                    if (nu > 1.0 && !after) after = fit;
                } catch (const Error& e) {
                    row["error"] = {{"code", e.code()}, {"message", e.what()}};
                    table << req.label << "  nu=" << nu << "  error " << e.code() << "\n";
                    res.all_pass = false;
                }
                rows.push_back(row);
            }
            entry["profiles"] = rows;
            if (before && after) {
                const bool ok = sign_pattern_match(line.case_tag, *before, *after);
                entry["sign_pattern_match"] = ok;
                table << req.label << "  outer sign pattern: " << (ok ? "match" : "MISMATCH") << "\n";
                if (!ok) res.all_pass = false;
            }
        } catch (const Error& e) {
            entry["error"] = {{"code", e.code()}, {"message", e.what()}};
            table << req.label << "  error " << e.code() << "\n";
            res.all_pass = false;
        }
        res.report.push_back(entry);
    }
    res.table = table.str();
    return res;
}

void write_profiles_outputs(const ExperimentConfig& cfg, const ProfilesOutcome& res) {
    if (cfg.wants("json")) write_json_file(out_path(cfg, "comparison.json"), res.report);
    write_text_file(out_path(cfg, "comparison.txt"), res.table);
}

ImageGrid reconstruct_from(const ExperimentConfig& cfg, Sinogram sino) {
    if (!(sino.grid == cfg.grid))
        fail_validation("recon.grid_mismatch", "sinogram grid does not match the configured grid");
    if (cfg.water.enabled) {
        const WaterModel w = build_water_model(basis1_only(cfg.spectral),
                                               cfg.water.t_max.value_or(default_water_t_max(cfg)),
                                               cfg.water.n_table);
        sino = water_precorrect(sino, w);
    }
    return fbp(sino, build_filter(cfg.grid, cfg.epsilon), cfg.image_n);
}

void write_line_profile(const std::string& path, const ImageGrid& image, Vec2 origin, Vec2 dir) {
    const double r = image.fov_radius * 0.999;
    // Extent of the chord through the FOV along dir.
    const double b = dot(origin, dir);
    const double c = dot(origin, origin) - r * r;
    const double disc = std::sqrt(std::max(0.0, b * b - c));
    const double s0 = -b - disc, s1 = -b + disc;
    std::ostringstream s;
    s.precision(17);
    s << "s,x,y,value\n";
    const std::size_t n = 2001;
    for (std::size_t i = 0; i < n; ++i) {
        const double t = s0 + (s1 - s0) * double(i) / double(n - 1);
        const Vec2 x = origin + t * dir;
        s << t << "," << x.x << "," << x.y << "," << sample_image(image, x) << "\n";
    }
    write_text_file(path, s.str());
}

} // namespace

int cmd_simulate(const ExperimentConfig& cfg, std::ostream& out) {
    prepare_output(cfg);
    const Sinogram sino = forward_polychromatic(cfg.phantom, cfg.spectral, cfg.grid);
    const std::string path = out_path(cfg, "sinogram.bin");
    std::ostringstream desc;
    desc << "after-logs data, " << cfg.spectral.size() << "-node spectrum";
    write_sinogram(path, sino, desc.str());
    const auto [mn, mx] = std::minmax_element(sino.values.begin(), sino.values.end());
    out << Json{{"command", "simulate"},
                {"sinogram", path},
                {"min", *mn},
                {"max", *mx},
                {"starvation", false},
                {"bytes", sino.values.size() * 8}}
               .dump()
        << "\n";
    return 0;
}

int cmd_reconstruct(const ExperimentConfig& cfg, const std::optional<std::string>& sinogram_path,
                    std::ostream& out) {
    prepare_output(cfg);
    const std::string in = sinogram_path.value_or(out_path(cfg, "sinogram.bin"));
    const ImageGrid image = reconstruct_from(cfg, read_sinogram(in));
    const std::string path = out_path(cfg, "image.bin");
    write_image(path, image, "filtered backprojection of " + in);
    if (cfg.wants("pgm")) write_pgm(out_path(cfg, "image.pgm"), image, cfg.wl, cfg.ww);
    Json cupping = Json::array();
    for (const Disk& d : cfg.phantom.disks()) cupping.push_back(cupping_metric(image, d));
    out << Json{{"command", "reconstruct"},
                {"image", path},
                {"wl", cfg.wl},
                {"ww", cfg.ww},
                {"water_precorrected", cfg.water.enabled},
                {"cupping", cupping}}
               .dump()
        << "\n";
    return 0;
}

int cmd_tangents(const ExperimentConfig& cfg, std::ostream& out) {
    prepare_output(cfg);
    const std::vector<TangentLine> lines = enumerate_double_tangents(cfg.phantom);
    // Requested offsets, or the three reference ones when no profile asks for any.
    std::vector<double> nus;
    for (const ProfileRequest& r : cfg.profiles)
        for (const double nu : r.nus)
            if (std::find(nus.begin(), nus.end(), nu) == nus.end()) nus.push_back(nu);
    if (nus.empty()) nus = {-0.4, 0.4, 1.3};
    std::sort(nus.begin(), nus.end());

    Json doc = Json::array();
    for (const TangentLine& l : lines) {
        Json preds = Json::array();
        for (const double nu : nus) {
            const StreakPrediction p = predict_profile(l, nu, cfg.spectral, cfg.phantom);
            Json j = prediction_to_json(p);
            j.erase("line");
            preds.push_back(j);
        }
        doc.push_back({{"line", tangent_line_to_json(l)}, {"predictions", preds}});
    }
    write_json_file(out_path(cfg, "tangents.json"), doc);
    out << doc.dump(2) << "\n";
    return 0;
}

int cmd_profiles(const ExperimentConfig& cfg, const std::optional<std::string>& image_path,
                 std::ostream& out) {
    prepare_output(cfg);
    const ImageGrid image = read_image(image_path.value_or(out_path(cfg, "image.bin")));
    const ProfilesOutcome res = evaluate_profiles(cfg, image);
    write_profiles_outputs(cfg, res);
    out << res.table;
    return res.all_pass ? 0 : 1;
}

int cmd_verify(const ExperimentConfig& cfg, std::ostream& out) {
    prepare_output(cfg);
    const std::vector<CheckResult> checks = run_verification(cfg);
    Json report = Json::array();
    bool ok = true;
    for (const CheckResult& c : checks) {
        report.push_back(check_to_json(c));
        ok = ok && c.passed;
    }
    write_json_file(out_path(cfg, "verify.json"), report);
    out << report.dump(2) << "\n";
    return ok ? 0 : 1;
}

int cmd_report(const ExperimentConfig& cfg, std::ostream& out) {
    prepare_output(cfg);
    std::ostringstream sink;
    cmd_simulate(cfg, sink);
    cmd_reconstruct(cfg, std::nullopt, sink);
    cmd_tangents(cfg, sink);
    const ImageGrid image = read_image(out_path(cfg, "image.bin"));

    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (std::size_t i = 0; i < image.values.size(); ++i)
        if (image.coverage[i]) {
            lo = std::min(lo, image.values[i]);
            hi = std::max(hi, image.values[i]);
        }
    if (hi > lo) write_pgm(out_path(cfg, "global_wide.pgm"), image, 0.5 * (lo + hi), hi - lo);
    write_pgm(out_path(cfg, "global_narrow.pgm"), image, cfg.wl, cfg.ww);

    Vec2 origin{0.0, 0.0}, dir{1.0, 0.0};
    if (cfg.phantom.size() >= 2) {
        const Vec2 d = cfg.phantom.disk(1).center - cfg.phantom.disk(0).center;
        dir = (1.0 / norm(d)) * d;
        origin = cfg.phantom.disk(0).center;
    }
    write_line_profile(out_path(cfg, "center_line_profile.csv"), image, origin, dir);

    const ProfilesOutcome res = evaluate_profiles(cfg, image);
    write_profiles_outputs(cfg, res);
    out << sink.str() << res.table;
    return res.all_pass ? 0 : 1;
}

int run_command(const std::string& name, const std::optional<std::string>& config_path,
                const Overrides& overrides, const std::optional<std::string>& input,
                std::ostream& out, std::ostream& err) {
    try {
        const ExperimentConfig cfg = load_config(config_path, overrides);
        if (cfg.threads > 0) omp_set_num_threads(cfg.threads);
        if (name == "simulate") return cmd_simulate(cfg, out);
        if (name == "reconstruct") return cmd_reconstruct(cfg, input, out);
        if (name == "tangents") return cmd_tangents(cfg, out);
        if (name == "profiles") return cmd_profiles(cfg, input, out);
        if (name == "verify") return cmd_verify(cfg, out);
        if (name == "report") return cmd_report(cfg, out);
        fail_validation("cli.command", "unknown command '" + name + "'");
    } catch (const Error& e) {
        err << Json{{"error", {{"code", e.code()}, {"kind", kind_name(e.kind())}, {"message", e.what()}}}}.dump()
            << "\n";
        return exit_code(e.kind());
    } catch (const fs::filesystem_error& e) {
        err << Json{{"error", {{"code", "io.filesystem"}, {"kind", "io"}, {"message", e.what()}}}}.dump() << "\n";
        return exit_code(ErrorKind::IO);
    }
}

} // namespace bhct

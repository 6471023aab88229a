#include "bhct/config.hpp"

#include "bhct/error.hpp"

#include <algorithm>
#include <filesystem>
#include <sstream>

namespace bhct {

namespace fs = std::filesystem;

namespace {

std::string resolve_path(const std::string& p, const std::string& base_dir) {
    fs::path path(p);
    if (path.is_relative() && !base_dir.empty()) path = fs::path(base_dir) / path;
    if (!fs::exists(path)) fail_io("config.path", "referenced file does not exist: " + path.string());
    return path.string();
}

template <class T>
T get_or(const Json& obj, const char* key, T fallback) {
    if (!obj.contains(key) || obj.at(key).is_null()) return fallback;
    try {
        return obj.at(key).get<T>();
    } catch (const Json::exception& e) {
        fail_validation("config.field", std::string("bad value for '") + key + "': " + e.what());
    }
}

void require_object(const Json& j, const char* what) {
    if (!j.is_object()) fail_validation("config.field", std::string("'") + what + "' must be an object");
}

double interpolate(const std::vector<double>& x, const std::vector<double>& y, double at) {
    if (x.size() == 1) return y[0];
    auto it = std::upper_bound(x.begin(), x.end(), at);
    std::size_t i = std::size_t(std::clamp<std::ptrdiff_t>(it - x.begin(), 1, std::ptrdiff_t(x.size()) - 1));
    const double t = (at - x[i - 1]) / (x[i] - x[i - 1]);
    return y[i - 1] + t * (y[i] - y[i - 1]);
}

Json inline_spectral(const Json& spec, const std::string& base_dir) {
    if (spec.is_string() && spec.get<std::string>() != "paper")
        return read_json_file(resolve_path(spec.get<std::string>(), base_dir));
    return spec;
}

std::vector<ProfileRequest> default_profiles() {
    ProfileRequest l1;
    l1.label = "L1";
    l1.line.case_tag = "++";
    ProfileRequest l2;
    l2.label = "L2";
    l2.line.case_tag = "+-";
    return {l1, l2};
}

} // namespace

bool ExperimentConfig::wants(const std::string& format) const {
    return std::find(formats.begin(), formats.end(), format) != formats.end();
}

SpectralModel resolve_spectral(const Json& spec, const std::string& base_dir) {
    const Json doc = inline_spectral(spec, base_dir);
    if (doc.is_string()) return paper_spectral_model(64);
    require_object(doc, "spectral");
    const std::string kind = get_or<std::string>(doc, "kind", doc.contains("nodes") && doc.at("nodes").is_array() ? "explicit" : "paper");
    if (kind == "paper") return paper_spectral_model(get_or<std::size_t>(doc, "nodes", 64));
    if (kind == "delta") {
        const double e0 = get_or<double>(doc, "energy", 0.5);
        if (doc.contains("mu1") || doc.contains("mu2"))
            return delta_spectral_model(e0, get_or<double>(doc, "mu1", 0.0), get_or<double>(doc, "mu2", 0.0),
                                        get_or<double>(doc, "e_max", 1.0));
        return paper_delta_model(e0);
    }
    if (kind == "restricted")
        return paper_restricted_model(get_or<double>(doc, "center", 0.5),
                                      get_or<double>(doc, "half_width", 0.5),
                                      get_or<std::size_t>(doc, "nodes", 64));
    if (kind == "explicit") return spectral_from_json(doc);
    fail_validation("config.spectral", "unknown spectral kind '" + kind + "'");
}

ExperimentConfig config_from_json(const Json& doc, const std::string& base_dir) {
    require_object(doc, "config");
    ExperimentConfig cfg;

    if (doc.contains("phantom")) {
        const Json& ph = doc.at("phantom");
        if (ph.is_string() && ph.get<std::string>() == "paper") {
            cfg.phantom = paper_phantom();
        } else if (ph.is_string()) {
            cfg.phantom = phantom_from_json(read_json_file(resolve_path(ph.get<std::string>(), base_dir)));
        } else {
            cfg.phantom = phantom_from_json(ph);
        }
        cfg.phantom_spec = phantom_to_json(cfg.phantom);
    }

    if (doc.contains("spectral")) {
        cfg.spectral_spec = inline_spectral(doc.at("spectral"), base_dir);
        cfg.spectral = resolve_spectral(cfg.spectral_spec, base_dir);
    }

    if (doc.contains("sinogram")) {
        const Json& s = doc.at("sinogram");
        require_object(s, "sinogram");
        cfg.grid.n_alpha = get_or<std::size_t>(s, "n_alpha", cfg.grid.n_alpha);
        cfg.grid.n_p = get_or<std::size_t>(s, "n_p", cfg.grid.n_p);
        cfg.grid.fov_radius = get_or<double>(s, "fov_radius", cfg.phantom.fov_radius());
    } else {
        cfg.grid.fov_radius = cfg.phantom.fov_radius();
    }
    cfg.grid.validate();
    if (cfg.grid.fov_radius != cfg.phantom.fov_radius())
        fail_validation("config.fov_mismatch", "sinogram fov_radius differs from the phantom's");

    if (doc.contains("filter")) {
        require_object(doc.at("filter"), "filter");
        cfg.epsilon = get_or<double>(doc.at("filter"), "epsilon", cfg.epsilon);
    }
    if (doc.contains("image")) {
        const Json& im = doc.at("image");
        require_object(im, "image");
        cfg.image_n = get_or<std::size_t>(im, "n", cfg.image_n);
        cfg.wl = get_or<double>(im, "wl", cfg.wl);
        cfg.ww = get_or<double>(im, "ww", cfg.ww);
    }
    if (cfg.image_n < 2) fail_validation("config.image", "image.n must be at least 2");
    if (!(cfg.ww > 0.0)) fail_validation("config.image", "image.ww must be positive");
    if (doc.contains("water")) {
        const Json& w = doc.at("water");
        require_object(w, "water");
        cfg.water.enabled = get_or<bool>(w, "enabled", false);
        if (w.contains("t_max") && !w.at("t_max").is_null()) cfg.water.t_max = get_or<double>(w, "t_max", 0.0);
        cfg.water.n_table = get_or<std::size_t>(w, "n_table", cfg.water.n_table);
    }

    if (doc.contains("profiles")) {
        const Json& list = doc.at("profiles");
        if (!list.is_array()) fail_validation("config.profiles", "'profiles' must be an array");
        for (std::size_t i = 0; i < list.size(); ++i) {
            const Json& p = list[i];
            require_object(p, "profiles[]");
            ProfileRequest r;
            r.label = get_or<std::string>(p, "label", "line" + std::to_string(i));
            const auto disks = get_or<std::vector<std::size_t>>(p, "disks", {0, 1});
            if (disks.size() != 2) fail_validation("config.profiles", "'disks' must name two disks");
            r.line.disk_a = disks[0];
            r.line.disk_b = disks[1];
            r.line.case_tag = get_or<std::string>(p, "case", "++");
            r.line.index = get_or<std::size_t>(p, "index", 0);
            r.nus = get_or<std::vector<double>>(p, "nu", r.nus);
            r.half_width = get_or<double>(p, "half_width", r.half_width);
            r.n_samples = get_or<std::size_t>(p, "n_samples", r.n_samples);
            if (p.contains("exclusion_radius") && !p.at("exclusion_radius").is_null())
                r.exclusion_radius = get_or<double>(p, "exclusion_radius", 0.0);
            cfg.profiles.push_back(r);
        }
    } else {
        cfg.profiles = default_profiles();
    }

    if (doc.contains("outputs")) {
        const Json& o = doc.at("outputs");
        require_object(o, "outputs");
        cfg.output_dir = get_or<std::string>(o, "directory", cfg.output_dir);
        cfg.formats = get_or<std::vector<std::string>>(o, "formats", cfg.formats);
    }
    cfg.seed = get_or<std::uint64_t>(doc, "seed", cfg.seed);
    cfg.threads = get_or<int>(doc, "threads", cfg.threads);
    if (doc.contains("verify")) {
        const Json& v = doc.at("verify");
        require_object(v, "verify");
        cfg.verify_lines = get_or<std::size_t>(v, "random_lines", cfg.verify_lines);
        cfg.verify_step = get_or<double>(v, "oracle_step", cfg.verify_step);
    }
    return cfg;
}

void apply_overrides(ExperimentConfig& cfg, const Overrides& o) {
    if (o.out) cfg.output_dir = *o.out;
    if (o.paper_scale) {
        cfg.grid.n_alpha = 10000;
        cfg.grid.n_p = 15001;
    }
    if (o.delta_energy) {
        const double e0 = *o.delta_energy;
        Json spec = {{"kind", "delta"}, {"energy", e0}};
        const Json& cur = cfg.spectral_spec;
        const bool paper_family =
            cur.is_string() || (cur.is_object() && cur.value("kind", "explicit") != "explicit" &&
                                !cur.contains("mu1"));
        if (!paper_family) {
            // Sampled attenuations are interpolated at e0.
            spec["mu1"] = interpolate(cfg.spectral.nodes(), cfg.spectral.mu1(), e0);
            spec["mu2"] = interpolate(cfg.spectral.nodes(), cfg.spectral.mu2(), e0);
            spec["e_max"] = cfg.spectral.e_max();
        }
        cfg.spectral_spec = spec;
        cfg.spectral = resolve_spectral(spec, "");
    }
    if (o.threads) cfg.threads = *o.threads;
    if (o.wl) cfg.wl = *o.wl;
    if (o.ww) {
        if (!(*o.ww > 0.0)) fail_validation("config.image", "window width must be positive");
        cfg.ww = *o.ww;
    }
    if (o.seed) cfg.seed = *o.seed;
}

ExperimentConfig load_config(const std::optional<std::string>& path, const Overrides& overrides) {
    ExperimentConfig cfg;
    if (path) {
        const Json doc = read_json_file(*path);
        cfg = config_from_json(doc, fs::path(*path).parent_path().string());
    } else {
        cfg = config_from_json(Json::object(), "");
    }
    apply_overrides(cfg, overrides);
    return cfg;
}

Json effective_config_json(const ExperimentConfig& cfg) {
    Json profiles = Json::array();
    for (const ProfileRequest& r : cfg.profiles) {
        profiles.push_back({{"label", r.label},
                            {"disks", {r.line.disk_a, r.line.disk_b}},
                            {"case", r.line.case_tag},
                            {"index", r.line.index},
                            {"nu", r.nus},
                            {"half_width", r.half_width},
                            {"n_samples", r.n_samples},
                            {"exclusion_radius", cfg.exclusion_for(r)}});
    }
    Json water = {{"enabled", cfg.water.enabled}, {"n_table", cfg.water.n_table}};
    water["t_max"] = cfg.water.t_max ? Json(*cfg.water.t_max) : Json(nullptr);
    return {{"phantom", phantom_to_json(cfg.phantom)},
            {"spectral", cfg.spectral_spec},
            {"sinogram", grid_to_json(cfg.grid)},
            {"filter", {{"epsilon", cfg.epsilon}}},
            {"image", {{"n", cfg.image_n}, {"wl", cfg.wl}, {"ww", cfg.ww}}},
            {"water", water},
            {"profiles", profiles},
            {"outputs", {{"directory", cfg.output_dir}, {"formats", cfg.formats}}},
            {"seed", cfg.seed},
            {"threads", cfg.threads},
            {"verify", {{"random_lines", cfg.verify_lines}, {"oracle_step", cfg.verify_step}}}};
}

const TangentLine& select_line(const std::vector<TangentLine>& lines, const LineSelector& sel) {
    std::size_t seen = 0;
    for (const TangentLine& l : lines) {
        const auto [a, b] = l.disk_indices;
        const bool pair = (a == sel.disk_a && b == sel.disk_b) || (a == sel.disk_b && b == sel.disk_a);
        if (!pair) continue;
        const std::string tag = case_tag_name(l.case_tag);
        const bool match = sel.case_tag == tag || (sel.case_tag == "external" && is_external(l.case_tag));
        if (match && seen++ == sel.index) return l;
    }
    std::ostringstream msg;
    msg << "no tangent line for disks (" << sel.disk_a << ", " << sel.disk_b << ") with case '"
        << sel.case_tag << "' and index " << sel.index;
    fail_validation("config.line_selector", msg.str());
}

} // namespace bhct

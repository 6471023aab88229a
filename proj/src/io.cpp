#include "bhct/io.hpp"

#include "bhct/error.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace bhct {

namespace {

static_assert(sizeof(double) == 8);

std::uint64_t to_little(std::uint64_t v) {
    if constexpr (std::endian::native == std::endian::little) {
        return v;
    } else {
        std::uint64_t r = 0;
        for (int i = 0; i < 8; ++i) r |= ((v >> (8 * i)) & 0xffu) << (8 * (7 - i));
        return r;
    }
}

void write_doubles(const std::string& path, const std::vector<double>& values) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail_io("io.open", "cannot open " + path + " for writing");
    std::vector<unsigned char> bytes(values.size() * 8);
    for (std::size_t i = 0; i < values.size(); ++i) {
        const std::uint64_t v = to_little(std::bit_cast<std::uint64_t>(values[i]));
        std::memcpy(bytes.data() + 8 * i, &v, 8);
    }
    out.write(reinterpret_cast<const char*>(bytes.data()), std::streamsize(bytes.size()));
    if (!out) fail_io("io.write", "failed writing " + path);
}

std::vector<double> read_doubles(const std::string& path, std::size_t count) {
    std::ifstream in(path, std::ios::binary | std::ios::ate);
    if (!in) fail_io("io.open", "cannot open " + path);
    const auto size = std::size_t(in.tellg());
    if (size != count * 8) {
        std::ostringstream msg;
        msg << path << " holds " << size << " bytes, expected " << count * 8;
        fail_io("io.size", msg.str());
    }
    in.seekg(0);
    std::vector<unsigned char> bytes(size);
    in.read(reinterpret_cast<char*>(bytes.data()), std::streamsize(size));
    if (!in) fail_io("io.read", "failed reading " + path);
    std::vector<double> values(count);
    for (std::size_t i = 0; i < count; ++i) {
        std::uint64_t v;
        std::memcpy(&v, bytes.data() + 8 * i, 8);
        values[i] = std::bit_cast<double>(to_little(v));
    }
    return values;
}

template <class T>
T field(const Json& doc, const char* key, const char* code) {
    if (!doc.is_object() || !doc.contains(key)) fail_validation(code, std::string("missing field '") + key + "'");
    try {
        return doc.at(key).get<T>();
    } catch (const Json::exception& e) {
        fail_validation(code, std::string("bad field '") + key + "': " + e.what());
    }
}

Json vec_json(Vec2 v) { return Json::array({v.x, v.y}); }

} // namespace

Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail_io("io.open", "cannot open " + path);
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        fail_validation("config.parse", path + ": " + e.what());
    }
}

void write_json_file(const std::string& path, const Json& doc) {
    write_text_file(path, doc.dump(2) + "\n");
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) fail_io("io.open", "cannot open " + path + " for writing");
    out << text;
    if (!out) fail_io("io.write", "failed writing " + path);
}

Json phantom_to_json(const Phantom& phantom) {
    Json disks = Json::array();
    for (const Disk& d : phantom.disks())
        disks.push_back({{"center", vec_json(d.center)},
                         {"radius", d.radius},
                         {"density1", d.density1},
                         {"density2", d.density2}});
    return {{"fov_radius", phantom.fov_radius()}, {"disks", disks}};
}

Phantom phantom_from_json(const Json& doc) {
    const double fov = field<double>(doc, "fov_radius", "phantom.format");
    const Json disks = field<Json>(doc, "disks", "phantom.format");
    if (!disks.is_array()) fail_validation("phantom.format", "'disks' must be an array");
    std::vector<Disk> out;
    for (const Json& d : disks) {
        const auto c = field<std::vector<double>>(d, "center", "phantom.format");
        if (c.size() != 2) fail_validation("phantom.format", "disk center must have two entries");
        out.push_back(Disk{{c[0], c[1]},
                           field<double>(d, "radius", "phantom.format"),
                           d.value("density1", 0.0),
                           d.value("density2", 0.0)});
    }
    return Phantom(std::move(out), fov);
}

Json spectral_to_json(const SpectralModel& m) {
    return {{"e_max", m.e_max()}, {"nodes", m.nodes()}, {"weights", m.weights()},
            {"rho", m.rho()},     {"mu1", m.mu1()},     {"mu2", m.mu2()}};
}

SpectralModel spectral_from_json(const Json& doc) {
    const char* code = "spectral.format";
    return SpectralModel(field<double>(doc, "e_max", code),
                         field<std::vector<double>>(doc, "nodes", code),
                         field<std::vector<double>>(doc, "weights", code),
                         field<std::vector<double>>(doc, "rho", code),
                         field<std::vector<double>>(doc, "mu1", code),
                         field<std::vector<double>>(doc, "mu2", code));
}

Json grid_to_json(const SinogramGrid& grid) {
    return {{"n_alpha", grid.n_alpha}, {"n_p", grid.n_p}, {"fov_radius", grid.fov_radius}};
}

void write_sinogram(const std::string& path, const Sinogram& sino, const std::string& description) {
    write_doubles(path, sino.values);
    Json side = grid_to_json(sino.grid);
    side["description"] = description;
    write_json_file(path + ".json", side);
}

Sinogram read_sinogram(const std::string& path) {
    const Json side = read_json_file(path + ".json");
    SinogramGrid grid{field<std::size_t>(side, "n_alpha", "sinogram.format"),
                      field<std::size_t>(side, "n_p", "sinogram.format"),
                      field<double>(side, "fov_radius", "sinogram.format")};
    Sinogram s(grid);
    s.values = read_doubles(path, grid.size());
    return s;
}

void write_image(const std::string& path, const ImageGrid& image, const std::string& description) {
    write_doubles(path, image.values);
    std::size_t uncovered = 0;
    for (const auto c : image.coverage) uncovered += c == 0;
    write_json_file(path + ".json", {{"n", image.n},
                                     {"fov_radius", image.fov_radius},
                                     {"uncovered_pixels", uncovered},
                                     {"description", description}});
    std::ofstream mask(path + ".mask", std::ios::binary);
    if (!mask) fail_io("io.open", "cannot open " + path + ".mask for writing");
    mask.write(reinterpret_cast<const char*>(image.coverage.data()),
               std::streamsize(image.coverage.size()));
    if (!mask) fail_io("io.write", "failed writing " + path + ".mask");
}

ImageGrid read_image(const std::string& path) {
    const Json side = read_json_file(path + ".json");
    ImageGrid img(field<std::size_t>(side, "n", "image.format"),
                  field<double>(side, "fov_radius", "image.format"));
    img.values = read_doubles(path, img.n * img.n);
    std::ifstream mask(path + ".mask", std::ios::binary);
    if (mask) {
        mask.read(reinterpret_cast<char*>(img.coverage.data()), std::streamsize(img.coverage.size()));
        if (!mask) fail_io("io.read", "truncated coverage mask " + path + ".mask");
    }
    return img;
}

void write_pgm(const std::string& path, const ImageGrid& image, double wl, double ww) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail_io("io.open", "cannot open " + path + " for writing");
    out << "P5\n" << image.n << " " << image.n << "\n255\n";
    std::vector<unsigned char> row(image.n);
    for (std::size_t r = 0; r < image.n; ++r) {
        const std::size_t b = image.n - 1 - r;
        for (std::size_t a = 0; a < image.n; ++a) row[a] = display_level(image.at(b, a), wl, ww);
        out.write(reinterpret_cast<const char*>(row.data()), std::streamsize(row.size()));
    }
    if (!out) fail_io("io.write", "failed writing " + path);
}

Json tangent_line_to_json(const TangentLine& line) {
    return {{"alpha", line.coord.alpha},
            {"p", line.coord.p},
            {"disk_indices", {line.disk_indices.first, line.disk_indices.second}},
            {"tangency_points", {vec_json(line.tangency_points.first), vec_json(line.tangency_points.second)}},
            {"side_signs", {line.side_signs.first, line.side_signs.second}},
            {"case_tag", case_tag_name(line.case_tag)},
            {"p_prime", {line.p_prime.first, line.p_prime.second}}};
}

Json prediction_to_json(const StreakPrediction& p) {
    return {{"line", tangent_line_to_json(p.line)},
            {"nu", p.nu},
            {"x0", vec_json(p.x0)},
            {"direction", vec_json(p.direction)},
            {"kappa", kappa_name(p.kappa)},
            {"c0", p.c0},
            {"b_coeff", p.b_coeff},
            {"shape", shape_name(p.shape)},
            {"sign", p.sign},
            {"coef_abs", p.coef_abs},
            {"coef_hlog", p.coef_hlog}};
}

Json fit_to_json(const ProfileFit& f) {
    return {{"a0", f.a0},
            {"a1", f.a1},
            {"a2", f.a2},
            {"a3", f.a3},
            {"residual_rms", f.residual_rms},
            {"exclusion_radius", f.exclusion_radius},
            {"dominant", shape_name(f.dominant)},
            {"dominant_sign", f.dominant_sign},
            {"energy_abs", f.energy_abs},
            {"energy_hlog", f.energy_hlog},
            {"condition", f.condition},
            {"n_used", f.n_used}};
}

Json comparison_to_json(const Comparison& c) {
    return {{"predicted", shape_name(c.predicted)},
            {"fitted", shape_name(c.fitted)},
            {"shape_match", c.shape_match},
            {"sign_agrees", c.sign_agrees},
            {"amplitude_ratio", c.amplitude_ratio}};
}

void write_profile_csv(const std::string& path, const Profile& profile) {
    std::ostringstream s;
    s << "h,sample\n" << std::setprecision(17);
    for (std::size_t i = 0; i < profile.h_values.size(); ++i)
        s << profile.h_values[i] << "," << profile.samples[i] << "\n";
    write_text_file(path, s.str());
}

} // namespace bhct

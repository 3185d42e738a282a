#include "rstrade/surface_io.hpp"

#include <charconv>
#include <fstream>

#include "rstrade/errors.hpp"

namespace rstrade {

namespace {

constexpr const char* kSurfaceHeader = "t,p,v0,v1,v_neg1,u1,u_neg1";

void append_double(std::string& out, double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    out.append(buf, ptr);
}

double parse_field(const std::string& line, std::size_t& pos, long line_no, bool last) {
    const std::size_t end = last ? line.size() : line.find(',', pos);
    if (!last && end == std::string::npos)
        throw FormatError("expected 7 comma-separated fields", line_no);
    double value = 0.0;
    const char* first = line.data() + pos;
    const char* stop = line.data() + end;
    auto [ptr, ec] = std::from_chars(first, stop, value);
    if (ec != std::errc{} || ptr != stop)
        throw FormatError("field is not a valid number", line_no);
    pos = last ? end : end + 1;
    return value;
}

}  // namespace

std::filesystem::path metadata_path_for(const std::filesystem::path& csv_path) {
    std::filesystem::path p = csv_path;
    p.replace_extension(".meta.json");
    return p;
}

void write_surfaces_csv(const std::filesystem::path& path, const Surfaces& s) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("out", "cannot write " + path.string());

    std::string buf;
    buf.reserve(1 << 20);
    buf += kSurfaceHeader;
    buf += '\n';

    const Grid& g = s.grid;
    for (Index n = 0; n <= g.n_t; ++n) {
        const double t = g.time(n);
        for (Index i = 0; i < g.n_p; ++i) {
            append_double(buf, t);
            buf += ',';
            append_double(buf, g.node(i));
            buf += ',';
            append_double(buf, s.v0(i, n));
            buf += ',';
            append_double(buf, s.v1(i, n));
            buf += ',';
            append_double(buf, s.v_neg1(i, n));
            buf += ',';
            append_double(buf, s.v0(i, n) - s.v1(i, n));
            buf += ',';
            append_double(buf, s.v0(i, n) - s.v_neg1(i, n));
            buf += '\n';
            if (buf.size() > (1 << 20) - 256) {
                out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
                buf.clear();
            }
        }
    }
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
}

void write_surface_metadata(const std::filesystem::path& csv_path, const Surfaces& s,
                            const RunConfig& cfg, const nlohmann::json& diagnostics) {
    nlohmann::json meta{{"provenance", provenance_name(s.provenance)},
                        {"config_digest", config_digest(cfg)},
                        {"config", config_json(cfg)},
                        {"grid",
                         {{"p_lo", s.grid.p_lo},
                          {"p_hi", s.grid.p_hi},
                          {"n_p", s.grid.n_p},
                          {"n_t", s.grid.n_t},
                          {"eps", s.grid.eps},
                          {"h", s.grid.h},
                          {"dt", s.grid.dt},
                          {"T", s.grid.T}}},
                        {"penalty_eps", s.penalty_eps},
                        {"diagnostics", diagnostics}};
    std::ofstream out(metadata_path_for(csv_path), std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("out", "cannot write " + metadata_path_for(csv_path).string());
    out << meta.dump(2) << '\n';
}

LoadedSurfaces read_surfaces(const std::filesystem::path& csv_path) {
    const auto meta_path = metadata_path_for(csv_path);
    std::ifstream meta_in(meta_path);
    if (!meta_in)
        throw ConfigError("surfaces", "missing metadata sidecar " + meta_path.string());
    nlohmann::json meta;
    try {
        meta_in >> meta;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("surfaces", std::string("metadata is not valid JSON: ") + e.what());
    }

    LoadedSurfaces loaded;
    try {
        loaded.config = parse_config(meta.at("config"));
        loaded.config_digest = meta.at("config_digest").get<std::string>();
        loaded.metadata = meta;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("surfaces", std::string("metadata missing field: ") + e.what());
    }

    const Grid grid = grid_from(loaded.config);
    Surfaces s;
    s.grid = grid;
    s.provenance = provenance_from(meta.at("provenance").get<std::string>());
    s.penalty_eps = meta.at("penalty_eps").get<double>();
    s.v0 = ArrayXXd::Zero(grid.n_p, grid.n_t + 1);
    s.v1 = ArrayXXd::Zero(grid.n_p, grid.n_t + 1);
    s.v_neg1 = ArrayXXd::Zero(grid.n_p, grid.n_t + 1);

    std::ifstream in(csv_path, std::ios::binary);
    if (!in) throw ConfigError("surfaces", "cannot read " + csv_path.string());

    std::string line;
    long line_no = 1;
    if (!std::getline(in, line)) throw FormatError("empty surface file", line_no);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kSurfaceHeader) throw FormatError("unexpected header", line_no);

    for (Index n = 0; n <= grid.n_t; ++n) {
        for (Index i = 0; i < grid.n_p; ++i) {
            ++line_no;
            if (!std::getline(in, line))
                throw FormatError("unexpected end of file: expected "
                                      + std::to_string((grid.n_t + 1) * grid.n_p) + " data rows",
                                  line_no);
            if (!line.empty() && line.back() == '\r') line.pop_back();
            std::size_t pos = 0;
            parse_field(line, pos, line_no, false);  // t
            parse_field(line, pos, line_no, false);  // p
            s.v0(i, n) = parse_field(line, pos, line_no, false);
            s.v1(i, n) = parse_field(line, pos, line_no, false);
            s.v_neg1(i, n) = parse_field(line, pos, line_no, false);
            parse_field(line, pos, line_no, false);  // u1 (derived)
            parse_field(line, pos, line_no, true);   // u_neg1 (derived)
        }
    }
    ++line_no;
    if (std::getline(in, line) && !line.empty())
        throw FormatError("trailing data after the last expected row", line_no);

    loaded.surfaces = std::move(s);
    return loaded;
}

void write_boundaries_csv(const std::filesystem::path& path, const FreeBoundaries& fb,
                          double p_star_value) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("out", "cannot write " + path.string());
    std::string buf = "t,p_0_neg1,p_1_0,p_star,p_neg1_0,p_0_1\n";
    for (Index k = 0; k < fb.n_levels(); ++k) {
        append_double(buf, fb.t_values(k));
        buf += ',';
        append_double(buf, fb.p0neg1(k));
        buf += ',';
        append_double(buf, fb.p10(k));
        buf += ',';
        append_double(buf, p_star_value);
        buf += ',';
        append_double(buf, fb.pneg10(k));
        buf += ',';
        append_double(buf, fb.p01(k));
        buf += '\n';
    }
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
}

nlohmann::json property_report_json(const PropertyReport& report) {
    nlohmann::json checks = nlohmann::json::array();
    for (const auto& c : report.checks) {
        checks.push_back({{"name", c.name},
                          {"pass", c.pass},
                          {"margin", c.margin},
                          {"tolerance", c.tolerance}});
    }
    return nlohmann::json{{"checks", checks}, {"all_pass", report.all_pass()}};
}

nlohmann::json complementarity_report_json(const ComplementarityReport& report) {
    static const char* names[3] = {"v0", "v1", "v_neg1"};
    nlohmann::json per;
    for (int f = 0; f < 3; ++f) {
        per[names[f]] = {{"pde_residual_neg", report.pde_residual_neg[f]},
                         {"obstacle_violation", report.obstacle_violation[f]},
                         {"complementarity_product", report.complementarity_product[f]}};
    }
    return nlohmann::json{{"per_function", per},
                          {"max_pde_residual_neg", report.max_pde_residual_neg()},
                          {"max_obstacle_violation", report.max_obstacle_violation()},
                          {"max_complementarity_product", report.max_complementarity_product()},
                          {"tol", report.tol},
                          {"pass", report.pass()}};
}

}  // namespace rstrade

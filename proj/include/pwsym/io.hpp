#pragma once

// CSV and JSON emitters. Floats use the shortest decimal that round-trips
// (at most 17 significant digits), '.' as separator, '\n' line endings.

#include <pwsym/error.hpp>
#include <pwsym/geometry.hpp>
#include <pwsym/groupcase.hpp>
#include <pwsym/holo.hpp>
#include <pwsym/transform.hpp>

#include <json.hpp>

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <system_error>
#include <unistd.h>

namespace pwsym {

using Json = nlohmann::ordered_json;

inline std::string format_double(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return {buf, res.ptr};
}

inline Json to_json(const SpaceDescriptor& s) {
    return Json{{"name", s.name},
                {"kind", std::string(to_string(s.kind))},
                {"jacobi_a", s.jacobi_a},
                {"jacobi_b", s.jacobi_b},
                {"rho_c", s.rho_c},
                {"inj_radius_t", s.inj_radius_t},
                {"omega_radius_t", s.omega_radius_t}};
}

inline SpaceDescriptor space_from_json(const Json& j) {
    try {
        return {j.at("name").get<std::string>(),
                space_kind_from_string(j.at("kind").get<std::string>()),
                j.at("jacobi_a").get<double>(),
                j.at("jacobi_b").get<double>(),
                j.at("rho_c").get<double>(),
                j.at("inj_radius_t").get<double>(),
                j.at("omega_radius_t").get<double>()};
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("space descriptor: ") + e.what(), 0);
    }
}

inline Json to_json(const RadiusBounds& b) {
    return Json{{"r_forward_conservative", b.r_forward_conservative},
                {"r_forward_sharp", b.r_forward_sharp},
                {"r_unique", b.r_unique},
                {"inj_radius_t", b.inj_radius_t}};
}

inline Json to_json(const TypeFitReport& r) {
    return Json{{"r_hat", r.r_hat},
                {"window", Json::array({r.window_lo, r.window_hi})},
                {"slope_stderr", r.slope_stderr},
                {"envelope_used", r.envelope_used},
                {"zero_function", r.zero_function},
                {"naive_slope", r.naive_slope},
                {"samples_used", r.samples_used}};
}

inline Json to_json(const PWReport& r) {
    Json decay = Json::object();
    for (const auto& [k, c] : r.decay_constants) decay[std::to_string(k)] = c;
    return Json{{"type_fit", to_json(r.type_fit)},
                {"decay_constants", decay},
                {"symmetry_residual", r.symmetry_residual},
                {"symmetry_sign", r.symmetry_sign},
                {"claimed_r", r.claimed_r},
                {"tolerance_rel", r.tolerance_rel},
                {"tolerance_abs", r.tolerance_abs},
                {"symmetry_threshold", r.symmetry_threshold},
                {"coverage", r.coverage},
                {"verdict_for_r", r.verdict_for_r}};
}

inline Json to_json(const CarlsonReport& r) {
    return Json{{"max_lattice_value", r.max_lattice_value},
                {"symmetry_residual", r.symmetry_residual},
                {"type_fit", to_json(r.type_fit)},
                {"conclusion", r.conclusion}};
}

inline Json to_json(const SupportTransferReport& r) {
    return Json{{"measured_support", r.measured_support},
                {"claimed_r", r.claimed_r},
                {"grid_spacing", r.grid_spacing},
                {"skipped", r.skipped},
                {"holds", r.holds}};
}

/// Header `l,re,im,quad_err` (or `n,...` for group tables).
inline std::string coefficients_csv(const CoefficientTable& table, std::string_view index = "l") {
    std::string out;
    out.append(index).append(",re,im,quad_err\n");
    for (const auto& e : table.entries) {
        out += format_double(e.l) + ',' + format_double(e.value.real()) + ',' +
               format_double(e.value.imag()) + ',' + format_double(e.quad_err) + '\n';
    }
    return out;
}

inline std::string ray_csv(const RaySamples& ray) {
    std::string out = "sigma,re,im\n";
    for (std::size_t i = 0; i < ray.sigmas.size(); ++i)
        out += format_double(ray.sigmas[i]) + ',' + format_double(ray.values[i].real()) + ',' +
               format_double(ray.values[i].imag()) + '\n';
    return out;
}

inline std::string grid_csv(const GridValues& g) {
    std::string out = "t,re,im\n";
    for (std::size_t i = 0; i < g.t.size(); ++i)
        out += format_double(g.t[i]) + ',' + format_double(g.values[i].real()) + ',' +
               format_double(g.values[i].imag()) + '\n';
    return out;
}

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    return cells;
}

inline double parse_double(const std::string& s, std::size_t position) {
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw ParseError("not a number: '" + s + "'", position);
    return v;
}

} // namespace detail

/// Reads `sigma,re,im` rows into a ray.
inline RaySamples parse_ray_csv(std::string_view text, std::string space = {}) {
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t offset = 0;
    if (!std::getline(in, line) || line.rfind("sigma,re,im", 0) != 0)
        throw ParseError("expected header 'sigma,re,im'", 0);
    offset += line.size() + 1;
    RaySamples ray{std::move(space), 0.0, 1.0, {}, {}, false};
    while (std::getline(in, line)) {
        if (line.empty()) {
            offset += 1;
            continue;
        }
        const auto cells = detail::split_csv_line(line);
        if (cells.size() != 3) throw ParseError("expected 3 columns", offset);
        ray.sigmas.push_back(detail::parse_double(cells[0], offset));
        ray.values.emplace_back(detail::parse_double(cells[1], offset),
                                detail::parse_double(cells[2], offset));
        offset += line.size() + 1;
    }
    return ray;
}

/// Reads a sample file: either one value per line, or CSV with a header
/// whose second and third columns are re and im (first column ignored).
inline std::vector<Complex> parse_samples_text(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    std::vector<Complex> values;
    std::size_t offset = 0;
    bool first = true;
    while (std::getline(in, line)) {
        const std::size_t here = offset;
        offset += line.size() + 1;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        const auto cells = detail::split_csv_line(line);
        if (first) {
            first = false;
            double probe = 0.0;
            const auto r = std::from_chars(cells[0].data(), cells[0].data() + cells[0].size(), probe);
            if (r.ec != std::errc{}) continue; // header row
        }
        if (cells.size() == 1) {
            values.emplace_back(detail::parse_double(cells[0], here), 0.0);
        } else if (cells.size() == 3) {
            values.emplace_back(detail::parse_double(cells[1], here),
                                detail::parse_double(cells[2], here));
        } else {
            throw ParseError("expected 1 or 3 columns", here);
        }
    }
    return values;
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Writes through a temporary file in the same directory and renames it
/// into place.
inline void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
    auto tmp = path;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw Error("write failed for " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw Error("cannot rename into " + path.string() + ": " + ec.message());
    }
}

} // namespace pwsym

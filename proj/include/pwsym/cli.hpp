#pragma once

// Command-line front end. Every subcommand delegates to a library call and
// reports a single `key=value` summary line.
//
// Exit codes: 0 success, 1 usage error (bad flags, DSL, unknown space),
// 2 numeric failure.

#include <pwsym/error.hpp>
#include <pwsym/geometry.hpp>
#include <pwsym/groupcase.hpp>
#include <pwsym/holo.hpp>
#include <pwsym/io.hpp>
#include <pwsym/radial_function.hpp>
#include <pwsym/transform.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <cctype>
#include <filesystem>
#include <iostream>
#include <map>
#include <numbers>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace pwsym {

/// Invalid job options; maps to exit code 1.
class UsageError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "usage"; }
};

using ParsedFunction = std::variant<RadialFunction, ClassFunction>;

namespace detail {

class DslParser {
public:
    explicit DslParser(std::string_view text) : text_(text) {}

    ParsedFunction parse() {
        skip_space();
        const std::size_t name_pos = pos_;
        std::string name;
        while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
                                       text_[pos_] == '_'))
            name += text_[pos_++];
        if (name.empty()) throw ParseError("expected a function name", name_pos);
        skip_space();
        expect('(');
        ParsedFunction result = dispatch(name, name_pos);
        skip_space();
        if (pos_ != text_.size()) throw ParseError("unexpected trailing input", pos_);
        return result;
    }

private:
    ParsedFunction dispatch(const std::string& name, std::size_t name_pos) {
        if (name == "samples") return parse_samples();
        const auto args = parse_args();
        auto num = [&](const std::string& key) -> std::optional<std::pair<double, std::size_t>> {
            const auto it = args.find(key);
            if (it == args.end()) return std::nullopt;
            return it->second;
        };
        auto require = [&](const std::string& key) {
            auto v = num(key);
            if (!v) throw ParseError(name + " needs argument '" + key + "'", pos_);
            return *v;
        };
        auto check_keys = [&](std::initializer_list<std::string_view> allowed) {
            for (const auto& entry : args) {
                const auto& key = entry.first;
                bool ok = false;
                for (auto a : allowed) ok = ok || key == a;
                if (!ok) throw ParseError("unknown argument '" + key + "' for " + name,
                                          key_positions_.at(key));
            }
        };
        auto integer = [&](std::pair<double, std::size_t> v) {
            if (v.first != std::floor(v.first))
                throw ParseError("expected an integer", v.second);
            return static_cast<int>(v.first);
        };
        if (name == "bump") {
            check_keys({"r", "p"});
            const auto r = require("r");
            if (!(r.first > 0.0 && r.first < std::numbers::pi))
                throw RangeError("bump radius r=" + format_double(r.first) +
                                 " outside (0, pi)");
            const double p = num("p") ? num("p")->first : 1.0;
            if (!(p > 0.0)) throw RangeError("bump sharpness p=" + format_double(p) + " must be > 0");
            return bump(r.first, p);
        }
        if (name == "cospow") {
            check_keys({"r", "q"});
            const auto r = require("r");
            const int q = integer(require("q"));
            if (!(r.first > 0.0 && r.first < std::numbers::pi))
                throw RangeError("cospow radius r=" + format_double(r.first) + " outside (0, pi)");
            if (q < 1) throw RangeError("cospow power q=" + std::to_string(q) + " must be >= 1");
            return cospow(r.first, q);
        }
        if (name == "sph") {
            check_keys({"l"});
            const int l = integer(require("l"));
            if (l < 0) throw RangeError("sph degree l=" + std::to_string(l) + " must be >= 0");
            return poly_spherical(l);
        }
        if (name == "char") {
            check_keys({"n"});
            const int n = integer(require("n"));
            if (n < 0) throw RangeError("char degree n=" + std::to_string(n) + " must be >= 0");
            return character(n);
        }
        throw ParseError("unknown function '" + name + "'", name_pos);
    }

    ParsedFunction parse_samples() {
        const std::size_t start = pos_;
        const auto close = text_.rfind(')');
        if (close == std::string_view::npos || close < start)
            throw ParseError("expected ')'", text_.size());
        std::string path(text_.substr(start, close - start));
        while (!path.empty() && std::isspace(static_cast<unsigned char>(path.back()))) path.pop_back();
        while (!path.empty() && std::isspace(static_cast<unsigned char>(path.front())))
            path.erase(path.begin());
        if (path.empty()) throw ParseError("samples() needs a file path", start);
        pos_ = close + 1;
        std::string content;
        try {
            content = read_file(path);
        } catch (const Error& e) {
            throw UsageError(e.what());
        }
        auto values = parse_samples_text(content);
        if (values.size() < 2) throw ResolutionError("sample file " + path + " has fewer than 2 values");
        return samples(std::move(values));
    }

    std::map<std::string, std::size_t> key_positions_;

    std::map<std::string, std::pair<double, std::size_t>> parse_args() {
        std::map<std::string, std::pair<double, std::size_t>> args;
        skip_space();
        if (peek() == ')') {
            ++pos_;
            return args;
        }
        while (true) {
            skip_space();
            const std::size_t key_pos = pos_;
            std::string key;
            while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_])))
                key += text_[pos_++];
            if (key.empty()) throw ParseError("expected an argument name", key_pos);
            skip_space();
            expect('=');
            skip_space();
            const std::size_t value_pos = pos_;
            double value = 0.0;
            const auto res = std::from_chars(text_.data() + pos_, text_.data() + text_.size(), value);
            if (res.ec != std::errc{}) throw ParseError("expected a number", value_pos);
            pos_ = static_cast<std::size_t>(res.ptr - text_.data());
            if (!args.emplace(key, std::make_pair(value, value_pos)).second)
                throw ParseError("duplicate argument '" + key + "'", key_pos);
            key_positions_[key] = key_pos;
            skip_space();
            if (peek() == ',') {
                ++pos_;
                continue;
            }
            expect(')');
            return args;
        }
    }

    char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    void expect(char c) {
        if (peek() != c) throw ParseError(std::string("expected '") + c + "'", pos_);
        ++pos_;
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

} // namespace detail

/// Grammar: bump(r=<float>[,p=<float>]) | cospow(r=<float>,q=<int>) |
/// sph(l=<int>) | char(n=<int>) | samples(<path>).
inline ParsedFunction parse_function_dsl(std::string_view text) {
    return detail::DslParser(text).parse();
}

inline RadialFunction as_radial_function(const ParsedFunction& f) {
    if (const auto* r = std::get_if<RadialFunction>(&f)) return *r;
    throw UsageError("a radial function is required here, got " +
                     describe(std::get<ClassFunction>(f)));
}

/// Group commands read bump(r) as a bump in the conjugacy angle and
/// samples as values over [0, 2 pi].
inline ClassFunction as_class_function(const ParsedFunction& f) {
    if (const auto* c = std::get_if<ClassFunction>(&f)) return *c;
    const auto& r = std::get<RadialFunction>(f);
    if (const auto* b = std::get_if<Bump>(&r.form)) return bump_angle(b->r, b->p);
    if (const auto* s = std::get_if<Samples>(&r.form)) return angle_samples(s->values);
    throw UsageError("a class function is required here, got " + describe(r));
}

struct JobSpec {
    std::string command;
    std::string space = "s2";
    std::string function = "bump(r=1.0)";
    int l_max = 40;
    double sigma_max = 120.0;
    std::optional<double> r_claimed;
    int grid = 2048;
    std::string input;  // ray CSV for type-fit
    std::string output; // artifact path; empty = none
    std::string format = "csv";
};

inline const std::vector<std::string>& subcommands() {
    static const std::vector<std::string> names{
        "transform", "synthesize", "extend",    "type-fit",     "pw-check",
        "support",   "group-transform", "k-average", "carlson-demo", "bounds"};
    return names;
}

inline std::string subcommand_help(const std::string& name) {
    static const std::map<std::string, std::string> help{
        {"transform", "spherical transform on the lattice l = 0..l_max"},
        {"synthesize", "inverse series on a grid, with sup error against f"},
        {"extend", "extension sampled on the imaginary ray"},
        {"type-fit", "exponential type of a ray CSV"},
        {"pw-check", "Paley-Wiener membership report for a claimed radius"},
        {"support", "support radius measured from the ray"},
        {"group-transform", "SU(2) character coefficients n = 0..l_max"},
        {"k-average", "K-average of a class function and its support"},
        {"carlson-demo", "lattice-vanishing function of type pi"},
        {"bounds", "radius bounds of a catalog space"}};
    const auto it = help.find(name);
    return it == help.end() ? std::string{} : it->second;
}

inline void merge_job_json(JobSpec& job, const Json& j) {
    try {
        if (j.contains("command")) job.command = j["command"].get<std::string>();
        if (j.contains("space")) job.space = j["space"].get<std::string>();
        if (j.contains("function")) job.function = j["function"].get<std::string>();
        if (j.contains("l_max")) job.l_max = j["l_max"].get<int>();
        if (j.contains("sigma_max")) job.sigma_max = j["sigma_max"].get<double>();
        if (j.contains("r_claimed")) job.r_claimed = j["r_claimed"].get<double>();
        if (j.contains("grid")) job.grid = j["grid"].get<int>();
        if (j.contains("input")) job.input = j["input"].get<std::string>();
        if (j.contains("output")) job.output = j["output"].get<std::string>();
        if (j.contains("format")) job.format = j["format"].get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw UsageError(std::string("job file: ") + e.what());
    }
}

namespace detail {

class Summary {
public:
    Summary& add(const std::string& key, const std::string& value) {
        line_ += (line_.empty() ? "" : " ") + key + "=" + value;
        return *this;
    }
    Summary& add(const std::string& key, double value) { return add(key, format_double(value)); }
    Summary& add(const std::string& key, bool value) { return add(key, std::string(value ? "true" : "false")); }
    Summary& add(const std::string& key, std::size_t value) { return add(key, std::to_string(value)); }
    Summary& add(const std::string& key, int value) { return add(key, std::to_string(value)); }
    const std::string& str() const { return line_; }

private:
    std::string line_;
};

inline Json table_json(const CoefficientTable& t, std::string_view index) {
    Json rows = Json::array();
    for (const auto& e : t.entries)
        rows.push_back(Json{{std::string(index), e.l}, {"re", e.value.real()},
                            {"im", e.value.imag()}, {"quad_err", e.quad_err}});
    return Json{{"space", to_json(t.space)}, {"function", t.function}, {"entries", rows}};
}

inline Json grid_json(const GridValues& g) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < g.t.size(); ++i)
        rows.push_back(Json{{"t", g.t[i]}, {"re", g.values[i].real()}, {"im", g.values[i].imag()}});
    return rows;
}

inline Json ray_json(const RaySamples& r) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < r.sigmas.size(); ++i)
        rows.push_back(Json{{"sigma", r.sigmas[i]}, {"re", r.values[i].real()},
                            {"im", r.values[i].imag()}});
    return Json{{"space", r.space}, {"truncated", r.truncated}, {"samples", rows}};
}

struct Artifact {
    std::string csv;
    Json json;
};

inline void emit(const JobSpec& job, const Artifact& a) {
    if (job.output.empty()) return;
    if (job.format == "json")
        write_file_atomic(job.output, a.json.dump(2) + "\n");
    else
        write_file_atomic(job.output, a.csv);
}

inline void validate(const JobSpec& job) {
    bool known = false;
    for (const auto& c : subcommands()) known = known || c == job.command;
    if (!known) throw UsageError("unknown command '" + job.command + "'");
    if (job.format != "csv" && job.format != "json")
        throw UsageError("format must be csv or json, got '" + job.format + "'");
    if (job.l_max < 0 || job.l_max > 2000)
        throw UsageError("l_max must lie in [0, 2000], got " + std::to_string(job.l_max));
    if (!(job.sigma_max >= min_ray_sigma_max && job.sigma_max <= 2000.0))
        throw UsageError("sigma_max must lie in [60, 2000], got " + format_double(job.sigma_max));
    if (job.grid < 2 || job.grid > 1 << 20)
        throw UsageError("grid must lie in [2, 1048576], got " + std::to_string(job.grid));
    if (job.r_claimed && !(*job.r_claimed > 0.0 && *job.r_claimed < 2.0 * std::numbers::pi))
        throw UsageError("claimed radius must be positive and below 2 pi");
}

} // namespace detail

/// Runs one job; the summary line goes to `out`, diagnostics to `err`.
inline int run(const JobSpec& job, std::ostream& out, std::ostream& err) {
    // Validation: everything that must succeed before any computation.
    SpaceDescriptor space;
    std::optional<ParsedFunction> fn;
    try {
        detail::validate(job);
        space = catalog_space(job.space);
        const bool needs_function = job.command != "bounds" && job.command != "carlson-demo" &&
                                    !(job.command == "type-fit" && !job.input.empty());
        if (needs_function) fn = parse_function_dsl(job.function);
    } catch (const Error& e) {
        err << "error kind=" << e.kind() << " message=\"" << e.what() << "\"\n";
        return 1;
    }

    detail::Summary s;
    s.add("command", job.command);
    try {
        detail::Artifact artifact;
        const auto& cmd = job.command;
        if (cmd == "bounds") {
            const auto b = radius_bounds(space);
            s.add("space", space.name)
                .add("r_forward_conservative", b.r_forward_conservative)
                .add("r_forward_sharp", b.r_forward_sharp)
                .add("r_unique", b.r_unique)
                .add("inj_radius_t", b.inj_radius_t);
            artifact.json = Json{{"space", to_json(space)}, {"bounds", to_json(b)}};
            artifact.csv = "key,value\nr_forward_conservative," +
                           format_double(b.r_forward_conservative) + "\nr_forward_sharp," +
                           format_double(b.r_forward_sharp) + "\nr_unique," +
                           format_double(b.r_unique) + "\ninj_radius_t," +
                           format_double(b.inj_radius_t) + "\n";
        } else if (cmd == "carlson-demo") {
            const auto rep = carlson_sharpness(space.kind == SpaceKind::rank_one_symmetric
                                                   ? space
                                                   : catalog_space("s2"));
            s.add("type", rep.type_fit.r_hat)
                .add("max_lattice_value", rep.max_lattice_value)
                .add("symmetry_residual", rep.symmetry_residual);
            artifact.json = to_json(rep);
            artifact.csv = "key,value\ntype," + format_double(rep.type_fit.r_hat) +
                           "\nmax_lattice_value," + format_double(rep.max_lattice_value) +
                           "\nsymmetry_residual," + format_double(rep.symmetry_residual) + "\n";
        } else if (cmd == "transform") {
            const auto f = as_radial_function(*fn);
            const auto table = coefficient_table(space, f, job.l_max);
            s.add("space", space.name)
                .add("function", describe(f))
                .add("entries", table.entries.size())
                .add("max_quad_err", table.max_quad_err())
                .add("max_nodes", table.max_nodes());
            artifact.csv = coefficients_csv(table);
            artifact.json = detail::table_json(table, "l");
        } else if (cmd == "synthesize") {
            const auto f = as_radial_function(*fn);
            const auto table = coefficient_table(space, f, job.l_max);
            const auto grid = uniform_grid(static_cast<std::size_t>(job.grid));
            const auto g = synthesize(space, table, grid);
            double sup = 0.0;
            for (std::size_t i = 0; i < grid.size(); ++i)
                sup = std::max(sup, std::abs(g.values[i] - evaluate(space, f, grid[i])));
            s.add("space", space.name).add("l_max", job.l_max).add("sup_error", sup);
            artifact.csv = grid_csv(g);
            artifact.json = Json{{"space", to_json(space)}, {"sup_error", sup},
                                 {"values", detail::grid_json(g)}};
        } else if (cmd == "extend") {
            const auto f = as_radial_function(*fn);
            const auto ray = extend_on_ray(space, f, 1.0, default_ray_sigmas(job.sigma_max));
            s.add("space", space.name).add("samples", ray.sigmas.size()).add("truncated", ray.truncated);
            artifact.csv = ray_csv(ray);
            artifact.json = detail::ray_json(ray);
        } else if (cmd == "type-fit") {
            RaySamples ray;
            if (!job.input.empty()) {
                ray = parse_ray_csv(read_file(job.input), space.name);
            } else if (space.kind == SpaceKind::group_su2) {
                ray = group_extend_on_ray(as_class_function(*fn), default_ray_sigmas(job.sigma_max));
            } else {
                ray = extend_on_ray(space, as_radial_function(*fn), 1.0,
                                    default_ray_sigmas(job.sigma_max));
            }
            const auto rep = fit_exponential_type(ray);
            s.add("r_hat", rep.r_hat)
                .add("slope_stderr", rep.slope_stderr)
                .add("envelope_used", rep.envelope_used)
                .add("zero_function", rep.zero_function);
            artifact.json = to_json(rep);
            artifact.csv = ray_csv(ray);
        } else if (cmd == "pw-check") {
            if (!job.r_claimed) throw UsageError("pw-check needs --r");
            PWReport rep;
            if (space.kind == SpaceKind::group_su2)
                rep = group_pw_check(group_extension_of(as_class_function(*fn)), *job.r_claimed);
            else
                rep = pw_membership(space, extension_of(space, as_radial_function(*fn)),
                                    *job.r_claimed);
            s.add("verdict", rep.verdict_for_r)
                .add("r_hat", rep.type_fit.r_hat)
                .add("symmetry_residual", rep.symmetry_residual)
                .add("coverage", rep.coverage);
            artifact.json = to_json(rep);
            artifact.csv = "k,c_k\n";
            for (const auto& [k, c] : rep.decay_constants)
                artifact.csv += std::to_string(k) + "," + format_double(c) + "\n";
        } else if (cmd == "support") {
            TypeFitReport rep;
            if (space.kind == SpaceKind::group_su2) {
                rep = fit_exponential_type(group_extend_on_ray(as_class_function(*fn),
                                                               default_ray_sigmas(job.sigma_max)));
            } else {
                rep = support_radius(space, as_radial_function(*fn), job.sigma_max);
            }
            s.add("r_hat", rep.r_hat).add("zero_function", rep.zero_function);
            artifact.json = to_json(rep);
            artifact.csv = "key,value\nr_hat," + format_double(rep.r_hat) + "\n";
        } else if (cmd == "group-transform") {
            const auto f = as_class_function(*fn);
            const auto table = group_table(f, job.l_max);
            s.add("function", describe(f))
                .add("entries", table.entries.size())
                .add("max_quad_err", table.max_quad_err());
            artifact.csv = coefficients_csv(table, "n");
            artifact.json = detail::table_json(table, "n");
        } else if (cmd == "k-average") {
            const auto f = as_class_function(*fn);
            const auto g = k_average(f, uniform_grid(static_cast<std::size_t>(job.grid)));
            const auto transfer = support_transfer_check(f, 1e-12, static_cast<std::size_t>(job.grid));
            s.add("function", describe(f))
                .add("points", g.t.size())
                .add("measured_support", transfer.measured_support)
                .add("support_check_skipped", transfer.skipped);
            artifact.csv = grid_csv(g);
            artifact.json = Json{{"support_transfer", to_json(transfer)},
                                 {"values", detail::grid_json(g)}};
        }
        detail::emit(job, artifact);
        out << s.str() << "\n";
        return 0;
    } catch (const UsageError& e) {
        err << "error kind=" << e.kind() << " message=\"" << e.what() << "\"\n";
        return 1;
    } catch (const Error& e) {
        err << "error kind=" << e.kind() << " message=\"" << e.what() << "\"\n";
        if (!job.output.empty() && job.format == "json") {
            try {
                write_file_atomic(job.output,
                                  Json{{"error", {{"kind", e.kind()}, {"message", e.what()}}}}.dump(2) +
                                      "\n");
            } catch (const Error&) {
            }
        }
        return 2;
    }
}

/// argv front end: `pwsym <command> [--space S] [--f DSL] [--l-max N]
/// [--sigma-max X] [--r X] [--grid N] [--in PATH] [--out PATH]
/// [--format csv|json] [--job FILE]`.
inline int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Spherical transforms and Paley-Wiener diagnostics on rank-one spaces"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all");

    JobSpec flags;
    std::string job_file;
    double r_claimed = 0.0;
    struct Bound {
        CLI::App* app;
        CLI::Option* space;
        CLI::Option* function;
        CLI::Option* l_max;
        CLI::Option* sigma_max;
        CLI::Option* r;
        CLI::Option* grid;
        CLI::Option* input;
        CLI::Option* output;
        CLI::Option* format;
    };
    std::vector<Bound> bound;
    for (const auto& name : subcommands()) {
        auto* sub = app.add_subcommand(name, subcommand_help(name));
        Bound b{sub,
                sub->add_option("--space", flags.space, "catalog space name"),
                sub->add_option("--f", flags.function, "function descriptor"),
                sub->add_option("--l-max", flags.l_max, "largest lattice index (n for groups)"),
                sub->add_option("--sigma-max", flags.sigma_max, "top of the imaginary ray"),
                sub->add_option("--r", r_claimed, "claimed support radius"),
                sub->add_option("--grid", flags.grid, "grid points on [0, pi]"),
                sub->add_option("--in", flags.input, "input ray CSV"),
                sub->add_option("--out", flags.output, "artifact path"),
                sub->add_option("--format", flags.format, "csv or json")};
        sub->add_option("--job", job_file, "JSON job file; flags take precedence");
        bound.push_back(b);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error kind=usage message=\"" << e.what() << "\"\n";
        return 1;
    }

    const Bound* active = nullptr;
    for (const auto& b : bound)
        if (b.app->parsed()) active = &b;

    JobSpec job;
    job.command = active->app->get_name();
    if (!job_file.empty()) {
        try {
            merge_job_json(job, Json::parse(read_file(job_file)));
        } catch (const nlohmann::json::exception& e) {
            err << "error kind=usage message=\"job file: " << e.what() << "\"\n";
            return 1;
        } catch (const Error& e) {
            err << "error kind=usage message=\"" << e.what() << "\"\n";
            return 1;
        }
        job.command = active->app->get_name();
    }
    if (active->space->count()) job.space = flags.space;
    if (active->function->count()) job.function = flags.function;
    if (active->l_max->count()) job.l_max = flags.l_max;
    if (active->sigma_max->count()) job.sigma_max = flags.sigma_max;
    if (active->r->count()) job.r_claimed = r_claimed;
    if (active->grid->count()) job.grid = flags.grid;
    if (active->input->count()) job.input = flags.input;
    if (active->output->count()) job.output = flags.output;
    if (active->format->count()) job.format = flags.format;
    return run(job, out, err);
}

} // namespace pwsym

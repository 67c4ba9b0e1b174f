// covwind: field / classify / bench / validate.
// Exit codes: 0 ok, 2 input error, 3 output error, 4 validation failure.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "covwind/bench_suites.hpp"
#include "covwind/containment.hpp"
#include "covwind/errors.hpp"
#include "covwind/field.hpp"
#include "covwind/ingest.hpp"

using namespace covwind;

namespace {

constexpr int kOk = 0;
constexpr int kInputError = 2;
constexpr int kOutputError = 3;
constexpr int kValidationError = 4;

std::string g17(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

// "-" or empty writes to stdout.
int write_output(const std::string& path, const std::string& data) {
    if (path.empty() || path == "-") {
        std::cout << data << std::flush;
        if (!std::cout) {
            std::cerr << "error: cannot write to standard output\n";
            return kOutputError;
        }
        return kOk;
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (out) out << data;
    if (out) out.close();
    if (!out) {
        std::cerr << "error: cannot write " << path << "\n";
        return kOutputError;
    }
    return kOk;
}

// Loads the region, mapping failures to exit codes.
std::optional<TrimmedRegion> load(const std::string& path, double eps, FillRule rule, int& code) {
    try {
        return load_region_file(path, eps, rule);
    } catch (const ValidationError& e) {
        std::cerr << "error: " << path << ": " << e.what() << "\n";
        code = kValidationError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << path << ": " << e.what() << "\n";
        code = kInputError;
    }
    return std::nullopt;
}

FillRule parse_rule(const std::string& s) { return s == "positive" ? FillRule::Positive : FillRule::NonZero; }

std::string field_csv(const FieldRaster& r) {
    std::string out = "u,v,value\n";
    for (int y = 0; y < r.height; ++y) {
        for (int x = 0; x < r.width; ++x) {
            const std::size_t i = static_cast<std::size_t>(y) * static_cast<std::size_t>(r.width) + static_cast<std::size_t>(x);
            const Point2 p = r.sample(x, y);
            out += g17(p.u) + "," + g17(p.v) + ",";
            if (r.mode == FieldMode::Verdict || !r.on_boundary[i]) out += g17(r.values[i]);
            out += "\n";
        }
    }
    return out;
}

std::string field_pgm(const FieldRaster& r) {
    double lo = INFINITY, hi = -INFINITY;
    for (std::size_t i = 0; i < r.values.size(); ++i) {
        if (r.on_boundary[i]) continue;
        lo = std::min(lo, r.values[i]);
        hi = std::max(hi, r.values[i]);
    }
    std::string out = "P2\n# covwind field " + std::string(r.mode == FieldMode::Winding ? "winding" : "verdict") + "\n";
    out += std::to_string(r.width) + " " + std::to_string(r.height) + "\n255\n";
    for (int y = 0; y < r.height; ++y) {
        for (int x = 0; x < r.width; ++x) {
            const std::size_t i = static_cast<std::size_t>(y) * static_cast<std::size_t>(r.width) + static_cast<std::size_t>(x);
            long g = 255;
            if (!r.on_boundary[i]) g = hi > lo ? std::lround(255.0 * (r.values[i] - lo) / (hi - lo)) : 0;
            if (x > 0) out += ' ';
            out += std::to_string(g);
        }
        out += '\n';
    }
    return out;
}

struct FieldArgs {
    std::string input;
    std::vector<int> grid{256, 256};
    double eps = kDefaultEps;
    std::string mode = "winding";
    std::string rule = "nonzero";
    std::string out = "-";
    std::string format = "csv";
    bool serial = false;
};

int cmd_field(const FieldArgs& a) {
    int code = kOk;
    auto region = load(a.input, a.eps, parse_rule(a.rule), code);
    if (!region) return code;
    const FieldMode mode = a.mode == "verdict" ? FieldMode::Verdict : FieldMode::Winding;
    FieldRaster raster;
    try {
        raster = a.serial ? rasterize_serial(*region, a.grid[0], a.grid[1], mode)
                          : rasterize(*region, a.grid[0], a.grid[1], mode);
    } catch (const std::exception& e) {
        std::cerr << "error: rasterization failed: " << e.what() << "\n";
        return kInputError;
    }
    return write_output(a.out, a.format == "pgm" ? field_pgm(raster) : field_csv(raster));
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

bool parse_double(std::string_view s, double& x) {
    s = trim(s);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    const auto res = std::from_chars(s.data(), s.data() + s.size(), x);
    return !s.empty() && res.ec == std::errc() && res.ptr == s.data() + s.size() && std::isfinite(x);
}

struct ClassifyArgs {
    std::string input;
    std::string points;
    double eps = kDefaultEps;
    std::string rule = "nonzero";
    std::string out = "-";
};

int cmd_classify(const ClassifyArgs& a) {
    std::string text;
    try {
        text = read_file(a.points);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInputError;
    }
    std::vector<Point2> pts;
    std::size_t row = 0;
    bool header = false;
    for (std::size_t pos = 0; pos < text.size();) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string::npos) end = text.size();
        const std::string_view line = trim(std::string_view(text).substr(pos, end - pos));
        pos = end + 1;
        ++row;
        if (line.empty()) continue;
        if (!header) {
            if (line != "u,v") {
                std::cerr << "error: " << a.points << ": row " << row << ": expected header \"u,v\"\n";
                return kInputError;
            }
            header = true;
            continue;
        }
        const std::size_t comma = line.find(',');
        Point2 p;
        if (comma == std::string_view::npos || line.find(',', comma + 1) != std::string_view::npos ||
            !parse_double(line.substr(0, comma), p.u) || !parse_double(line.substr(comma + 1), p.v)) {
            std::cerr << "error: " << a.points << ": row " << row << ": expected two finite numbers\n";
            return kInputError;
        }
        pts.push_back(p);
    }

    int code = kOk;
    auto region = load(a.input, a.eps, parse_rule(a.rule), code);
    if (!region) return code;
    const auto results = classify_batch(*region, pts);
    std::string out = "u,v,winding,verdict\n";
    for (std::size_t i = 0; i < pts.size(); ++i) {
        out += g17(pts[i].u) + "," + g17(pts[i].v) + ",";
        if (!results[i].ok()) {
            std::cerr << "warning: point " << i + 1 << ": " << results[i].error << "\n";
            out += ",error\n";
            continue;
        }
        const Classification& c = *results[i].value;
        if (c.winding) out += g17(*c.winding);
        out += std::string(",") + to_string(c.verdict) + "\n";
    }
    return write_output(a.out, out);
}

struct BenchArgs {
    std::string suite;
    std::uint64_t seed = 1;
    std::string out = "-";
    int reps = 5;
    bool no_timing = false;
};

int cmd_bench(const BenchArgs& a) {
    SuiteOptions opt;
    opt.seed = a.seed;
    opt.repetitions = a.reps;
    opt.timing = !a.no_timing;
    return write_output(a.out, to_json(run_suite(a.suite, opt)));
}

const char* partition_name(Partition p) {
    switch (p) {
        case Partition::A: return "A";
        case Partition::B: return "B";
        case Partition::C: return "C";
    }
    return "?";
}

int cmd_validate(const std::string& input, double eps) {
    std::optional<LoopSet> set;
    try {
        const std::string text = read_file(input);
        const auto first = text.find_first_not_of(" \t\r\n");
        if (first != std::string::npos && text[first] == '<') {
            set.emplace(normalize_unit_square(parse_svg(text).paths), DomainTopology::none(), eps);
        } else {
            set.emplace(build_loop_set(parse_loopset_document(text), eps));
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << input << ": " << e.what() << "\n";
        return kInputError;
    }
    const ValidationReport& r = set->report();
    static constexpr const char* topo[] = {"none", "uni", "bi"};
    std::cout << "topology: " << topo[static_cast<int>(set->topology().kind)] << "\n";
    std::cout << "loops: " << r.loops.size() << "\n";
    for (std::size_t i = 0; i < r.loops.size(); ++i) {
        const LoopInfo& l = r.loops[i];
        std::cout << "  loop " << i << ": class " << to_string(l.cls) << ", closure defect " << g17(l.closure_defect)
                  << ", partition " << partition_name(l.partition) << "\n";
    }
    std::cout << "partition: A=" << r.count_a << " B=" << r.count_b << " C=" << r.count_c << "\n";
    if (set->topology() == DomainTopology::bi() && r.count_a > 0) {
        if (r.valid()) {
            std::cout << "pairs: " << set->pairs().size() << "\n";
            for (const BandPair& p : set->pairs()) {
                const Lattice w = set->to_original(p.shift);
                std::cout << "  loop " << p.alpha_index << " <-> loop " << p.beta_index << " shifted by (" << w.i << ", "
                          << w.j << ")\n";
            }
        } else {
            std::cout << "pairs: not attempted\n";
        }
    }
    for (const std::string& w : r.warnings) std::cout << "warning: " << w << "\n";
    if (r.valid()) {
        std::cout << "valid\n";
        return kOk;
    }
    for (const Violation& v : r.violations) std::cout << "violation: " << to_string(v.kind) << ": " << v.message << "\n";
    std::cout << "invalid\n";
    std::cerr << input << ": " << r.violations.size() << " violation(s)\n";
    return kValidationError;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Winding numbers and containment for Bezier boundaries on planar, cylindrical and toroidal domains"};
    app.require_subcommand(1);

    FieldArgs fa;
    auto* field = app.add_subcommand("field", "Rasterize the winding field or verdicts over [0,1]^2");
    field->add_option("input", fa.input, "Loop-set JSON or SVG")->required();
    field->add_option("--grid", fa.grid, "Width and height")->expected(2)->check(CLI::PositiveNumber);
    field->add_option("--eps", fa.eps, "Boundary tolerance")->check(CLI::PositiveNumber);
    field->add_option("--mode", fa.mode)->check(CLI::IsMember({"winding", "verdict"}));
    field->add_option("--rule", fa.rule)->check(CLI::IsMember({"nonzero", "positive"}));
    field->add_option("--out", fa.out, "Output file, - for stdout");
    field->add_option("--format", fa.format)->check(CLI::IsMember({"csv", "pgm"}));
    field->add_flag("--serial", fa.serial, "Use the single-threaded reference");

    ClassifyArgs ca;
    auto* classify_cmd = app.add_subcommand("classify", "Classify points from a u,v CSV");
    classify_cmd->add_option("input", ca.input, "Loop-set JSON or SVG")->required();
    classify_cmd->add_option("--points", ca.points, "CSV with header u,v")->required();
    classify_cmd->add_option("--eps", ca.eps)->check(CLI::PositiveNumber);
    classify_cmd->add_option("--rule", ca.rule)->check(CLI::IsMember({"nonzero", "positive"}));
    classify_cmd->add_option("--out", ca.out);

    BenchArgs ba;
    auto* bench = app.add_subcommand("bench", "Ellipse recursion vs control-polygon baseline");
    bench->add_option("--suite", ba.suite)->required()->check(CLI::IsMember({"degree", "tolerance", "dataset"}));
    bench->add_option("--seed", ba.seed);
    bench->add_option("--out", ba.out);
    bench->add_option("--reps", ba.reps, "Timing repetitions (at least 5)")->check(CLI::Range(5, 1000));
    bench->add_flag("--no-timing", ba.no_timing, "Omit wall times so the report is byte-reproducible");

    std::string vin;
    double veps = kDefaultEps;
    auto* validate = app.add_subcommand("validate", "Check homology, partition and pairing");
    validate->add_option("input", vin)->required();
    validate->add_option("--eps", veps)->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kInputError;
    }

    try {
        if (*field) return cmd_field(fa);
        if (*classify_cmd) return cmd_classify(ca);
        if (*bench) return cmd_bench(ba);
        if (*validate) return cmd_validate(vin, veps);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInputError;
    }
    return kOk;
}

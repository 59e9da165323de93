#include "wafermc/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <system_error>
#include <unordered_map>

namespace wafermc {

using nlohmann::json;

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

void write_text_atomic(const std::filesystem::path& path, std::string_view content) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw ParseError("cannot open " + tmp.string() + " for writing");
        }
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) {
            out.close();
            std::error_code ec;
            std::filesystem::remove(tmp, ec);
            throw ParseError("failed writing " + tmp.string());
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::error_code ec2;
        std::filesystem::remove(tmp, ec2);
        throw ParseError("cannot move " + tmp.string() + " to " + path.string() + ": " + ec.message());
    }
}

namespace {

// Line-oriented tokenizer that reports "path:line:column" on bad tokens.
class LineReader {
public:
    LineReader(const std::filesystem::path& path) : path_(path.string()), in_(path) {
        if (!in_) throw ParseError("cannot open " + path_);
    }

    // Next non-empty line; false at end of input.
    bool next_line() {
        while (std::getline(in_, line_)) {
            ++line_no_;
            if (line_.find_first_not_of(" \t\r") != std::string::npos) return true;
        }
        return false;
    }

    int line_no() const { return line_no_; }

    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError(path_ + ":" + std::to_string(line_no_) + ": " + msg);
    }

    std::vector<std::string_view> tokens() const {
        std::vector<std::string_view> out;
        const std::string_view sv(line_);
        std::size_t pos = 0;
        while (pos < sv.size()) {
            const std::size_t start = sv.find_first_not_of(" \t\r", pos);
            if (start == std::string_view::npos) break;
            std::size_t end = sv.find_first_of(" \t\r", start);
            if (end == std::string_view::npos) end = sv.size();
            out.push_back(sv.substr(start, end - start));
            pos = end;
        }
        return out;
    }

    int column_of(std::string_view token) const {
        return static_cast<int>(token.data() - line_.data()) + 1;
    }

    double parse_double(std::string_view token) const {
        double v = 0.0;
        const auto res = std::from_chars(token.data(), token.data() + token.size(), v);
        if (res.ec != std::errc{} || res.ptr != token.data() + token.size()) {
            fail_at(token, "expected a numeric value, got '" + std::string(token) + "'");
        }
        if (!std::isfinite(v)) {
            fail_at(token, "non-finite value '" + std::string(token) + "'");
        }
        return v;
    }

    long long parse_int(std::string_view token) const {
        long long v = 0;
        const auto res = std::from_chars(token.data(), token.data() + token.size(), v);
        if (res.ec != std::errc{} || res.ptr != token.data() + token.size()) {
            fail_at(token, "expected an integer, got '" + std::string(token) + "'");
        }
        return v;
    }

private:
    [[noreturn]] void fail_at(std::string_view token, const std::string& msg) const {
        throw ParseError(path_ + ":" + std::to_string(line_no_) + ":" + std::to_string(column_of(token)) + ": " +
                         msg);
    }

    std::string path_;
    std::ifstream in_;
    std::string line_;
    int line_no_ = 0;
};

struct Header {
    int rows = 0;
    int cols = 0;
};

Header read_header(LineReader& reader) {
    if (!reader.next_line()) reader.fail("missing 'rows cols' header");
    const auto toks = reader.tokens();
    if (toks.size() != 2) reader.fail("expected header 'rows cols'");
    const long long rows = reader.parse_int(toks[0]);
    const long long cols = reader.parse_int(toks[1]);
    if (rows < 1 || cols < 1 || rows > 1'000'000 || cols > 1'000'000) {
        reader.fail("header dimensions out of range");
    }
    return {static_cast<int>(rows), static_cast<int>(cols)};
}

}  // namespace

WaferMap read_wafer_map(const std::filesystem::path& path) {
    LineReader reader(path);
    const Header h = read_header(reader);
    std::vector<double> values;
    values.reserve(static_cast<std::size_t>(h.rows) * static_cast<std::size_t>(h.cols));
    for (int i = 0; i < h.rows; ++i) {
        if (!reader.next_line()) reader.fail("expected " + std::to_string(h.rows) + " data rows, found " +
                                             std::to_string(i));
        const auto toks = reader.tokens();
        if (static_cast<int>(toks.size()) != h.cols) {
            reader.fail("expected " + std::to_string(h.cols) + " values, found " + std::to_string(toks.size()));
        }
        for (const auto& t : toks) values.push_back(reader.parse_double(t));
    }
    if (reader.next_line()) reader.fail("unexpected content after " + std::to_string(h.rows) + " data rows");
    return WaferMap(h.rows, h.cols, std::move(values));
}

void write_wafer_map(const WaferMap& map, const std::filesystem::path& path) {
    std::string out;
    out.reserve(static_cast<std::size_t>(map.rows()) * static_cast<std::size_t>(map.cols()) * 20);
    out += std::to_string(map.rows()) + " " + std::to_string(map.cols()) + "\n";
    for (int i = 0; i < map.rows(); ++i) {
        for (int j = 0; j < map.cols(); ++j) {
            if (j > 0) out += ' ';
            out += format_double(map(i, j));
        }
        out += '\n';
    }
    write_text_atomic(path, out);
}

ObservationSet read_observation_set(const std::filesystem::path& path) {
    LineReader reader(path);
    const Header h = read_header(reader);
    std::vector<Observation> entries;
    std::unordered_map<std::int64_t, int> first_line;
    while (reader.next_line()) {
        const auto toks = reader.tokens();
        if (toks.size() != 3) reader.fail("expected 'i j value', found " + std::to_string(toks.size()) + " fields");
        const long long i = reader.parse_int(toks[0]);
        const long long j = reader.parse_int(toks[1]);
        const double v = reader.parse_double(toks[2]);
        if (i < 0 || i >= h.rows) {
            reader.fail("row index " + std::to_string(i) + " out of range for " + std::to_string(h.rows) + "x" +
                        std::to_string(h.cols) + " grid");
        }
        if (j < 0 || j >= h.cols) {
            reader.fail("column index " + std::to_string(j) + " out of range for " + std::to_string(h.rows) + "x" +
                        std::to_string(h.cols) + " grid");
        }
        const std::int64_t key = i * h.cols + j;
        const auto [it, inserted] = first_line.emplace(key, reader.line_no());
        if (!inserted) {
            reader.fail("duplicate observation index (" + std::to_string(i) + ", " + std::to_string(j) +
                        "), first seen at line " + std::to_string(it->second));
        }
        entries.push_back({static_cast<int>(i), static_cast<int>(j), v});
    }
    return ObservationSet(h.rows, h.cols, std::move(entries), ObservationRole::PrimaryOmega);
}

void write_observation_set(const ObservationSet& obs, const std::filesystem::path& path) {
    std::string out;
    out.reserve(obs.size() * 24 + 16);
    out += std::to_string(obs.rows()) + " " + std::to_string(obs.cols()) + "\n";
    for (const Observation& e : obs.entries()) {
        out += std::to_string(e.row) + " " + std::to_string(e.col) + " " + format_double(e.value) + "\n";
    }
    write_text_atomic(path, out);
}

DeviceTypeMap read_device_type_map(const std::filesystem::path& path) {
    LineReader reader(path);
    const Header h = read_header(reader);
    std::vector<int> labels;
    labels.reserve(static_cast<std::size_t>(h.rows) * static_cast<std::size_t>(h.cols));
    for (int i = 0; i < h.rows; ++i) {
        if (!reader.next_line()) reader.fail("expected " + std::to_string(h.rows) + " label rows, found " +
                                             std::to_string(i));
        const auto toks = reader.tokens();
        if (static_cast<int>(toks.size()) != h.cols) {
            reader.fail("expected " + std::to_string(h.cols) + " labels, found " + std::to_string(toks.size()));
        }
        for (const auto& t : toks) {
            const long long label = reader.parse_int(t);
            if (label < 0 || label > 1'000'000) reader.fail("type label " + std::to_string(label) + " out of range");
            labels.push_back(static_cast<int>(label));
        }
    }
    if (reader.next_line()) reader.fail("unexpected content after " + std::to_string(h.rows) + " label rows");
    return DeviceTypeMap(h.rows, h.cols, std::move(labels));
}

void write_device_type_map(const DeviceTypeMap& types, const std::filesystem::path& path) {
    std::string out;
    out += std::to_string(types.rows()) + " " + std::to_string(types.cols()) + "\n";
    for (int i = 0; i < types.rows(); ++i) {
        for (int j = 0; j < types.cols(); ++j) {
            if (j > 0) out += ' ';
            out += std::to_string(types.label(i, j));
        }
        out += '\n';
    }
    write_text_atomic(path, out);
}

namespace {

unsigned char to_pixel(double v, double lo, double hi) {
    if (!(hi > lo)) return 128;  // constant map
    const double scaled = 255.0 * (v - lo) / (hi - lo);
    return static_cast<unsigned char>(std::clamp(std::lround(scaled), 0L, 255L));
}

void write_pgm(int width, int height, const std::string& pixels, const std::filesystem::path& path) {
    std::string out = "P5\n" + std::to_string(width) + " " + std::to_string(height) + "\n255\n";
    out += pixels;
    write_text_atomic(path, out);
}

}  // namespace

void render_heatmap(const WaferMap& map, const std::filesystem::path& path) {
    const auto [lo_it, hi_it] = std::minmax_element(map.values().begin(), map.values().end());
    const double lo = *lo_it, hi = *hi_it;
    std::string pixels;
    pixels.reserve(map.values().size());
    for (int i = 0; i < map.rows(); ++i)
        for (int j = 0; j < map.cols(); ++j) pixels += static_cast<char>(to_pixel(map(i, j), lo, hi));
    write_pgm(map.cols(), map.rows(), pixels, path);
}

void render_heatmap_pair(const WaferMap& left, const WaferMap& right, const std::filesystem::path& path) {
    if (left.rows() != right.rows()) {
        throw ValidationError("side-by-side render requires equal row counts");
    }
    double lo = left.values()[0], hi = left.values()[0];
    for (double v : left.values()) lo = std::min(lo, v), hi = std::max(hi, v);
    for (double v : right.values()) lo = std::min(lo, v), hi = std::max(hi, v);

    const int gutter = 2;
    const int width = left.cols() + gutter + right.cols();
    std::string pixels;
    pixels.reserve(static_cast<std::size_t>(width) * static_cast<std::size_t>(left.rows()));
    for (int i = 0; i < left.rows(); ++i) {
        for (int j = 0; j < left.cols(); ++j) pixels += static_cast<char>(to_pixel(left(i, j), lo, hi));
        for (int g = 0; g < gutter; ++g) pixels += static_cast<char>(255);
        for (int j = 0; j < right.cols(); ++j) pixels += static_cast<char>(to_pixel(right(i, j), lo, hi));
    }
    write_pgm(width, left.rows(), pixels, path);
}

namespace {

json optional_to_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

void json_to_optional(const json& j, const char* key, std::optional<double>& out) {
    out.reset();
    if (j.contains(key) && !j.at(key).is_null()) out = j.at(key).get<double>();
}

json config_to_json(const SolverConfig& c) {
    return json{{"mu_final", optional_to_json(c.mu_final)},
                {"mu_initial", optional_to_json(c.mu_initial)},
                {"mu_decay", c.mu_decay},
                {"tau", optional_to_json(c.tau)},
                {"inner_tol", c.inner_tol},
                {"max_inner_iters", c.max_inner_iters},
                {"max_total_iters", c.max_total_iters}};
}

SolverConfig config_from_json(const json& j) {
    SolverConfig c;
    json_to_optional(j, "mu_final", c.mu_final);
    json_to_optional(j, "mu_initial", c.mu_initial);
    c.mu_decay = j.at("mu_decay").get<double>();
    json_to_optional(j, "tau", c.tau);
    c.inner_tol = j.at("inner_tol").get<double>();
    c.max_inner_iters = j.at("max_inner_iters").get<int>();
    c.max_total_iters = j.at("max_total_iters").get<int>();
    return c;
}

}  // namespace

std::string manifest_to_json(const RunManifest& m) {
    json j;
    j["tool_version"] = m.tool_version;
    j["inputs"] = m.input_paths;
    j["solver"] = config_to_json(m.config);
    j["problem"] = {{"lambda", optional_to_json(m.lambda)},
                    {"eta", optional_to_json(m.eta)},
                    {"sample_fraction", optional_to_json(m.sample_fraction)},
                    {"seed", m.seed ? json(*m.seed) : json(nullptr)}};
    j["result"] = {{"relative_error", optional_to_json(m.relative_error)},
                   {"total_iterations", m.total_iterations},
                   {"phases", m.phases},
                   {"termination", m.termination},
                   {"degenerate_problem", m.degenerate_problem}};
    j["timing"] = {{"wall_clock_seconds", m.wall_clock_seconds}};
    return j.dump(2) + "\n";
}

RunManifest manifest_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("invalid manifest JSON: ") + e.what());
    }
    try {
        RunManifest m;
        m.tool_version = j.at("tool_version").get<std::string>();
        m.input_paths = j.at("inputs").get<std::vector<std::string>>();
        m.config = config_from_json(j.at("solver"));
        const json& p = j.at("problem");
        json_to_optional(p, "lambda", m.lambda);
        json_to_optional(p, "eta", m.eta);
        json_to_optional(p, "sample_fraction", m.sample_fraction);
        if (p.contains("seed") && !p.at("seed").is_null()) m.seed = p.at("seed").get<std::uint64_t>();
        const json& r = j.at("result");
        json_to_optional(r, "relative_error", m.relative_error);
        m.total_iterations = r.at("total_iterations").get<int>();
        m.phases = r.at("phases").get<int>();
        m.termination = r.at("termination").get<std::string>();
        m.degenerate_problem = r.at("degenerate_problem").get<bool>();
        m.wall_clock_seconds = j.at("timing").at("wall_clock_seconds").get<double>();
        return m;
    } catch (const json::exception& e) {
        throw ParseError(std::string("manifest missing required fields: ") + e.what());
    }
}

void write_manifest(const RunManifest& manifest, const std::filesystem::path& path) {
    write_text_atomic(path, manifest_to_json(manifest));
}

RunManifest read_manifest(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return manifest_from_json(buf.str());
}

}  // namespace wafermc

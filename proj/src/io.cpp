#include "qrm/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace qrm::io {

std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return {buf, res.ptr};
}

void RunConfig::set(const std::string& key, double value) { entries[key] = format_double(value); }

void RunConfig::set(const std::string& key, long long value) {
    entries[key] = std::to_string(value);
}

const std::string& RunConfig::get(const std::string& key) const {
    const auto it = entries.find(key);
    if (it == entries.end()) throw std::invalid_argument("config key missing: " + key);
    return it->second;
}

std::string RunConfig::serialize() const {
    std::string out;
    for (const auto& [k, v] : entries) {
        if (k.find('=') != std::string::npos || k.find('\n') != std::string::npos ||
            v.find('\n') != std::string::npos)
            throw std::invalid_argument("config entries must not contain '=' in keys or newlines");
        out += k;
        out += '=';
        out += v;
        out += '\n';
    }
    return out;
}

RunConfig RunConfig::parse(const std::string& text) {
    RunConfig c;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("malformed config line: " + line);
        c.entries[line.substr(0, eq)] = line.substr(eq + 1);
    }
    return c;
}

nlohmann::json RunConfig::to_json() const {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& [k, v] : entries) j[k] = v;
    return j;
}

namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream f(path, std::ios::binary);  // binary: no platform newline translation
    if (!f) throw std::runtime_error("cannot open output file: " + path);
    return f;
}

}  // namespace

void write_csv(const std::string& path, const RunConfig& config,
               const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
    auto f = open_out(path);
    for (const auto& [k, v] : config.entries) f << "# " << k << '=' << v << '\n';
    for (std::size_t i = 0; i < header.size(); ++i)
        f << (i ? "," : "") << csv_field(header[i]);
    f << '\n';
    for (const auto& row : rows) {
        if (row.size() != header.size())
            throw std::invalid_argument("row width does not match header");
        for (std::size_t i = 0; i < row.size(); ++i)
            f << (i ? "," : "") << format_double(row[i]);
        f << '\n';
    }
    if (!f) throw std::runtime_error("write failed: " + path);
}

void write_json(const std::string& path, const nlohmann::json& doc) {
    auto f = open_out(path);
    f << doc.dump(2) << '\n';
    if (!f) throw std::runtime_error("write failed: " + path);
}

namespace {

// viridis anchors, interpolated linearly in RGB
constexpr double kMap[][3] = {
    {0.267, 0.005, 0.329}, {0.283, 0.131, 0.449}, {0.263, 0.242, 0.521},
    {0.221, 0.339, 0.549}, {0.178, 0.426, 0.557}, {0.144, 0.507, 0.557},
    {0.120, 0.585, 0.546}, {0.153, 0.662, 0.506}, {0.290, 0.733, 0.429},
    {0.497, 0.789, 0.298}, {0.741, 0.827, 0.151}, {0.993, 0.906, 0.144}};

std::string rgb_hex(double t) {
    t = std::clamp(t, 0.0, 1.0);
    constexpr int n = static_cast<int>(sizeof(kMap) / sizeof(kMap[0]));
    const double pos = t * (n - 1);
    const int lo = std::min(static_cast<int>(pos), n - 2);
    const double w = pos - lo;
    char buf[8];
    std::snprintf(buf, sizeof(buf), "#%02x%02x%02x",
                  static_cast<int>(std::lround(255.0 * ((1 - w) * kMap[lo][0] + w * kMap[lo + 1][0]))),
                  static_cast<int>(std::lround(255.0 * ((1 - w) * kMap[lo][1] + w * kMap[lo + 1][1]))),
                  static_cast<int>(std::lround(255.0 * ((1 - w) * kMap[lo][2] + w * kMap[lo + 1][2]))));
    return buf;
}

}  // namespace

void write_svg_heatmap(const std::string& path, const husimi::QField& field,
                       const std::string& title) {
    const auto& g = field.grid;
    const int plot_w = 480, plot_h = 480, margin = 60;
    const int W = plot_w + 2 * margin, H = plot_h + 2 * margin;
    const double vmax = *std::max_element(field.values.begin(), field.values.end());

    auto f = open_out(path);
    f << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << W
      << "\" height=\"" << H << "\" viewBox=\"0 0 " << W << ' ' << H << "\">\n"
      << "<rect width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n"
      << "<text x=\"" << W / 2 << "\" y=\"30\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">"
      << title << "</text>\n";

    const double cw = static_cast<double>(plot_w) / static_cast<double>(g.nx);
    const double ch = static_cast<double>(plot_h) / static_cast<double>(g.ny);
    f.precision(3);
    for (std::size_t j = 0; j < g.ny; ++j) {
        // SVG y grows downward; phase-space y grows upward
        const double ypix = margin + plot_h - static_cast<double>(j + 1) * ch;
        for (std::size_t i = 0; i < g.nx; ++i) {
            const double t = vmax > 0.0 ? field.values[j * g.nx + i] / vmax : 0.0;
            f << "<rect x=\"" << margin + static_cast<double>(i) * cw << "\" y=\"" << ypix
              << "\" width=\"" << cw + 0.5 << "\" height=\"" << ch + 0.5 << "\" fill=\""
              << rgb_hex(t) << "\"/>\n";
        }
    }
    f << "<rect x=\"" << margin << "\" y=\"" << margin << "\" width=\"" << plot_w
      << "\" height=\"" << plot_h << "\" fill=\"none\" stroke=\"black\"/>\n";
    auto axis_label = [&](double xpix, double ypix, const std::string& anchor, double value) {
        f << "<text x=\"" << xpix << "\" y=\"" << ypix << "\" text-anchor=\"" << anchor
          << "\" font-family=\"sans-serif\" font-size=\"12\">" << format_double(value)
          << "</text>\n";
    };
    axis_label(margin, margin + plot_h + 18, "middle", g.x_min);
    axis_label(margin + plot_w, margin + plot_h + 18, "middle", g.x_max);
    axis_label(margin - 6, margin + plot_h, "end", g.y_min);
    axis_label(margin - 6, margin + 10, "end", g.y_max);
    f << "<text x=\"" << W / 2 << "\" y=\"" << H - 12
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">x; peak Q = "
      << format_double(vmax) << "</text>\n</svg>\n";
    if (!f) throw std::runtime_error("write failed: " + path);
}

}  // namespace qrm::io

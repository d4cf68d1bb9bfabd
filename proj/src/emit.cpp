#include "bt/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace bt::expr {

namespace {

// 17 significant digits round-trip any double exactly.
std::string num_str(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += "\"";
    return out;
}

std::string csv_value(const ordered_json& v) {
    switch (v.type()) {
        case ordered_json::value_t::number_float:
            return num_str(v.get<double>());
        case ordered_json::value_t::string:
            return csv_escape(v.get<std::string>());
        case ordered_json::value_t::null:
            return "";
        default:
            return csv_escape(v.dump());
    }
}

std::string xml_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string iso_utc_now() {
    auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c",
                                    "#9467bd", "#ff7f0e", "#8c564b"};

}  // namespace

const char* version_string() { return "0.1.0"; }

ordered_json report_to_json(const ExperimentReport& rep, bool include_meta) {
    ordered_json j;
    j["experiment"] = rep.experiment;
    j["claim"] = rep.claim;
    j["config"] = rep.config;
    j["rows"] = rep.rows;
    j["fits"] = rep.fits;
    j["pass"] = rep.pass;
    if (include_meta) {
        j["meta"] = {{"version", version_string()},
                     {"generated_at", iso_utc_now()},
                     {"runtime_sec", rep.runtime_sec}};
    }
    return j;
}

std::string report_csv(const ExperimentReport& rep) {
    // Header is the union of row keys in first-seen order so heterogeneous
    // rows land in stable columns.
    std::vector<std::string> cols;
    for (const auto& r : rep.rows)
        for (auto it = r.begin(); it != r.end(); ++it)
            if (std::find(cols.begin(), cols.end(), it.key()) == cols.end())
                cols.push_back(it.key());
    std::ostringstream os;
    for (size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << csv_escape(cols[i]);
    os << "\n";
    for (const auto& r : rep.rows) {
        for (size_t i = 0; i < cols.size(); ++i) {
            if (i) os << ",";
            if (r.contains(cols[i])) os << csv_value(r.at(cols[i]));
        }
        os << "\n";
    }
    return os.str();
}

std::string report_svg(const ExperimentReport& rep) {
    const double W = 720, H = 480, x0 = 70, x1 = 690, y0 = 410, y1 = 40;
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
       << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
    os << "<rect width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
    os << "<text x=\"" << (W / 2) << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">"
       << xml_escape(rep.experiment) << "</text>\n";

    if (rep.plots.empty()) {
        os << "<text x=\"" << (W / 2) << "\" y=\"" << (H / 2)
           << "\" text-anchor=\"middle\" font-size=\"12\">no plotted series</text>\n</svg>\n";
        return os.str();
    }

    double lo_x = 1e300, hi_x = -1e300, lo_y = 1e300, hi_y = -1e300;
    for (const auto& s : rep.plots) {
        for (const auto& p : s.pts) {
            lo_x = std::min(lo_x, p.x);
            hi_x = std::max(hi_x, p.x);
            lo_y = std::min(lo_y, p.y);
            hi_y = std::max(hi_y, p.y);
        }
    }
    if (hi_x - lo_x < 1e-12) { lo_x -= 0.5; hi_x += 0.5; }
    if (hi_y - lo_y < 1e-12) { lo_y -= 0.5; hi_y += 0.5; }
    double pad_x = 0.05 * (hi_x - lo_x), pad_y = 0.08 * (hi_y - lo_y);
    lo_x -= pad_x; hi_x += pad_x; lo_y -= pad_y; hi_y += pad_y;
    auto px = [&](double x) { return x0 + (x - lo_x) / (hi_x - lo_x) * (x1 - x0); };
    auto py = [&](double y) { return y0 - (y - lo_y) / (hi_y - lo_y) * (y0 - y1); };

    for (int t = 0; t <= 4; ++t) {
        double fx = lo_x + t * (hi_x - lo_x) / 4, fy = lo_y + t * (hi_y - lo_y) / 4;
        char lab[32];
        os << "<line x1=\"" << px(fx) << "\" y1=\"" << y0 << "\" x2=\"" << px(fx) << "\" y2=\""
           << y1 << "\" stroke=\"#eeeeee\"/>\n";
        os << "<line x1=\"" << x0 << "\" y1=\"" << py(fy) << "\" x2=\"" << x1 << "\" y2=\""
           << py(fy) << "\" stroke=\"#eeeeee\"/>\n";
        std::snprintf(lab, sizeof lab, "%.2f", fx);
        os << "<text x=\"" << px(fx) << "\" y=\"" << (y0 + 16)
           << "\" text-anchor=\"middle\" font-size=\"10\">" << lab << "</text>\n";
        std::snprintf(lab, sizeof lab, "%.2f", fy);
        os << "<text x=\"" << (x0 - 6) << "\" y=\"" << (py(fy) + 3)
           << "\" text-anchor=\"end\" font-size=\"10\">" << lab << "</text>\n";
    }
    os << "<line x1=\"" << x0 << "\" y1=\"" << y0 << "\" x2=\"" << x1 << "\" y2=\"" << y0
       << "\" stroke=\"black\"/>\n";
    os << "<line x1=\"" << x0 << "\" y1=\"" << y0 << "\" x2=\"" << x0 << "\" y2=\"" << y1
       << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << ((x0 + x1) / 2) << "\" y=\"" << (H - 12)
       << "\" text-anchor=\"middle\" font-size=\"12\">log10 N</text>\n";
    os << "<text x=\"16\" y=\"" << ((y0 + y1) / 2)
       << "\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 16 "
       << ((y0 + y1) / 2) << ")\">log10 value</text>\n";

    int idx = 0;
    double legend_y = y1 + 8;
    for (const auto& s : rep.plots) {
        const char* color = kPalette[idx % 6];
        os << "<g class=\"series\" data-label=\"" << xml_escape(s.label) << "\">\n";
        os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (const auto& p : s.pts) os << px(p.x) << "," << py(p.y) << " ";
        os << "\"/>\n";
        for (const auto& p : s.pts)
            os << "<circle cx=\"" << px(p.x) << "\" cy=\"" << py(p.y) << "\" r=\"3\" fill=\""
               << color << "\"/>\n";
        if (s.has_fit) {
            os << "<line class=\"fit\" x1=\"" << px(lo_x) << "\" y1=\""
               << py(s.fit_intercept10 + s.fit_slope * lo_x) << "\" x2=\"" << px(hi_x)
               << "\" y2=\"" << py(s.fit_intercept10 + s.fit_slope * hi_x) << "\" stroke=\""
               << color << "\" stroke-width=\"1\" opacity=\"0.6\"/>\n";
        }
        if (s.has_target && !s.pts.empty()) {
            double ax = s.pts.front().x;
            double ay = s.has_fit ? s.fit_intercept10 + s.fit_slope * ax : s.pts.front().y;
            os << "<line class=\"target\" x1=\"" << px(ax) << "\" y1=\"" << py(ay) << "\" x2=\""
               << px(hi_x) << "\" y2=\"" << py(ay + s.target_slope * (hi_x - ax))
               << "\" stroke=\"" << color << "\" stroke-width=\"1\" stroke-dasharray=\"5,4\"/>\n";
        }
        os << "</g>\n";
        std::ostringstream entry;
        entry << s.label;
        if (s.has_fit) {
            char lab[48];
            std::snprintf(lab, sizeof lab, " slope %.4f", s.fit_slope);
            entry << lab;
        }
        if (s.has_target) {
            char lab[48];
            std::snprintf(lab, sizeof lab, " (target %.4f)", s.target_slope);
            entry << lab;
        }
        os << "<text x=\"" << (x1 - 8) << "\" y=\"" << legend_y
           << "\" text-anchor=\"end\" font-size=\"11\" fill=\"" << color << "\">"
           << xml_escape(entry.str()) << "</text>\n";
        legend_y += 15;
        ++idx;
    }
    os << "</svg>\n";
    return os.str();
}

std::vector<std::string> write_report(const ExperimentReport& rep, const std::string& dir,
                                      const std::vector<std::string>& formats) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    std::vector<std::string> paths;
    for (const auto& fmt : formats) {
        fs::path p = fs::path(dir) / (rep.experiment + "." + fmt);
        std::ofstream out(p);
        if (!out) throw std::runtime_error("cannot open " + p.string());
        if (fmt == "json")
            out << report_to_json(rep, true).dump(2) << "\n";
        else if (fmt == "csv")
            out << report_csv(rep);
        else if (fmt == "svg")
            out << report_svg(rep);
        else
            throw std::invalid_argument("unknown format: " + fmt);
        paths.push_back(p.string());
    }
    return paths;
}

const char* report_schema_json() {
    return R"({
  "$schema": "http://json-schema.org/draft-07/schema#",
  "title": "experiment report",
  "type": "object",
  "required": ["experiment", "claim", "config", "rows", "fits", "pass"],
  "properties": {
    "experiment": {"type": "string"},
    "claim": {"type": "string"},
    "config": {"type": "object"},
    "rows": {"type": "array", "items": {"type": "object"}},
    "fits": {"type": "array", "items": {"type": "object"}},
    "pass": {"type": "boolean"},
    "meta": {
      "type": "object",
      "properties": {
        "version": {"type": "string"},
        "generated_at": {"type": "string"},
        "runtime_sec": {"type": "number"}
      }
    }
  }
}
)";
}

}  // namespace bt::expr

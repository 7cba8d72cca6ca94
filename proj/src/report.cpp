#include "neck/report.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <stdexcept>

namespace neck {

using nlohmann::ordered_json;

ordered_json json_of(const RateFit& fit) {
    ordered_json j;
    j["samples"] = fit.samples;
    j["slope"] = fit.slope;
    j["intercept"] = fit.intercept;
    j["r_squared"] = fit.r_squared;
    j["window"] = fit.window;
    return j;
}

ordered_json json_of(const DiagnosticResult& diag) {
    ordered_json j;
    j["name"] = diag.name;
    j["pass"] = diag.pass;
    j["max_residual"] = diag.max_residual;
    j["location"] = diag.location;
    ordered_json data = ordered_json::object();
    for (const auto& [key, value] : diag.data) data[key] = value;
    j["data"] = data;
    return j;
}

ordered_json json_of(const SweepResult& sweep) {
    ordered_json pts = ordered_json::array();
    for (const auto& p : sweep.points) {
        ordered_json e;
        e["eps"] = p.eps;
        e["max_G"] = p.max_G;
        e["max_r"] = p.max_r;
        e["max_z"] = p.max_z;
        e["Nr"] = p.Nr;
        e["Ns"] = p.Ns;
        e["residual"] = p.residual;
        e["ok"] = p.ok;
        if (!p.ok) e["error"] = p.error;
        pts.push_back(e);
    }
    ordered_json j;
    j["points"] = pts;
    j["fit"] = json_of(sweep.fit);
    return j;
}

ordered_json json_of(const CertificateReport& report) {
    ordered_json checks = ordered_json::array();
    for (const auto& c : report.checks) {
        ordered_json e;
        e["check_name"] = c.check_name;
        e["parameter_box"] = c.parameter_box;
        e["verdict"] = c.verdict;
        e["worst_point"] = c.worst_point;
        e["worst_value"] = c.worst_value;
        checks.push_back(e);
    }
    ordered_json brackets = ordered_json::array();
    for (const auto& [lo, hi] : report.phi_brackets)
        brackets.push_back(ordered_json::array({lo, hi}));
    ordered_json j;
    j["checks"] = checks;
    j["phi_crit"] = report.phi_crit;
    j["phi_brackets"] = brackets;
    j["n_points"] = report.points.size();
    return j;
}

ordered_json make_report(const std::string& command, const RunConfig& cfg) {
    ordered_json j;
    j["command"] = command;
    j["config"] = cfg.resolved();
    j["results"] = ordered_json::object();
    j["meta"] = {{"timestamp", iso_timestamp()}};
    return j;
}

void write_json_file(const std::filesystem::path& path, const ordered_json& doc) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot open for writing: " + path.string());
    out << doc.dump(2) << "\n";
}

void write_csv_file(const std::filesystem::path& path,
                    const std::vector<std::string>& header,
                    const std::vector<std::vector<double>>& rows) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot open for writing: " + path.string());
    for (std::size_t i = 0; i < header.size(); ++i)
        out << (i ? "," : "") << header[i];
    out << "\n";
    char buf[40];
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            std::snprintf(buf, sizeof(buf), "%.17g", row[i]);
            out << (i ? "," : "") << buf;
        }
        out << "\n";
    }
}

void write_csv_file(const std::filesystem::path& path,
                    const std::vector<std::string>& header,
                    const std::vector<std::pair<std::string, std::vector<double>>>& rows) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot open for writing: " + path.string());
    for (std::size_t i = 0; i < header.size(); ++i)
        out << (i ? "," : "") << header[i];
    out << "\n";
    for (const auto& [label, nums] : rows) {
        out << label;
        for (double x : nums) out << "," << csv_num(x);
        out << "\n";
    }
}

std::string csv_num(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

std::string iso_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace neck

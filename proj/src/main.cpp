#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "neck/certificate.hpp"
#include "neck/config.hpp"
#include "neck/experiments.hpp"
#include "neck/geometry.hpp"
#include "neck/grid.hpp"
#include "neck/report.hpp"
#include "neck/solver.hpp"

namespace {

using neck::RunConfig;
using nlohmann::ordered_json;
namespace fs = std::filesystem;

constexpr int kOk = 0;
constexpr int kValidationError = 1;
constexpr int kNumericalError = 2;
constexpr int kDiagnosticFailed = 3;

void emit_error(const std::string& kind, const std::string& message) {
    ordered_json err;
    err["error"] = {{"type", kind}, {"message", message}};
    std::cerr << err.dump() << "\n";
}

ordered_json load_config(const std::string& path) {
    if (path.empty()) return ordered_json::object();
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot open " + path);
    ordered_json doc = ordered_json::parse(in, nullptr, false);
    if (doc.is_discarded())
        throw std::invalid_argument("config: " + path + " is not valid JSON");
    return doc;
}

fs::path prepare_out_dir(const RunConfig& cfg) {
    fs::path dir(cfg.out_dir);
    fs::create_directories(dir);
    return dir;
}

int cmd_table(int n_max) {
    if (n_max < 3) throw std::invalid_argument("table: --n-max must be >= 3");
    std::printf("%4s %12s %12s\n", "n", "gamma_star", "rate");
    for (int n = 3; n <= n_max; ++n)
        std::printf("%4d %12.6f %12.6f\n", n, neck::gamma_star(n),
                    neck::blow_up_exponent(n));
    return kOk;
}

int cmd_certify(RunConfig cfg) {
    if (!cfg.geometry.pure_paraboloid())
        throw std::invalid_argument(
            "certify: the barrier formulas assume the pure paraboloid pair "
            "(lambda1 = lambda2 = 1/2, cubic terms zero)");
    cfg.aux.validate();
    const neck::ScanBoxes boxes = neck::ScanBoxes::defaults(cfg.geometry.R);
    const neck::CertificateReport report = neck::scan_certificate(cfg.aux, boxes);

    const fs::path dir = prepare_out_dir(cfg);
    if (cfg.write_json) {
        ordered_json doc = neck::make_report("certify", cfg);
        doc["results"] = neck::json_of(report);
        neck::write_json_file(dir / "certify.json", doc);
    }
    if (cfg.write_csv) {
        std::vector<std::pair<std::string, std::vector<double>>> rows;
        rows.reserve(report.points.size());
        for (const auto& p : report.points)
            rows.push_back({p.check, {p.x, p.y, p.value}});
        neck::write_csv_file(dir / "certify_points.csv",
                             {"check", "x", "y", "value"}, rows);
    }

    for (const auto& c : report.checks)
        std::printf("%-16s %-6s worst %+.6e at (%.6g, %.6g)\n",
                    c.check_name.c_str(), c.verdict.c_str(), c.worst_value,
                    c.worst_point[0], c.worst_point[1]);
    if (report.phi_crit > 0.0)
        std::printf("phi_crit %.8f\n", report.phi_crit);
    else
        std::printf("phi_crit none\n");
    return kOk;
}

int cmd_solve(const RunConfig& cfg) {
    neck::ReducedProblem prob;
    prob.n = cfg.n;
    prob.k = cfg.k;
    prob.geom = cfg.geometry;
    const double outer = cfg.outer_value;
    prob.outer_data = [outer](double) { return outer; };

    const neck::Grid grid = neck::build_grid(cfg.geometry, cfg.Nr, cfg.Ns);
    const neck::Field field = neck::solve(neck::assemble(prob, grid));
    const neck::GradientField grad = neck::gradient_surrogate(field, prob, grid);

    const fs::path dir = prepare_out_dir(cfg);
    if (cfg.write_csv) {
        std::vector<std::vector<double>> rows;
        rows.reserve(static_cast<std::size_t>(grid.Nr + 1) * (grid.Ns + 1));
        for (int i = 0; i <= grid.Nr; ++i)
            for (int j = 0; j <= grid.Ns; ++j)
                rows.push_back({grid.r_nodes[i], grid.z(i, j), field.at(i, j),
                                grad.at(i, j)});
        neck::write_csv_file(dir / "field.csv", {"r", "z", "v", "G"}, rows);
    }
    if (cfg.write_json) {
        ordered_json doc = neck::make_report("solve", cfg);
        doc["results"] = {{"Nr", grid.Nr},
                          {"Ns", grid.Ns},
                          {"map_a", grid.map_a},
                          {"first_cell", grid.first_cell},
                          {"residual", field.residual}};
        neck::write_json_file(dir / "field.json", doc);
    }
    std::printf("solved %dx%d, residual %.3e\n", grid.Nr, grid.Ns, field.residual);
    return kOk;
}

int cmd_sweep(const RunConfig& cfg, int jobs) {
    const neck::SweepResult sweep =
        neck::run_sweep(cfg.geometry, cfg.n, cfg.k, cfg.sweep_eps, cfg.Nr, cfg.Ns,
                        cfg.outer_value, jobs);

    const fs::path dir = prepare_out_dir(cfg);
    if (cfg.write_json) {
        ordered_json doc = neck::make_report("sweep", cfg);
        doc["results"] = neck::json_of(sweep);
        neck::write_json_file(dir / "sweep.json", doc);
    }
    if (cfg.write_csv) {
        std::vector<std::vector<double>> rows;
        for (const auto& p : sweep.points)
            rows.push_back({p.eps, p.max_G, static_cast<double>(p.Nr),
                            static_cast<double>(p.Ns), p.residual});
        neck::write_csv_file(dir / "sweep.csv",
                             {"eps", "max_G", "Nr", "Ns", "residual"}, rows);
    }

    std::printf("%14s %14s %10s\n", "eps", "max_G", "residual");
    for (const auto& p : sweep.points) {
        if (p.ok)
            std::printf("%14.6e %14.8e %10.2e\n", p.eps, p.max_G, p.residual);
        else
            std::printf("%14.6e %14s %10s\n", p.eps, "FAILED", "-");
    }
    std::printf("slope %.6f (reference %.6f for n=%d), r^2 %.6f\n",
                sweep.fit.slope, neck::blow_up_exponent(cfg.n), cfg.n,
                sweep.fit.r_squared);
    return kOk;
}

void print_diag(const neck::DiagnosticResult& d) {
    std::printf("%-24s %s\n", d.name.c_str(), d.pass ? "pass" : "FAIL");
    for (const auto& [key, value] : d.data)
        std::printf("    %-18s %.8e\n", key.c_str(), value);
}

int cmd_check_lemma(const RunConfig& cfg) {
    const std::vector<std::array<int, 2>> levels{{96, 12}, {192, 24}, {384, 48}};
    const neck::DiagnosticResult diag = neck::check_boundary_identity(
        cfg.geometry, cfg.n, cfg.k, levels, cfg.outer_value);

    const fs::path dir = prepare_out_dir(cfg);
    if (cfg.write_json) {
        ordered_json doc = neck::make_report("check-lemma", cfg);
        doc["results"] = neck::json_of(diag);
        neck::write_json_file(dir / "check_lemma.json", doc);
    }
    print_diag(diag);
    return diag.pass ? kOk : kDiagnosticFailed;
}

int cmd_check_q(RunConfig cfg) {
    cfg.aux.eps = cfg.geometry.eps;  // the barrier weight tracks the actual gap
    const neck::DiagnosticResult main_diag = neck::check_q_maximum(
        cfg.geometry, cfg.aux, cfg.k, cfg.Nr, cfg.Ns, cfg.outer_value, false);
    const neck::DiagnosticResult control = neck::check_q_maximum(
        cfg.geometry, cfg.aux, cfg.k, cfg.Nr, cfg.Ns, cfg.outer_value, true);

    const fs::path dir = prepare_out_dir(cfg);
    if (cfg.write_json) {
        ordered_json doc = neck::make_report("check-q", cfg);
        doc["results"] = {{"main", neck::json_of(main_diag)},
                          {"degenerate_control", neck::json_of(control)}};
        neck::write_json_file(dir / "check_q.json", doc);
    }
    print_diag(main_diag);
    print_diag(control);
    return (main_diag.pass && control.pass) ? kOk : kDiagnosticFailed;
}

int cmd_check_envelope(const RunConfig& cfg, int jobs) {
    const neck::DiagnosticResult diag =
        neck::check_envelope(cfg.geometry, cfg.n, cfg.k, cfg.sweep_eps,
                             cfg.aux.gamma, cfg.Nr, cfg.Ns, cfg.outer_value, jobs);

    const fs::path dir = prepare_out_dir(cfg);
    if (cfg.write_json) {
        ordered_json doc = neck::make_report("check-envelope", cfg);
        doc["results"] = neck::json_of(diag);
        neck::write_json_file(dir / "check_envelope.json", doc);
    }
    print_diag(diag);
    return diag.pass ? kOk : kDiagnosticFailed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Thin-neck gradient laboratory"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    int jobs = 1;
    std::vector<std::string> overrides;
    app.add_option("--config", config_path, "JSON configuration file");
    app.add_option("--out", out_dir, "output directory (overrides config)");
    app.add_option("--jobs", jobs, "parallel jobs for sweeps")
        ->check(CLI::PositiveNumber);
    app.add_option("--set", overrides,
                   "override a config value, e.g. --set geometry.eps=1e-4");

    CLI::App* sub_certify = app.add_subcommand(
        "certify", "scan the barrier sign conditions over parameter boxes");
    CLI::App* sub_solve =
        app.add_subcommand("solve", "solve one mode problem, write field CSV");
    CLI::App* sub_sweep = app.add_subcommand(
        "sweep", "solve across the eps list and fit the blow-up exponent");
    CLI::App* sub_lemma = app.add_subcommand(
        "check-lemma", "surface derivative identity under grid refinement");
    CLI::App* sub_q = app.add_subcommand(
        "check-q", "argmax location of the weighted gradient Q = F |grad u|^2");
    CLI::App* sub_env = app.add_subcommand(
        "check-envelope", "stability of the gradient envelope constant");
    CLI::App* sub_table =
        app.add_subcommand("table", "print gamma_star and blow-up rate per n");
    int n_max = 10;
    sub_table->add_option("--n-max", n_max, "largest dimension to print");
    for (CLI::App* sub : {sub_certify, sub_solve, sub_sweep, sub_lemma, sub_q,
                          sub_env, sub_table})
        sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kValidationError;
    }

    try {
        if (sub_table->parsed()) return cmd_table(n_max);

        ordered_json doc = load_config(config_path);
        for (const auto& spec : overrides) neck::apply_override(doc, spec);
        RunConfig cfg = neck::parse_config(doc);
        if (!out_dir.empty()) cfg.out_dir = out_dir;

        if (sub_certify->parsed()) return cmd_certify(cfg);
        if (sub_solve->parsed()) return cmd_solve(cfg);
        if (sub_sweep->parsed()) return cmd_sweep(cfg, jobs);
        if (sub_lemma->parsed()) return cmd_check_lemma(cfg);
        if (sub_q->parsed()) return cmd_check_q(cfg);
        if (sub_env->parsed()) return cmd_check_envelope(cfg, jobs);
        throw std::invalid_argument("no subcommand given");
    } catch (const neck::SolveError& e) {
        emit_error("numerical", e.what());
        return kNumericalError;
    } catch (const std::invalid_argument& e) {
        emit_error("validation", e.what());
        return kValidationError;
    } catch (const std::domain_error& e) {
        emit_error("validation", e.what());
        return kValidationError;
    } catch (const std::exception& e) {
        emit_error("runtime", e.what());
        return kNumericalError;
    }
}

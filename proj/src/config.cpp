#include "neck/config.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

namespace neck {

namespace {

using nlohmann::ordered_json;

void reject_unknown(const ordered_json& obj, const std::string& where,
                    const std::set<std::string>& allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!allowed.count(it.key()))
            throw std::invalid_argument("config: unknown key " + where + it.key());
}

double get_num(const ordered_json& obj, const std::string& where,
               const std::string& key, double fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj.at(key).is_number())
        throw std::invalid_argument("config: " + where + key + " must be a number");
    return obj.at(key).get<double>();
}

int get_int(const ordered_json& obj, const std::string& where,
            const std::string& key, int fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj.at(key).is_number_integer())
        throw std::invalid_argument("config: " + where + key + " must be an integer");
    return obj.at(key).get<int>();
}

std::vector<double> log_spaced(double lo, double hi, int count) {
    std::vector<double> out;
    out.reserve(count);
    for (int i = 0; i < count; ++i) {
        const double t = (count == 1) ? 1.0 : static_cast<double>(i) / (count - 1);
        out.push_back(std::exp(std::log(lo) + t * (std::log(hi) - std::log(lo))));
    }
    return out;
}

}  // namespace

RunConfig parse_config(const ordered_json& doc) {
    if (!doc.is_object())
        throw std::invalid_argument("config: top level must be a JSON object");
    reject_unknown(doc, "",
                   {"geometry", "problem", "aux", "sweep", "grid", "output"});

    RunConfig cfg;

    const ordered_json empty = ordered_json::object();
    const ordered_json& g = doc.contains("geometry") ? doc.at("geometry") : empty;
    reject_unknown(g, "geometry.",
                   {"eps", "lambda1", "lambda2", "c3_top", "c3_bot", "R"});
    cfg.geometry.eps = get_num(g, "geometry.", "eps", cfg.geometry.eps);
    cfg.geometry.lambda1 = get_num(g, "geometry.", "lambda1", cfg.geometry.lambda1);
    cfg.geometry.lambda2 = get_num(g, "geometry.", "lambda2", cfg.geometry.lambda2);
    cfg.geometry.c3_top = get_num(g, "geometry.", "c3_top", cfg.geometry.c3_top);
    cfg.geometry.c3_bot = get_num(g, "geometry.", "c3_bot", cfg.geometry.c3_bot);
    cfg.geometry.R = get_num(g, "geometry.", "R", cfg.geometry.R);

    const ordered_json& p = doc.contains("problem") ? doc.at("problem") : empty;
    reject_unknown(p, "problem.", {"n", "k", "outer_value"});
    cfg.n = get_int(p, "problem.", "n", cfg.n);
    cfg.k = get_int(p, "problem.", "k", cfg.k);
    cfg.outer_value = get_num(p, "problem.", "outer_value", cfg.geometry.R);

    cfg.aux = AuxParams::defaults(cfg.n);
    const ordered_json& a = doc.contains("aux") ? doc.at("aux") : empty;
    reject_unknown(a, "aux.", {"gamma", "A", "b", "delta", "eps", "eta", "xi0"});
    cfg.aux.gamma = get_num(a, "aux.", "gamma", cfg.aux.gamma);
    cfg.aux.A = get_num(a, "aux.", "A", a.contains("gamma")
                                            ? 2.05 * cfg.aux.gamma
                                            : cfg.aux.A);
    cfg.aux.b = get_num(a, "aux.", "b", cfg.aux.b);
    cfg.aux.delta = get_num(a, "aux.", "delta", cfg.aux.delta);
    cfg.aux.eps = get_num(a, "aux.", "eps", cfg.aux.eps);
    cfg.aux.eta = get_num(a, "aux.", "eta", cfg.aux.eta);
    cfg.aux.xi0 = get_num(a, "aux.", "xi0",
                          a.contains("eta") ? AuxParams::default_xi0(cfg.n, cfg.aux.eta)
                                            : cfg.aux.xi0);

    const ordered_json& s = doc.contains("sweep") ? doc.at("sweep") : empty;
    reject_unknown(s, "sweep.", {"eps_list", "eps_min", "eps_max", "count"});
    if (s.contains("eps_list")) {
        if (s.contains("eps_min") || s.contains("eps_max") || s.contains("count"))
            throw std::invalid_argument(
                "config: sweep.eps_list excludes eps_min/eps_max/count");
        if (!s.at("eps_list").is_array())
            throw std::invalid_argument("config: sweep.eps_list must be an array");
        cfg.sweep_eps.clear();
        for (const auto& v : s.at("eps_list")) {
            if (!v.is_number())
                throw std::invalid_argument(
                    "config: sweep.eps_list entries must be numbers");
            cfg.sweep_eps.push_back(v.get<double>());
        }
    } else {
        const double lo = get_num(s, "sweep.", "eps_min", 1e-4);
        const double hi = get_num(s, "sweep.", "eps_max", 1e-2);
        const int count = get_int(s, "sweep.", "count", 8);
        if (!(lo > 0.0) || !(hi > lo))
            throw std::invalid_argument("config: sweep range needs 0 < eps_min < eps_max");
        if (count < 2)
            throw std::invalid_argument("config: sweep.count must be >= 2");
        cfg.sweep_eps = log_spaced(lo, hi, count);
    }

    const ordered_json& gr = doc.contains("grid") ? doc.at("grid") : empty;
    reject_unknown(gr, "grid.", {"Nr", "Ns"});
    cfg.Nr = get_int(gr, "grid.", "Nr", cfg.Nr);
    cfg.Ns = get_int(gr, "grid.", "Ns", cfg.Ns);

    const ordered_json& o = doc.contains("output") ? doc.at("output") : empty;
    reject_unknown(o, "output.", {"directory", "formats"});
    if (o.contains("directory")) {
        if (!o.at("directory").is_string())
            throw std::invalid_argument("config: output.directory must be a string");
        cfg.out_dir = o.at("directory").get<std::string>();
    }
    if (o.contains("formats")) {
        if (!o.at("formats").is_array())
            throw std::invalid_argument("config: output.formats must be an array");
        cfg.write_json = false;
        cfg.write_csv = false;
        for (const auto& f : o.at("formats")) {
            const std::string name = f.is_string() ? f.get<std::string>() : "";
            if (name == "json")
                cfg.write_json = true;
            else if (name == "csv")
                cfg.write_csv = true;
            else
                throw std::invalid_argument(
                    "config: output.formats entries must be \"json\" or \"csv\"");
        }
    }

    cfg.geometry.validate();
    if (cfg.n < 3) throw std::invalid_argument("config: problem.n must be >= 3");
    if (cfg.k < 0) throw std::invalid_argument("config: problem.k must be >= 0");
    return cfg;
}

RunConfig default_config() { return parse_config(ordered_json::object()); }

nlohmann::ordered_json RunConfig::resolved() const {
    ordered_json doc;
    doc["geometry"] = {{"eps", geometry.eps},   {"lambda1", geometry.lambda1},
                       {"lambda2", geometry.lambda2}, {"c3_top", geometry.c3_top},
                       {"c3_bot", geometry.c3_bot},   {"R", geometry.R}};
    doc["problem"] = {{"n", n}, {"k", k}, {"outer_value", outer_value}};
    doc["aux"] = {{"gamma", aux.gamma}, {"A", aux.A},     {"b", aux.b},
                  {"delta", aux.delta}, {"eps", aux.eps}, {"eta", aux.eta},
                  {"xi0", aux.xi0}};
    doc["sweep"] = {{"eps_list", sweep_eps}};
    doc["grid"] = {{"Nr", Nr}, {"Ns", Ns}};
    ordered_json formats = ordered_json::array();
    if (write_json) formats.push_back("json");
    if (write_csv) formats.push_back("csv");
    doc["output"] = {{"directory", out_dir}, {"formats", formats}};
    return doc;
}

void apply_override(ordered_json& doc, const std::string& spec) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos || eq == 0)
        throw std::invalid_argument("override must look like path.to.key=value: " +
                                    spec);
    const std::string path = spec.substr(0, eq);
    const std::string raw = spec.substr(eq + 1);

    ordered_json value = ordered_json::parse(raw, nullptr, false);
    if (value.is_discarded()) value = raw;

    ordered_json* node = &doc;
    std::size_t pos = 0;
    while (true) {
        const auto dot = path.find('.', pos);
        const std::string key = path.substr(pos, dot - pos);
        if (key.empty())
            throw std::invalid_argument("override has an empty path segment: " + spec);
        if (dot == std::string::npos) {
            (*node)[key] = value;
            return;
        }
        node = &(*node)[key];
        if (!node->is_object()) *node = ordered_json::object();
        pos = dot + 1;
    }
}

}  // namespace neck

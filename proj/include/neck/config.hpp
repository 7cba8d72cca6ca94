#pragma once

// Run configuration: a single JSON document with six blocks (geometry,
// problem, aux, sweep, grid, output), each optional, each strictly
// validated.  Unknown keys anywhere are rejected so typos fail loudly
// instead of silently running defaults.  parse_config materializes every
// default, and resolved() renders the fully materialized document that
// gets embedded in reports.

#include <string>
#include <vector>

#include "json.hpp"
#include "neck/certificate.hpp"
#include "neck/geometry.hpp"

namespace neck {

struct RunConfig {
    NeckGeometry geometry;

    int n = 3;
    int k = 1;
    double outer_value = 0.5;  // constant Dirichlet data at r = R; defaults to R

    AuxParams aux;  // defaults to AuxParams::defaults(n)

    std::vector<double> sweep_eps;  // default: 8 log-spaced in [1e-4, 1e-2]

    int Nr = 384;
    int Ns = 32;

    std::string out_dir = "out";
    bool write_json = true;
    bool write_csv = true;

    nlohmann::ordered_json resolved() const;
};

// Strict parse: unknown blocks or keys, or values of the wrong type,
// throw std::invalid_argument.
RunConfig parse_config(const nlohmann::ordered_json& doc);

// The all-defaults configuration (empty JSON object).
RunConfig default_config();

// Applies one "path.to.key=value" override to a JSON document in place.
// The value is parsed as JSON when possible and treated as a string
// otherwise; the path is created if absent (validity is checked by the
// subsequent parse_config).
void apply_override(nlohmann::ordered_json& doc, const std::string& spec);

}  // namespace neck

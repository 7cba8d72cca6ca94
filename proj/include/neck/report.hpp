#pragma once

// Report emission.  Every command writes one JSON report of the shape
//   {"command": ..., "config": <resolved config>, "results": ..., "meta": ...}
// where "meta" holds the timestamp and nothing the run's numbers depend
// on, so two runs of the same build and config agree byte for byte once
// "meta" is dropped.  Bulk numeric output goes to CSV.

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "neck/certificate.hpp"
#include "neck/config.hpp"
#include "neck/experiments.hpp"

namespace neck {

nlohmann::ordered_json json_of(const RateFit& fit);
nlohmann::ordered_json json_of(const DiagnosticResult& diag);
nlohmann::ordered_json json_of(const SweepResult& sweep);
nlohmann::ordered_json json_of(const CertificateReport& report);

// Report skeleton with command, resolved config, empty results, and meta.
nlohmann::ordered_json make_report(const std::string& command,
                                   const RunConfig& cfg);

void write_json_file(const std::filesystem::path& path,
                     const nlohmann::ordered_json& doc);

// CSV with a header row; numeric cells printed with %.17g.
void write_csv_file(const std::filesystem::path& path,
                    const std::vector<std::string>& header,
                    const std::vector<std::vector<double>>& rows);

// CSV whose first column is a label (used by the certificate point dump).
void write_csv_file(const std::filesystem::path& path,
                    const std::vector<std::string>& header,
                    const std::vector<std::pair<std::string, std::vector<double>>>& rows);

std::string csv_num(double x);

std::string iso_timestamp();

}  // namespace neck

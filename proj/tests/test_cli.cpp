#include "doctest.h"

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

namespace {

using nlohmann::ordered_json;

struct RunResult {
    int code = -1;
    std::string out;  // stdout and stderr interleaved
};

RunResult run_cli(const std::string& args) {
    const char* bin = std::getenv("NECKLAB_BIN");
    REQUIRE_MESSAGE(bin != nullptr, "NECKLAB_BIN must point at the binary");
    const std::string cmd = std::string(bin) + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    RunResult res;
    char buf[4096];
    std::size_t got;
    while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) res.out.append(buf, got);
    const int status = pclose(pipe);
    res.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return res;
}

std::string temp_dir() {
    char tmpl[] = "/tmp/necklab_cli_XXXXXX";
    REQUIRE(mkdtemp(tmpl) != nullptr);
    return tmpl;
}

std::string write_config(const std::string& dir, const ordered_json& doc) {
    const std::string path = dir + "/config.json";
    std::ofstream out(path);
    out << doc.dump(2) << "\n";
    REQUIRE(out.good());
    return path;
}

ordered_json load_json(const std::string& path) {
    std::ifstream in(path);
    REQUIRE_MESSAGE(in.good(), path.c_str());
    return ordered_json::parse(in);
}

// Strips the parts that legitimately differ between two runs of the same
// config: the meta block and the output directory each run was pointed at.
ordered_json comparable(ordered_json doc) {
    doc.erase("meta");
    doc["config"]["output"].erase("directory");
    return doc;
}

bool contains(const std::string& hay, const std::string& needle) {
    return hay.find(needle) != std::string::npos;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("running without a subcommand is a usage error") {
    const RunResult res = run_cli("");
    CHECK(res.code == 1);
}

TEST_CASE("table prints the closed-form exponents") {
    const RunResult res = run_cli("table --n-max 6");
    CHECK(res.code == 0);
    CHECK(contains(res.out, "0.414214"));
    CHECK(contains(res.out, "-0.292893"));
    CHECK(contains(res.out, "0.701562"));
    CHECK(contains(res.out, "-0.149219"));
}

TEST_CASE("certify writes a complete report and exits clean") {
    const std::string dir = temp_dir();
    const RunResult res = run_cli("certify --out " + dir);
    CHECK(res.code == 0);
    CHECK(contains(res.out, "phi_crit"));

    const ordered_json doc = load_json(dir + "/certify.json");
    CHECK(doc.at("command") == "certify");
    CHECK(doc.contains("config"));
    CHECK(doc.contains("meta"));
    CHECK(doc.at("results").at("checks").size() == 3);

    std::ifstream csv(dir + "/certify_points.csv");
    std::string header;
    std::getline(csv, header);
    CHECK(header == "check,x,y,value");
}

TEST_CASE("reports are identical across runs apart from the meta block") {
    const std::string d1 = temp_dir(), d2 = temp_dir();
    CHECK(run_cli("certify --out " + d1).code == 0);
    CHECK(run_cli("certify --out " + d2).code == 0);
    const ordered_json a = comparable(load_json(d1 + "/certify.json"));
    const ordered_json b = comparable(load_json(d2 + "/certify.json"));
    CHECK(a.dump() == b.dump());
}

TEST_CASE("solve writes the field table and a residual sidecar") {
    const std::string dir = temp_dir();
    const RunResult res = run_cli("solve --out " + dir);
    CHECK(res.code == 0);

    std::ifstream csv(dir + "/field.csv");
    std::string header;
    std::getline(csv, header);
    CHECK(header == "r,z,v,G");

    const ordered_json doc = load_json(dir + "/field.json");
    CHECK(doc.at("results").at("Nr") == 384);
    CHECK(doc.at("results").at("residual").get<double>() <= 1e-10);
}

TEST_CASE("config file values land in the report") {
    const std::string dir = temp_dir();
    const std::string cfg = write_config(
        dir, ordered_json{{"geometry", {{"eps", 5e-4}}}});
    const RunResult res = run_cli("certify --config " + cfg + " --out " + dir);
    CHECK(res.code == 0);
    const ordered_json doc = load_json(dir + "/certify.json");
    CHECK(doc.at("config").at("geometry").at("eps").get<double>() == 5e-4);
}

TEST_CASE("set overrides reach the resolved config") {
    const std::string dir = temp_dir();
    const RunResult res =
        run_cli("certify --set aux.eta=0.01 --out " + dir);
    CHECK(res.code == 0);
    const ordered_json doc = load_json(dir + "/certify.json");
    CHECK(doc.at("config").at("aux").at("eta").get<double>() == 0.01);
}

TEST_CASE("unknown config keys are rejected with exit 1") {
    const std::string dir = temp_dir();
    const std::string cfg = write_config(
        dir, ordered_json{{"geometry", {{"epsilon", 1e-3}}}});
    const RunResult res = run_cli("certify --config " + cfg + " --out " + dir);
    CHECK(res.code == 1);
    CHECK(contains(res.out, "unknown key"));
}

TEST_CASE("a two-point eps list cannot support the fit") {
    const std::string dir = temp_dir();
    const std::string cfg = write_config(
        dir, ordered_json{{"sweep", {{"eps_list", {1e-2, 1e-4}}}}});
    const RunResult res = run_cli("sweep --config " + cfg + " --out " + dir);
    CHECK(res.code == 1);
}

TEST_CASE("sweep report is independent of the job count") {
    const std::string d1 = temp_dir(), d2 = temp_dir();
    const std::string cfg = write_config(
        d1, ordered_json{{"grid", {{"Nr", 128}, {"Ns", 16}}}});
    CHECK(run_cli("sweep --config " + cfg + " --jobs 1 --out " + d1).code == 0);
    CHECK(run_cli("sweep --config " + cfg + " --jobs 3 --out " + d2).code == 0);
    const ordered_json a = comparable(load_json(d1 + "/sweep.json"));
    const ordered_json b = comparable(load_json(d2 + "/sweep.json"));
    CHECK(a.dump() == b.dump());
}

TEST_CASE("sweep prints the fitted slope next to its reference") {
    const std::string dir = temp_dir();
    const std::string cfg = write_config(
        dir, ordered_json{{"grid", {{"Nr", 128}, {"Ns", 16}}}});
    const RunResult res = run_cli("sweep --config " + cfg + " --jobs 3 --out " + dir);
    CHECK(res.code == 0);
    CHECK(contains(res.out, "reference -0.292893 for n=3"));
}

TEST_CASE("lemma ladder passes on the stock pair and rejects cubic terms") {
    const std::string dir = temp_dir();
    CHECK(run_cli("check-lemma --out " + dir).code == 0);
    const ordered_json doc = load_json(dir + "/check_lemma.json");
    CHECK(doc.at("results").at("pass") == true);

    const RunResult bad =
        run_cli("check-lemma --set geometry.c3_top=0.1 --out " + dir);
    CHECK(bad.code == 1);
}

TEST_CASE("weighted argmax check fails wide and passes narrow") {
    const std::string dir = temp_dir();
    const RunResult wide = run_cli("check-q --out " + dir);
    CHECK(wide.code == 3);
    const ordered_json doc = load_json(dir + "/check_q.json");
    CHECK(doc.at("results").at("main").at("pass") == false);
    CHECK(doc.at("results").at("degenerate_control").at("pass") == true);

    const RunResult narrow =
        run_cli("check-q --set geometry.eps=1e-4 --out " + dir);
    CHECK(narrow.code == 0);
}

TEST_CASE("validation failures emit a structured error record") {
    const std::string dir = temp_dir();
    const RunResult res =
        run_cli("certify --set geometry.lambda1=0.4 --out " + dir);
    CHECK(res.code == 1);
    CHECK(contains(res.out, "\"error\""));
    CHECK(contains(res.out, "paraboloid"));
}

}  // TEST_SUITE

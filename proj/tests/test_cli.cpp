#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "helpers.hpp"
#include "json.hpp"
#include "twwlab/core.hpp"
#include "twwlab/semigrid.hpp"

using namespace twwlab;
using namespace twwlab::testing;

namespace {

struct RunResult {
    int exitCode;
    std::string out;
};

RunResult run_cli(const std::string& args) {
    std::string outPath = "/tmp/twwlab_cli_out.txt";
    std::string cmd = std::string(TWWLAB_CLI_PATH) + " " + args + " > " + outPath + " 2>/dev/null";
    int status = std::system(cmd.c_str());
    std::ifstream in(outPath);
    std::ostringstream buf;
    buf << in.rdbuf();
    return {WEXITSTATUS(status), buf.str()};
}

std::string write_tmp(const std::string& name, const std::string& content) {
    std::string path = "/tmp/" + name;
    std::ofstream out(path, std::ios::binary);
    out << content;
    return path;
}

// minimal structural validation against the shipped schema documents
void check_against_schema(const nlohmann::json& schema, const nlohmann::json& doc) {
    REQUIRE(schema.contains("required"));
    for (const auto& key : schema["required"]) REQUIRE(doc.contains(key.get<std::string>()));
    for (auto& [key, spec] : schema["properties"].items()) {
        if (!doc.contains(key)) continue;
        std::string type = spec["type"];
        if (type == "array") CHECK(doc[key].is_array());
        if (type == "integer") CHECK(doc[key].is_number_integer());
        if (type == "string") CHECK(doc[key].is_string());
        if (type == "object") CHECK(doc[key].is_object());
    }
}

}  // namespace

TEST_CASE("cli round trips obs files byte-exactly") {
    auto S = generate_semigrid(scheme_of(RType::Neq), 2, 2);
    std::string path = write_tmp("cli_rt.obs", write_obs(S));
    auto gen = run_cli("semigrid gen --scheme " + std::to_string(scheme_of(RType::Neq).id()) +
                       " --m 2 --n 2");
    CHECK(gen.exitCode == 0);
    CHECK(gen.out == write_obs(S));
    CHECK(read_obs(gen.out) == S);
    (void)path;
}

TEST_CASE("cli exact width and exit codes") {
    std::string one = write_tmp("cli_one.obs", write_obs(OrderedStructure::graph(1, {})));
    auto res = run_cli("tww-exact " + one);
    CHECK(res.exitCode == 0);
    CHECK(res.out == "0\n");

    auto usage = run_cli("tww-exact");
    CHECK(usage.exitCode == 2);
    auto missing = run_cli("tww-exact /tmp/definitely_missing.obs");
    CHECK(missing.exitCode == 1);
    std::string big = write_tmp("cli_big.obs", write_obs(clique(11)));
    CHECK(run_cli("tww-exact " + big).exitCode == 1);  // over the cap
}

TEST_CASE("cli scheme count") {
    auto res = run_cli("semigrid schemes --sig graph");
    CHECK(res.exitCode == 0);
    CHECK(res.out == "256\n");
}

TEST_CASE("cli witness json validates against the shipped schema") {
    auto sg = generate_semigrid(scheme_of(RType::Neq), 6, 6);
    std::string path = write_tmp("cli_neq66.obs", write_obs(sg));
    auto res = run_cli("algo " + path + " --k 1 --t 2 --json");
    CHECK(res.exitCode == 0);
    auto doc = nlohmann::json::parse(res.out);
    CHECK(doc["outcome"]["kind"] == "witness");
    std::ifstream schemaIn(std::string(TWWLAB_SOURCE_DIR) + "/docs/schemas/witness.schema.json");
    REQUIRE(schemaIn.good());
    auto schema = nlohmann::json::parse(schemaIn);
    check_against_schema(schema, doc["outcome"]["witness"]);

    std::ifstream reportIn(std::string(TWWLAB_SOURCE_DIR) + "/docs/schemas/report.schema.json");
    REQUIRE(reportIn.good());
    check_against_schema(nlohmann::json::parse(reportIn), doc);
}

TEST_CASE("cli sequence output verifies") {
    std::string path = write_tmp("cli_k4.obs", write_obs(clique(4)));
    auto res = run_cli("tww-approx " + path + " --seq-out /tmp/cli_k4.seq");
    CHECK(res.exitCode == 0);
    auto verify = run_cli("verify-seq " + path + " /tmp/cli_k4.seq");
    CHECK(verify.exitCode == 0);
    CHECK(verify.out == "0\n");
}

TEST_CASE("cli decode inverts gen") {
    auto sch = scheme_of(RType::Le);
    std::string cells = write_tmp("cli_cells.txt", "1 2\n2 1\n");
    auto gen = run_cli("semigrid gen --scheme " + std::to_string(sch.id()) +
                       " --m 2 --n 2 --cells " + cells);
    CHECK(gen.exitCode == 0);
    std::string gsPath = write_tmp("cli_gs.obs", gen.out);
    auto dec = run_cli("semigrid decode " + gsPath + " --scheme " + std::to_string(sch.id()));
    CHECK(dec.exitCode == 0);
    CHECK(dec.out == "m 2 n 2\n1 2\n2 1\n");
}

TEST_CASE("cli census emits csv") {
    auto res = run_cli("census --n-max 3");
    CHECK(res.exitCode == 0);
    CHECK(res.out.rfind("n,count,millis\n", 0) == 0);
    CHECK(res.out.find("3,8,") != std::string::npos);
}

TEST_CASE("cli model checking") {
    std::string phi = write_tmp("cli_phi.txt", "(forall x (exists y (<= x y)))");
    std::string s = write_tmp("cli_p3.obs", write_obs(path(3)));
    auto res = run_cli("mc --formula " + phi + " --structure " + s);
    CHECK(res.exitCode == 0);
    CHECK(res.out == "true\n");
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

#include "json.hpp"

#include "mb/config.hpp"

namespace {

std::string bin_path() {
    const char* p = std::getenv("MBISECT_BIN");
    REQUIRE(p != nullptr);
    return p;
}

std::string config_dir() {
    const char* p = std::getenv("MB_CONFIG_DIR");
    REQUIRE(p != nullptr);
    return p;
}

struct RunOutput {
    int exit_code = -1;
    std::string stdout_text;
};

RunOutput run_cli(const std::string& args) {
    std::string out_file = std::string("/tmp/mb_cli_out_") + std::to_string(::getpid()) + ".txt";
    std::string cmd = bin_path() + " " + args + " > " + out_file + " 2>&1";
    int rc = std::system(cmd.c_str());
    RunOutput r;
    r.exit_code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    std::ifstream in(out_file);
    std::stringstream ss;
    ss << in.rdbuf();
    r.stdout_text = ss.str();
    std::remove(out_file.c_str());
    return r;
}

std::string write_temp_config(const std::string& name, const std::string& body) {
    std::string path = "/tmp/" + name;
    std::ofstream out(path);
    out << body;
    return path;
}

int count_lines(const std::string& path) {
    std::ifstream in(path);
    int n = 0;
    std::string line;
    while (std::getline(in, line))
        if (!line.empty()) ++n;
    return n;
}

} // namespace

TEST_CASE("solve reproduces the closed-form run end to end") {
    std::string trace = "/tmp/mb_test_trace.csv";
    std::string boxes = "/tmp/mb_test_boxes.jsonl";
    RunOutput r = run_cli("solve " + config_dir() + "/example1.json --trace " + trace +
                          " --boxes " + boxes);
    CHECK(r.exit_code == 0);
    CHECK(r.stdout_text.find("status: converged") != std::string::npos);
    CHECK(r.stdout_text.find("iterations: 50") != std::string::npos);
    CHECK(r.stdout_text.find("preconditionings: 0") != std::string::npos);

    // trace rows equal the iteration count and the last center is the root
    CHECK(count_lines(trace) == 51); // header + 50 records
    std::ifstream in(trace);
    std::string line, last;
    std::getline(in, line);
    CHECK(line.rfind("k,x_lo,x_hi,y_lo,y_hi,c_x,c_y,residual", 0) == 0);
    while (std::getline(in, line))
        if (!line.empty()) last = line;
    double cx = 0, cy = 0;
    {
        // columns: k, x_lo, x_hi, y_lo, y_hi, c_x, c_y, ...
        std::stringstream ss(last);
        std::string tok;
        for (int col = 0; std::getline(ss, tok, ','); ++col) {
            if (col == 5) cx = std::strtod(tok.c_str(), nullptr);
            if (col == 6) cy = std::strtod(tok.c_str(), nullptr);
        }
    }
    CHECK(cx == std::ldexp(1.0, -50));
    CHECK(cy == 1.0 - std::ldexp(1.0, -50));

    // boxes are nested, each contained in the previous
    CHECK(count_lines(boxes) == 50);
    {
        std::ifstream bin_in(boxes);
        std::string row;
        bool have_prev = false;
        double plo[2] = {0, 0}, phi[2] = {0, 0};
        while (std::getline(bin_in, row)) {
            if (row.empty()) continue;
            nlohmann::json j = nlohmann::json::parse(row);
            REQUIRE(j["box"].size() == 2);
            double lo[2], hi[2];
            for (int d = 0; d < 2; ++d) {
                lo[d] = j["box"][d][0].get<double>();
                hi[d] = j["box"][d][1].get<double>();
            }
            if (have_prev)
                for (int d = 0; d < 2; ++d) {
                    REQUIRE(lo[d] >= plo[d]);
                    REQUIRE(hi[d] <= phi[d]);
                }
            for (int d = 0; d < 2; ++d) {
                plo[d] = lo[d];
                phi[d] = hi[d];
            }
            have_prev = true;
        }
    }
    std::remove(trace.c_str());
    std::remove(boxes.c_str());
}

TEST_CASE("solve respects flag overrides") {
    RunOutput r = run_cli("solve " + config_dir() + "/example1.json --delta 1e-2");
    CHECK(r.exit_code == 0);
    CHECK(r.stdout_text.find("iterations: 7") != std::string::npos);
    CHECK(r.stdout_text.find("0.0078125") != std::string::npos);

    RunOutput quiet = run_cli("solve " + config_dir() + "/example1.json --delta 1 --quiet");
    CHECK(quiet.exit_code == 0);
    CHECK(quiet.stdout_text.empty());
}

TEST_CASE("solve on the sixth reference map") {
    RunOutput r = run_cli("solve " + config_dir() + "/f6.json");
    CHECK((r.exit_code == 0 || r.exit_code == 3));
    CHECK(r.stdout_text.find("0.51003086298715") != std::string::npos);
    CHECK(r.stdout_text.find("0.04899691370") != std::string::npos);
}

TEST_CASE("check-box") {
    CHECK(run_cli("check-box " + config_dir() + "/example1.json").exit_code == 0);
    CHECK(run_cli("check-box " + config_dir() + "/f4.json").exit_code == 0);

    std::string bad = write_temp_config("mb_bad_box.json", R"json({
      "variables": ["x", "y"],
      "functions": ["x - 5", "y"],
      "box": [[0, 1], [0, 1]]
    })json");
    RunOutput r = run_cli("check-box " + bad);
    CHECK(r.exit_code == 2);
    std::remove(bad.c_str());
}

TEST_CASE("eval-box extensions") {
    RunOutput nat = run_cli("eval-box " + config_dir() + "/example1.json --component 0 --extension natural");
    CHECK(nat.exit_code == 0);
    CHECK(nat.stdout_text.find("[-1, 1]") != std::string::npos);

    std::string hump = write_temp_config("mb_hump.json", R"json({
      "variables": ["x"],
      "functions": ["x*(1-x)"],
      "box": [[0, 1]]
    })json");
    RunOutput aff = run_cli("eval-box " + hump + " --component 0 --extension affine -N 1");
    CHECK(aff.exit_code == 0);
    CHECK(aff.stdout_text.find("[0, 0.5]") != std::string::npos);
    RunOutput nat2 = run_cli("eval-box " + hump + " --component 0 --extension natural");
    CHECK(nat2.exit_code == 0);
    CHECK(nat2.stdout_text.find("[0, 1]") != std::string::npos);
    std::remove(hump.c_str());
}

TEST_CASE("config validation failures exit 1 naming the field") {
    std::string bad = write_temp_config("mb_bad_rows.json", R"json({
      "variables": ["x", "y"],
      "functions": ["x", "y"],
      "box": [[0, 1], [0, 1], [0, 1]]
    })json");
    RunOutput r = run_cli("solve " + bad);
    CHECK(r.exit_code == 1);
    CHECK(r.stdout_text.find("box") != std::string::npos);
    std::remove(bad.c_str());

    std::string syntax = write_temp_config("mb_bad_expr.json", R"json({
      "variables": ["x", "y"],
      "functions": ["x ++* 1", "y"],
      "box": [[0, 1], [0, 1]]
    })json");
    RunOutput r2 = run_cli("solve " + syntax);
    CHECK(r2.exit_code == 1);
    CHECK(r2.stdout_text.find("functions") != std::string::npos);
    std::remove(syntax.c_str());

    CHECK(run_cli("solve /tmp/does_not_exist_mb.json").exit_code == 1);
}

#include "strhom/cli.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using strhom::cli::run;
namespace fs = std::filesystem;

namespace {

struct Result {
    int code;
    std::string out, err;
};

fs::path scratch() {
    static fs::path dir = [] {
        fs::path d = fs::temp_directory_path() / "strhom_cli_test";
        fs::create_directories(d);
        setenv(strhom::cli::kOutputDirEnv, d.c_str(), 1);
        return d;
    }();
    return dir;
}

Result call(std::vector<std::string> args) {
    scratch();
    std::ostringstream out, err;
    int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

bool contains(const std::string& hay, const std::string& needle) { return hay.find(needle) != std::string::npos; }

fs::path write_file(const std::string& name, const std::string& body) {
    fs::path p = scratch() / name;
    std::ofstream(p) << body;
    return p;
}

}  // namespace

TEST_CASE("dga-homology examples") {
    auto r = call({"dga-homology", "--builtin", "hopf", "--d", "2", "--a", "4.5", "--h0", "--wmax", "4"});
    CHECK(r.code == 0);
    CHECK(contains(r.out, "[1,2,2,2,2]"));

    r = call({"dga-homology", "--builtin", "unlink", "--d", "3", "--z2star", "3", "--degree", "2", "--a", "8.5", "--json"});
    CHECK(r.code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["homology"]["2"] == 4);

    // No generator is shorter than 1.5, so only the unit survives.
    auto spec = write_file("long.json", R"({"name": "long", "generators": [
        {"id": "x", "degree": 0, "length": "2", "weight": 1},
        {"id": "y", "degree": 1, "length": "3", "weight": 1}], "diff": {}})");
    r = call({"dga-homology", "--spec", spec.string(), "--degree", "0", "--a", "1.5", "--csv"});
    CHECK(r.code == 0);
    CHECK(r.out == "degree,dim\n0,1\n");
}

TEST_CASE("exit codes") {
    auto r = call({"dga-homology", "--builtin", "hopf", "--d", "2", "--degree", "0", "--a", "4"});
    CHECK(r.code == strhom::cli::kExitInvalidWindow);

    // D(y) = x and D(x) = z: D^2 != 0.
    auto bad = write_file("bad.json", R"({"name": "bad", "generators": [
        {"id": "z", "degree": 0, "length": "1", "weight": 1},
        {"id": "x", "degree": 1, "length": "2", "weight": 1},
        {"id": "y", "degree": 2, "length": "3", "weight": 1}],
        "diff": {"x": [{"coeff": "1", "word": ["z"]}], "y": [{"coeff": "1", "word": ["x"]}]}})");
    r = call({"dga-homology", "--spec", bad.string(), "--degree", "0", "--a", "5.5"});
    CHECK(r.code == strhom::cli::kExitInvariant);
    CHECK(contains(r.err, "invariant"));

    CHECK(call({"cord", "--builtin", "unlink2", "--wmax", "4", "--kmax", "2"}).code == strhom::cli::kExitUsage);
    CHECK(call({"no-such-command"}).code == strhom::cli::kExitUsage);
    CHECK(call({"dga-homology", "--builtin", "hopf", "--json", "--csv"}).code == strhom::cli::kExitUsage);
    CHECK(call({"--help"}).code == 0);
}

TEST_CASE("distinguish") {
    auto r = call({"distinguish", "--d", "2"});
    CHECK(contains(r.out, "hopf   [1,2,2,2,2]"));
    CHECK(contains(r.out, "unlink [1,2,4,8,16]"));
    CHECK(contains(r.out, "DISTINCT at w = 2"));
    r = call({"distinguish", "--d", "3", "--json"});
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["hopf"] == 2);
    CHECK(j["unlink"] == 4);
    CHECK(j["verdict"] == "DISTINCT");
    r = call({"distinguish", "--d", "5"});
    CHECK(contains(r.out, "homology in degree 6"));
    CHECK(contains(r.out, "DISTINCT at degree 6"));
}

TEST_CASE("chords") {
    auto r = call({"chords", "--builtin", "hopf", "--d", "2", "--a", "3.5"});
    CHECK(r.code == 0);
    CHECK(contains(r.out, "lengths: 1 2 3\n"));
    r = call({"chords", "--builtin", "unlink", "--d", "2", "--z2star", "3", "--a", "4", "--json"});
    auto j = nlohmann::json::parse(r.out);
    REQUIRE(j["lengths"].size() == 3);
    CHECK(std::abs(j["lengths"][2].get<double>() - std::sqrt(13.0)) < 1e-6);
    CHECK(j["chords"][0].contains("multiplicity"));
    r = call({"chords", "--builtin", "hopf", "--d", "2", "--a", "3.5", "--m", "2"});
    CHECK(contains(r.out, "sums of 2 below a: 2 3\n"));
    // a on the spectrum is flagged.
    r = call({"chords", "--builtin", "hopf", "--d", "2", "--a", "2", "--m", "2"});
    CHECK(contains(r.err, "lies in the length spectrum"));

    auto cfg = write_file("circle.json", R"({"name": "circle", "components": [
        {"center": [0, 0], "frame": [[1, 0], [0, 1]], "radius": 1}]})");
    r = call({"chords", "--config", cfg.string(), "--csv"});
    CHECK(r.code == 0);
    CHECK(contains(r.out, "0-0,2,2,"));
}

TEST_CASE("cord") {
    auto r = call({"cord", "--builtin", "hopf_link", "--wmax", "4", "--compare"});
    CHECK(r.code == 0);
    CHECK(contains(r.out, "\nMATCH\n"));
    r = call({"cord", "--builtin", "unknot", "--wmax", "3"});
    CHECK(contains(r.out, "[1,0,0,0]"));
    r = call({"cord", "--builtin", "unlink2", "--wmax", "3", "--compare", "--csv"});
    CHECK(r.out == "w,cord_dim,h0_dim,match\n0,1,1,true\n1,2,2,true\n2,4,4,true\n3,8,8,true\n");
}

TEST_CASE("specseq") {
    auto r = call({"specseq", "--builtin", "hopf", "--d", "2", "--a", "4.5", "--json"});
    CHECK(r.code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["converges"] == true);
    std::size_t col = 0;
    for (const auto& e : j["pages"][0]["dims"])
        if (e["p"] == -1) col += e["dim"].get<std::size_t>();
    CHECK(col == 12);

    auto cx = write_file("complex.json", R"({"cells": [
        {"id": "a", "degree": 0, "filtration": 0}, {"id": "b", "degree": 1, "filtration": -1}], "boundary": []})");
    r = call({"specseq", "--complex", cx.string(), "--csv", "--rmax", "2"});
    CHECK(r.out == "r,p,q,dim\n1,-1,2,1\n1,0,0,1\n2,-1,2,1\n2,0,0,1\ninf,-1,2,1\ninf,0,0,1\n");
}

TEST_CASE("deterministic output and run manifest") {
    std::vector<std::string> args = {"chords", "--builtin", "unlink", "--d", "2", "--json"};
    auto a = call(args), b = call(args);
    CHECK(a.out == b.out);
    CHECK(a.out.size() > 100);

    auto m = nlohmann::json::parse(std::ifstream(scratch() / "strhom-chords-manifest.json"));
    CHECK(m["command"] == "chords");
    CHECK(m["parameters"] == nlohmann::json(args));
    CHECK(m.contains("versions"));
    CHECK(m.contains("wall_time_seconds"));
    CHECK(m["exit_code"] == 0);

    fs::path file = scratch() / "hopf.json";
    auto r = call({"dga-export", "--builtin", "hopf", "--d", "2", "--output", file.string()});
    CHECK(r.code == 0);
    CHECK(r.out.empty());
    auto dga = nlohmann::json::parse(std::ifstream(file));
    CHECK(dga["generators"].size() == 24);
    auto m2 = nlohmann::json::parse(std::ifstream(scratch() / "strhom-dga-export-manifest.json"));
    CHECK(m2["outputs"][0] == file.string());
}

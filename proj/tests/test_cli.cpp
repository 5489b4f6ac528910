#include "cli.hpp"
#include "stieltjes/errors.hpp"

#include "doctest.h"
#include "json.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

using nlohmann::json;
using stieltjes::Complex;

namespace {

namespace fs = std::filesystem;

struct Scratch {
    fs::path dir;
    Scratch() {
        static int counter = 0;
        dir = fs::temp_directory_path() / ("smp_cli_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        fs::create_directories(dir);
    }
    ~Scratch() { fs::remove_all(dir); }
    std::string write(const std::string& name, const std::string& content) const {
        const fs::path p = dir / name;
        std::ofstream(p) << content;
        return p.string();
    }
};

struct Result {
    int code;
    std::string out;
    std::string err;
    json report() const { return json::parse(out); }
};

Result run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = smp::run(args, out, err);
    return {code, out.str(), err.str()};
}

Complex value_at(const json& report, std::size_t i) {
    const json& v = report["samples"][i]["value"][0][0];
    return {v[0].get<double>(), v[1].get<double>()};
}

const char* kTwoAtoms = R"({"alpha": 0, "atoms": [{"t": 1, "weight": [[2]]}, {"t": 2, "weight": [[3]]}]})";
const char* kDelta1 = R"({"alpha": 0, "q": 1, "matrices": [[[1]], [[1]], [[1]]]})";

}  // namespace

TEST_SUITE("cli") {
    TEST_CASE("parse_complex accepts the usual spellings") {
        CHECK(smp::parse_complex("1+2i") == Complex(1, 2));
        CHECK(smp::parse_complex("1-2i") == Complex(1, -2));
        CHECK(smp::parse_complex("-1.5") == Complex(-1.5, 0));
        CHECK(smp::parse_complex("i") == Complex(0, 1));
        CHECK(smp::parse_complex("-i") == Complex(0, -1));
        CHECK(smp::parse_complex("2i") == Complex(0, 2));
        CHECK(smp::parse_complex(" 3 + 4i ") == Complex(3, 4));
        CHECK(smp::parse_complex("1e-3-2e+2i") == Complex(1e-3, -200));
        CHECK(smp::parse_complex("+2-i") == Complex(2, -1));
        CHECK_THROWS_AS(smp::parse_complex("abc"), stieltjes::InvalidArgument);
        CHECK_THROWS_AS(smp::parse_complex(""), stieltjes::InvalidArgument);
        const auto g = smp::parse_grid("i,2i,-1");
        REQUIRE(g.size() == 3);
        CHECK(g[2] == Complex(-1, 0));
    }

    TEST_CASE("check on the moments of 2d1 + 3d2") {
        Scratch s;
        const Result m = run({"measure-moments", "--input", s.write("mu.json", kTwoAtoms), "--order", "3"});
        REQUIRE(m.code == 0);
        const json moments = m.report()["moments"];
        CHECK(moments["matrices"][2][0][0][0] == 14.0);
        const Result c = run({"check", "--input", s.write("s.json", moments.dump())});
        REQUIRE(c.code == 0);
        const json r = c.report();
        CHECK(r["class"]["stieltjes_nonneg"] == true);
        CHECK(r["class"]["stieltjes_extendable"] == true);
        CHECK(r["tolerances"]["rank_rel_tol"] == 1e-10);
        CHECK(r["command"] == "check");
    }

    TEST_CASE("unique on (1,1,1) samples 1/(1-z)") {
        Scratch s;
        const Result r = run({"unique", "--input", s.write("s.json", kDelta1), "--grid", "i,2i,-1"});
        REQUIRE(r.code == 0);
        const json rep = r.report();
        const Complex zs[] = {Complex(0, 1), Complex(0, 2), Complex(-1, 0)};
        for (std::size_t i = 0; i < 3; ++i) CHECK(std::abs(value_at(rep, i) - 1.0 / (1.0 - zs[i])) < 1e-10);
        CHECK(rep["grid"].size() == 3);
    }

    TEST_CASE("transform 1 on (2,3)") {
        Scratch s;
        const Result r = run({"transform", "1", "--input", s.write("s.json", R"({"alpha": 0, "matrices": [[[2]], [[3]]]})")});
        REQUIRE(r.code == 0);
        const json t = r.report()["transformed"];
        CHECK(t["matrices"].size() == 1);
        CHECK(std::abs(t["matrices"][0][0][0][0].get<double>() - 3.0) < 1e-14);
    }

    TEST_CASE("inverse-transform reconstructs (1,1,1)") {
        Scratch s;
        const Result r =
            run({"inverse-transform", "--input", s.write("t.json", R"({"alpha": 0, "A": [[1]], "matrices": [[[1]], [[0]]]})")});
        REQUIRE(r.code == 0);
        const json m = r.report()["reconstructed"]["matrices"];
        REQUIRE(m.size() == 3);
        for (const auto& e : m) CHECK(std::abs(e[0][0][0].get<double>() - 1.0) < 1e-14);
    }

    TEST_CASE("parametrize, solve, verify and round-trip") {
        Scratch s;
        const std::string in = s.write("s.json", R"({"alpha": 0, "matrices": [[[5]], [[8]], [[14]]]})");
        const Result p = run({"parametrize", "--input", in});
        REQUIRE(p.code == 0);
        CHECK(p.report()["agreement_gap"].get<double>() < 1e-12);

        const Result sol = run({"solve", "--input", in, "--grid", "i,-2"});
        REQUIRE(sol.code == 0);
        CHECK(sol.report()["parameter"]["kind"] == "zero");
        CHECK(sol.report()["resolvent"]["coeffs"].size() == 4);

        const std::string param = s.write("g.json", R"({"alpha": 0, "atoms": [{"t": 3, "weight": [[1]]}]})");
        const Result v = run({"verify", "--input", in, "--param", param});
        REQUIRE(v.code == 0);
        const json vr = v.report();
        CHECK(vr["verification"]["passed"] == true);
        CHECK(vr["verification"]["max_rel_error"].get<double>() <= 1e-3);
        CHECK(vr["parameter"]["kind"] == "direct");
        CHECK(vr.contains("recovery"));

        const Result rt = run({"round-trip", "--input", in});
        REQUIRE(rt.code == 0);
        CHECK(rt.report()["sequence_residual"].get<double>() < 1e-8);
        CHECK(rt.report()["passed"] == true);
    }

    TEST_CASE("exit codes") {
        Scratch s;
        CHECK(run({"check", "--input", (s.dir / "missing.json").string()}).code == 2);
        CHECK(run({"check", "--input", s.write("bad.json", "{not json")}).code == 2);
        CHECK(run({"check", "--input", s.write("schema.json", R"({"alpha": 0})")}).code == 2);
        CHECK(run({"check"}).code == 2);
        CHECK(run({}).code == 2);
        CHECK(run({"bogus"}).code == 2);
        CHECK(run({"check", "--rank-tol", "5", "--input", s.write("s.json", kDelta1)}).code == 2);
        CHECK(run({"solve", "--input", s.write("s1.json", kDelta1), "--grid", "2"}).code == 2);
        const Result pre = run({"unique", "--input", s.write("p.json", R"({"alpha": 0, "matrices": [[[1]]]})")});
        CHECK(pre.code == 1);
        CHECK(pre.err.find("precondition") != std::string::npos);
        const Result nonext = run({"solve", "--input", s.write("n.json", R"({"alpha": 0, "matrices": [[[1]], [[0]], [[1]]]})")});
        CHECK(nonext.code == 1);
        CHECK(run({"--help"}).code == 0);
    }

    TEST_CASE("check never fails on a well-formed but invalid sequence") {
        Scratch s;
        const Result r = run({"check", "--input", s.write("s.json", R"({"alpha": 0, "matrices": [[[1]], [[2]], [[1]]]})")});
        CHECK(r.code == 0);
        CHECK(r.report()["class"]["stieltjes_nonneg"] == false);
    }

    TEST_CASE("overrides are applied and embedded") {
        Scratch s;
        const std::string in = s.write("s.json", kDelta1);
        const json r = run({"check", "--input", in, "--rank-tol", "1e-8", "--psd-tol", "1e-7", "--alpha", "-1"}).report();
        CHECK(r["tolerances"]["rank_rel_tol"] == 1e-8);
        CHECK(r["tolerances"]["psd_tol"] == 1e-7);
        CHECK(r["alpha"] == -1.0);
    }

    TEST_CASE("reports are byte-identical across runs and go to --output") {
        Scratch s;
        const std::string in = s.write("s.json", kDelta1);
        const Result a = run({"unique", "--input", in});
        const Result b = run({"unique", "--input", in});
        CHECK(a.out == b.out);
        const std::string path = (s.dir / "report.json").string();
        const Result c = run({"unique", "--input", in, "--output", path});
        CHECK(c.code == 0);
        CHECK(c.out.empty());
        std::ifstream f(path);
        const std::string written((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
        CHECK(written == a.out);
    }

    TEST_CASE("plain text summary") {
        Scratch s;
        const Result r = run({"check", "--input", s.write("s.json", kDelta1), "--format", "text"});
        CHECK(r.code == 0);
        CHECK(r.out.find("class.completely_degenerate: true") != std::string::npos);
    }
}

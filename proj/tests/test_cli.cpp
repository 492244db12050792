#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <rbcsp/csp_io.hpp>
#include <rbcsp/mis.hpp>

#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

namespace fs = std::filesystem;
using namespace rbcsp;

namespace
{
    struct Outcome
    {
        int status;
        std::string out;
    };

    // Runs the CLI with stderr merged into the captured output.
    auto cli(const std::string & args) -> Outcome
    {
        std::string command = std::string(RBCSP_CLI_PATH) + " " + args + " 2>&1";
        FILE * pipe = ::popen(command.c_str(), "r");
        REQUIRE(pipe != nullptr);
        std::string out;
        char buffer[4096];
        while (auto got = std::fread(buffer, 1, sizeof buffer, pipe))
            out.append(buffer, got);
        int raw = ::pclose(pipe);
        return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, out};
    }

    auto slurp(const fs::path & path) -> std::string
    {
        std::ifstream in(path);
        std::stringstream s;
        s << in.rdbuf();
        return s.str();
    }

    struct Scratch
    {
        fs::path dir;

        Scratch()
        {
            dir = fs::temp_directory_path() / ("rbcsp_cli_" + std::to_string(::getpid()));
            fs::create_directories(dir);
        }

        ~Scratch() { fs::remove_all(dir); }

        auto operator/(const std::string & name) const -> std::string { return (dir / name).string(); }
    };

    auto last_json(const std::string & out) -> nlohmann::json
    {
        auto start = out.find('{');
        REQUIRE(start != std::string::npos);
        return nlohmann::json::parse(out.substr(start));
    }
}

TEST_CASE("version names the random number generator")
{
    auto r = cli("--version");
    CHECK(r.status == 0);
    CHECK(r.out.find("mt19937_64") != std::string::npos);
}

TEST_CASE("gen then solve a forced instance")
{
    Scratch tmp;
    auto gen = cli("gen --n 40 --forced --seed 1 --out " + tmp / "a.csp");
    REQUIRE(gen.status == 0);
    std::ifstream in(tmp / "a.csp");
    auto file = read_csp(in);
    CHECK(file.instance.num_vars() == 40);
    CHECK(file.instance.domain_size() == 19);
    CHECK(file.instance.num_constraints() == 410);
    REQUIRE(file.hidden_solution);
    CHECK(conflict_count(file.instance, *file.hidden_solution) == 0);

    auto again = cli("gen --n 40 --forced --seed 1 --out " + tmp / "b.csp");
    REQUIRE(again.status == 0);
    CHECK(slurp(tmp / "a.csp") == slurp(tmp / "b.csp"));

    auto solve = cli("solve --in " + tmp / "a.csp" + " --seed 2 --stats");
    REQUIRE(solve.status == 0);
    auto j = last_json(solve.out);
    CHECK(j["success"] == true);
    CHECK(j["full_solution"] == true);
    CHECK(j["seed"] == 2);
    CHECK(j["best_conflicts"] == 0);
    CHECK(j.contains("stats"));
    std::vector<Value> values = j["assignment"].get<std::vector<Value>>();
    CHECK(conflict_count(file.instance, Assignment(values)) == 0);

    auto repeat = last_json(cli("solve --in " + tmp / "a.csp" + " --seed 2 --stats").out);
    CHECK(repeat["iterations"] == j["iterations"]);
}

TEST_CASE("solve with a budget reports failure without error")
{
    Scratch tmp;
    REQUIRE(cli("gen --n 40 --seed 3 --out " + tmp / "u.csp").status == 0);
    auto r = cli("solve --in " + tmp / "u.csp" + " --seed 1 --max-iters 10");
    REQUIRE(r.status == 0);
    auto j = last_json(r.out);
    CHECK(j["iterations"].get<int>() <= 10);
    CHECK(j["best_conflicts"].get<int>() >= 0);
}

TEST_CASE("convert round trip through DIMACS")
{
    Scratch tmp;
    {
        std::ofstream out(tmp / "small.csp");
        Instance instance(3, 2, {Constraint{0, 1, {{0, 0}, {1, 0}}}, Constraint{1, 2, {{1, 1}}}});
        write_csp(out, instance);
    }
    REQUIRE(cli("convert --in " + tmp / "small.csp" + " --to-mis --out " + tmp / "g.dimacs").status == 0);
    std::ifstream g(tmp / "g.dimacs");
    auto graph = parse_dimacs(g);
    CHECK(graph.num_vertices == 6);
    CHECK(graph.edges.size() == 3 + 3);

    REQUIRE(cli("convert --in " + tmp / "g.dimacs" + " --to-csp --block-size 2 --out " + tmp / "back.csp").status
        == 0);
    std::ifstream back_in(tmp / "back.csp");
    auto back = read_csp(back_in).instance;
    CHECK(back.num_vars() == 3);
    CHECK(back.num_constraints() == 2);

    REQUIRE(cli("recover " + tmp / "g.dimacs" + " --d 2 --out " + tmp / "rec.csp").status == 0);
    CHECK(slurp(tmp / "rec.csp").find("p bcsp 3 2 2") != std::string::npos);
}

TEST_CASE("bench writes JSON and CSV outputs")
{
    Scratch tmp;
    REQUIRE(cli("gen --n 15 --forced --seed 4 --out " + tmp / "b.csp").status == 0);
    auto r = cli("bench --in " + tmp / "b.csp" + " --runs 30 --base-seed 10 --workers 2 --rtd-out " + tmp / "rtd.csv"
        + " --hist-out " + tmp / "hist.csv" + " --summary-out " + tmp / "summary.json");
    REQUIRE(r.status == 0);
    auto j = nlohmann::json::parse(slurp(tmp / "summary.json"));
    CHECK(j["runs"] == 30);
    CHECK(j["success_rate"] == 1.0);
    auto rtd = slurp(tmp / "rtd.csv");
    CHECK(rtd.rfind("iterations,ecdf,fitted\n", 0) == 0);
    CHECK(slurp(tmp / "hist.csv").rfind("conflicts,runs\n", 0) == 0);
}

TEST_CASE("errors exit non-zero with a diagnostic")
{
    auto missing = cli("solve --in /nonexistent/nope.csp");
    CHECK(missing.status == 1);
    CHECK(missing.out.find("/nonexistent/nope.csp") != std::string::npos);

    CHECK(cli("solve --in x.csp --bogus").status != 0);
    CHECK(cli("frobnicate").status != 0);
    CHECK(cli("convert --in x --to-mis --to-csp").status != 0);
    CHECK(cli("convert --in x --to-csp").status != 0);
    CHECK(cli("gen --n 1").status == 1);

    Scratch tmp;
    {
        std::ofstream out(tmp / "bad.csp");
        out << "p bcsp 2 2 1\nk 0 1 1\nf 0 5\n";
    }
    auto bad = cli("solve --in " + tmp / "bad.csp");
    CHECK(bad.status == 1);
    CHECK(bad.out.find("line 3") != std::string::npos);
}

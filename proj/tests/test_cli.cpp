#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "json.hpp"
#include "stellar/errors.hpp"
#include "stellar/io.hpp"
#include "stellar/measures.hpp"

using namespace stellar;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = cli::dispatch(args, out, err);
    return {code, out.str(), err.str()};
}

std::filesystem::path temp_path(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("stellar_cli_test_" + name);
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("angles") {
    CHECK(cli::parse_angle("0.5") == 0.5);
    CHECK(cli::parse_angle("pi") == doctest::Approx(kPi));
    CHECK(cli::parse_angle("2pi/3") == doctest::Approx(2 * kPi / 3));
    CHECK(cli::parse_angle("-pi/4") == doctest::Approx(-kPi / 4));
    CHECK(cli::parse_angle("3*pi/4") == doctest::Approx(3 * kPi / 4));
    CHECK_THROWS_AS(cli::parse_angle("abc"), cli::UsageError);
    CHECK_THROWS_AS(cli::parse_angle("pi/0"), cli::UsageError);
}

TEST_CASE("named states") {
    CHECK(fidelity(cli::named_state({"ghz", "3"}), ghz_state(3)) >= 1 - 1e-15);
    CHECK(fidelity(cli::named_state({"w", "4"}), dicke_state(4, 1)) >= 1 - 1e-15);
    CHECK(fidelity(cli::named_state({"dicke", "5", "2"}), dicke_state(5, 2)) >= 1 - 1e-15);
    CHECK(fidelity(cli::named_state({"bell", "psi+"}), dicke_state(2, 1)) >= 1 - 1e-15);
    CHECK(fidelity(cli::named_state({"tetra"}), tetrahedron_state()) >= 1 - 1e-15);
    CHECK(fidelity(cli::named_state({"rec4", "pi/2", "pi/2"}), rec_family_state(kPi / 2, kPi / 2)) >= 1 - 1e-15);
    CHECK(fidelity(cli::named_state({"coherent", "3", "1", "2"}), coherent_state(3, QubitState(1, 2))) >= 1 - 1e-15);
    CHECK(fidelity(cli::named_state({"111"}), dicke_state(3, 3)) >= 1 - 1e-15);
    CHECK_THROWS_AS(cli::named_state({"bell", "psi-"}), DomainError);
    CHECK_THROWS_AS(cli::named_state({"010"}), DomainError);
    CHECK_THROWS_AS(cli::named_state({"ghz"}), cli::UsageError);
    CHECK_THROWS_AS(cli::named_state({"nonsense"}), cli::UsageError);

    const auto path = temp_path("state.json");
    {
        std::ofstream f(path);
        f << io::state_to_json(rec_family_state(0.4, 1.0));
    }
    CHECK(fidelity(cli::named_state({"@" + path.string()}), rec_family_state(0.4, 1.0)) >= 1 - 1e-15);
    std::filesystem::remove(path);
}

TEST_CASE("measure") {
    const Run text = run({"measure", "--ghz", "3"});
    CHECK(text.code == 0);
    CHECK(text.out.find("E_B = 1\n") != std::string::npos);
    CHECK(text.out.find("E_G = 1\n") != std::string::npos);

    const Run json = run({"measure", "--dicke", "4", "2", "--format", "json"});
    REQUIRE(json.code == 0);
    const auto j = nlohmann::json::parse(json.out);
    CHECK(j["E_B"].get<double>() == doctest::Approx(1.0));
    CHECK(std::abs(j["E_G"].get<double>() - std::log2(8.0 / 3.0)) <= 1e-8);

    const Run only = run({"measure", "--dicke", "10", "3", "--eb"});
    CHECK(only.out == "E_B = 0.84\n");
}

TEST_CASE("stars and compose") {
    const Run stars = run({"stars", "--bell", "phi-", "--format", "csv"});
    CHECK(stars.code == 0);
    CHECK(stars.out.rfind("star_index,theta,phi,x,y,z\n", 0) == 0);
    CHECK(std::count(stars.out.begin(), stars.out.end(), '\n') == 3);

    const Run js = run({"stars", "--state", "ghz", "3"});
    const Constellation c = io::constellation_from_json(js.out);
    CHECK(c.n() == 3);
    for (const auto& s : c.stars()) CHECK(std::abs(s.theta() - kPi / 2) <= 1e-12);

    const Run bell = run({"compose", "--left", "1", "--right", "0"});
    REQUIRE(bell.code == 0);
    CHECK(fidelity(io::state_from_json(bell.out), dicke_state(2, 1)) >= 1 - 1e-12);
    const Run square = run({"compose", "--left", "bell", "psi+", "--right", "bell", "phi-"});
    CHECK(std::abs(e_b(io::state_from_json(square.out)) - 1.0) <= 1e-12);
}

TEST_CASE("sweep, random, evolve, velocity, reduce") {
    const Run sweep = run({"sweep", "--family", "rec4", "--grid", "3x3", "--eb"});
    CHECK(sweep.code == 0);
    CHECK(std::count(sweep.out.begin(), sweep.out.end(), '\n') == 10);

    const Run random = run({"random", "--n", "4", "--count", "3", "--seed", "11"});
    REQUIRE(random.code == 0);
    const auto j = nlohmann::json::parse(random.out);
    CHECK(j["seed"].get<std::uint64_t>() == 11);
    CHECK(j["states"].size() == 3);

    const Run antipodal = run({"random", "--n", "3", "--antipodal", "--seed", "1"});
    CHECK(antipodal.code == 3);

    const Run evolve = run({"evolve", "--hamiltonian", "sym(X Z P0)", "--state", "000", "--betas", "0:pi:5"});
    CHECK(evolve.code == 0);
    CHECK(evolve.out.rfind("beta,star_index,theta,phi,x,y,z,e_b\n", 0) == 0);

    const Run vel = run({"velocity", "--hamiltonian", "-0.5*X x Y - 0.5*Y x X", "--state", "00", "--betas",
                         "0:pi/2:9"});
    CHECK(vel.code == 0);
    CHECK(vel.out.rfind("beta,star_index,dtheta_dbeta,flag\n", 0) == 0);

    const Run red = run({"reduce", "--hamiltonian", "sym(X Z P0)", "--beta", "0.7"});
    REQUIRE(red.code == 0);
    const auto r = nlohmann::json::parse(red.out);
    CHECK(r["V"].size() == 4);
    CHECK(r["offblock_norm"].get<double>() <= 1e-10);
}

TEST_CASE("exit codes") {
    CHECK(run({"measure", "--bell", "psi-"}).code == 3);
    CHECK(run({"measure", "--state", "foo"}).code == 2);
    CHECK(run({}).code == 2);
    CHECK(run({"bogus"}).code == 2);
    CHECK(run({"evolve", "--hamiltonian", "X x Q", "--state", "00", "--betas", "0:1:3"}).code == 2);
    CHECK(run({"evolve", "--hamiltonian", "X x Z", "--state", "00", "--betas", "0:1:3"}).code == 4);
    CHECK(run({"reduce", "--hamiltonian", "X x Z"}).code == 4);
    CHECK(run({"evolve", "--hamiltonian", "X x X x X", "--state", "00", "--betas", "0:1:3"}).code == 3);
    CHECK(run({"--out", "/nonexistent-dir/x.json", "measure", "--ghz", "3"}).code == 2);
    const Run help = run({"evolve", "--help"});
    CHECK(help.code == 0);
    CHECK(help.out.find("[0.2]") != std::string::npos);
    CHECK(help.out.find("[12]") != std::string::npos);
}

TEST_CASE("output file and determinism") {
    const auto path = temp_path("random.json");
    const Run to_file = run({"--out", path.string(), "random", "--n", "5", "--count", "4", "--seed", "123"});
    REQUIRE(to_file.code == 0);
    CHECK(to_file.out.empty());
    std::ifstream f(path);
    const std::string written((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    std::filesystem::remove(path);
    const Run again = run({"random", "--n", "5", "--count", "4", "--seed", "123"});
    CHECK(written == again.out);
    CHECK(run({"random", "--n", "5", "--count", "4", "--seed", "124"}).out != again.out);

    ::setenv("STELLAR_SEED", "123", 1);
    const Run from_env = run({"random", "--n", "5", "--count", "4"});
    ::unsetenv("STELLAR_SEED");
    CHECK(from_env.out == again.out);
}

}  // TEST_SUITE

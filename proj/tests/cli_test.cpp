#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

namespace {

std::string bin_path() {
    const char* p = std::getenv("BRJUNO_BIN");
    return p ? p : "";
}

int run(const std::string& args, const std::string& redirect = "") {
    std::string cmd = bin_path() + " " + args;
    if (!redirect.empty()) cmd += " > " + redirect + " 2>/dev/null";
    else cmd += " > /dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

}  // namespace

TEST_CASE("cli behavior", "[cli]") {
    if (bin_path().empty()) {
        SKIP("BRJUNO_BIN not set");
    }

    SECTION("expand prints the period of g") {
        REQUIRE(run("expand g --alpha 1 -n 5", "/tmp/brjuno_t1.txt") == 0);
        const std::string out = slurp("/tmp/brjuno_t1.txt");
        REQUIRE(out.find("Periodic") != std::string::npos);
        REQUIRE(out.find("(1,+1)") != std::string::npos);
    }
    SECTION("expand terminates on rationals") {
        REQUIRE(run("expand 1/3 --alpha 1/2", "/tmp/brjuno_t2.txt") == 0);
        REQUIRE(slurp("/tmp/brjuno_t2.txt").find("Terminated") != std::string::npos);
    }
    SECTION("expand float literal truncates") {
        REQUIRE(run("expand 0.414213562 --alpha 1/2 -n 6", "/tmp/brjuno_t3.txt") == 0);
        const std::string out = slurp("/tmp/brjuno_t3.txt");
        REQUIRE(out.find("TruncatedAt") != std::string::npos);
        REQUIRE(out.find("(2,+1)") != std::string::npos);
    }
    SECTION("eval closed forms and the rational sentinel") {
        REQUIRE(run("eval g --alpha 1", "/tmp/brjuno_t4.txt") == 0);
        REQUIRE(slurp("/tmp/brjuno_t4.txt").find("1.25982891379441") != std::string::npos);
        REQUIRE(run("eval gamma --alpha 1/2", "/tmp/brjuno_t5.txt") == 0);
        REQUIRE(slurp("/tmp/brjuno_t5.txt").find("1.50459882715977") != std::string::npos);
        REQUIRE(run("eval 1/2 --alpha 1", "/tmp/brjuno_t6.txt") == 0);
        REQUIRE(slurp("/tmp/brjuno_t6.txt").find("+inf") != std::string::npos);
    }
    SECTION("usage errors exit with 2") {
        REQUIRE(run("eval") == 2);
        REQUIRE(run("eval notanumber --alpha 1") == 2);
        REQUIRE(run("eval g --alpha 2/5") == 2);
        REQUIRE(run("expand g --alpha 1 --output yaml") == 2);
    }
    SECTION("io errors exit with 3") {
        REQUIRE(run("figure --id semicont-alphahat --resolution 4 --out /nonexistent/d/f.csv") ==
                3);
    }
    SECTION("figure output is deterministic and CSV-shaped") {
        REQUIRE(run("figure --id semicont-alphahat --resolution 5 --out /tmp/brjuno_f1.csv") == 0);
        REQUIRE(run("figure --id semicont-alphahat --resolution 5 --out /tmp/brjuno_f2.csv") == 0);
        const std::string a = slurp("/tmp/brjuno_f1.csv"), b = slurp("/tmp/brjuno_f2.csv");
        REQUIRE(a == b);
        REQUIRE(a.rfind("eps,B_left,B_right\n", 0) == 0);
        REQUIRE(a.find("\r") == std::string::npos);  // LF line endings
    }
    SECTION("scaling figure records a slope near 0.5") {
        REQUIRE(run("figure --id scaling-loglog --out /tmp/brjuno_f3.csv") == 0);
        const std::string out = slurp("/tmp/brjuno_f3.csv");
        REQUIRE(out.rfind("log_abs_x_minus_g,log_B_minus_Bmin,fitted_slope\n", 0) == 0);
        // last column of the first data row
        const auto line_end = out.find('\n', out.find('\n') + 1);
        const auto row = out.substr(out.find('\n') + 1, line_end - out.find('\n') - 1);
        const double slope = std::stod(row.substr(row.rfind(',') + 1));
        REQUIRE(slope > 0.45);
        REQUIRE(slope < 0.6);
    }
    SECTION("cusp check command passes for both alphas") {
        REQUIRE(run("cusp --alpha 1 --side both") == 0);
        REQUIRE(run("cusp --alpha 1/2 --side both") == 0);
    }
    SECTION("compare json is machine readable") {
        REQUIRE(run("compare --alpha 7/10 -n 50 --seed 7 --output json",
                    "/tmp/brjuno_t7.json") == 0);
        const std::string out = slurp("/tmp/brjuno_t7.json");
        REQUIRE(out.find("\"schema_version\": 1") != std::string::npos);
        REQUIRE(out.find("\"min_slack\"") != std::string::npos);
        REQUIRE(out.find("\"seed\": 7") != std::string::npos);
    }
    SECTION("semicont check passes") {
        REQUIRE(run("semicont --a 2 --eps-count 6") == 0);
    }
    SECTION("perturb succeeds on gamma") {
        REQUIRE(run("perturb --xi gamma --epsilon 0.01 --direction up --alpha 1") == 0);
    }
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <random>

#include "pmf/cache.hpp"
#include "pmf/config.hpp"
#include "pmf/eisenstein.hpp"
#include "pmf/json_io.hpp"

using namespace pmf;
namespace fs = std::filesystem;

TEST_CASE("q-expansion JSON round trip, both flavors") {
    auto chi = parse_character("3:quad");
    auto rat = CycRing::rational(chi.ring_conductor());
    auto f = eisenstein_chi(1, chi, 8, rat);
    auto j = qexp_to_json(f);
    CHECK(j["ring"]["flavor"] == "rational");
    CHECK(j["k"] == 1);
    CHECK(j["chi"] == chi.id());
    auto g = qexp_from_json(j);
    CHECK(g.agrees_with(f));
    CHECK(g.weight == f.weight);
    CHECK(g.nebentypus->id() == chi.id());

    auto res = CycRing::residue(chi.ring_conductor(), 5, 4);
    auto fr = eisenstein_chi(3, chi, 8, res);
    auto gr = qexp_from_json(qexp_to_json(fr));
    CHECK(gr.agrees_with(fr));
    CHECK(gr.ring()->precision() == 4);
}

TEST_CASE("rational coordinates serialize as num/den strings") {
    auto rat = CycRing::rational(1);
    QExpansion f(rat, 1);
    f.coeff(0) = CycScalar::from_rational(rat, mpq_class(-7, 12));
    auto j = qexp_to_json(f);
    CHECK(j["coeffs"][0][0] == "-7/12");
    CHECK(qexp_from_json(j).coeff(0) == f.coeff(0));
}

TEST_CASE("disk cache: round trip, atomicity artifacts, clear and stat") {
    fs::path dir = fs::temp_directory_path() / "pmf-cache-test";
    fs::remove_all(dir);
    DiskCache cache(dir);
    CHECK_FALSE(cache.get("absent").has_value());
    cache.put("key1", nlohmann::json{{"x", 1}});
    auto hit = cache.get("key1");
    REQUIRE(hit.has_value());
    CHECK((*hit)["x"] == 1);
    CHECK(cache.stat().entries == 1);
    CHECK(cache.clear() == 1);
    CHECK(cache.stat().entries == 0);
    fs::remove_all(dir);
}

TEST_CASE("cached and recomputed q-expansions are identical") {
    std::mt19937_64 rng(31);
    fs::path dir = fs::temp_directory_path() / "pmf-cache-test2";
    fs::remove_all(dir);
    DiskCache cache(dir);
    auto chi = parse_character("3:quad");
    auto res = CycRing::residue(chi.ring_conductor(), 5, 4);
    for (int i = 0; i < 20; ++i) {
        long k = 1 + 2 * (long)(rng() % 10); // odd weights
        long Q = 2 + (long)(rng() % 10);
        std::string key = "k=" + std::to_string(k) + "|Q=" + std::to_string(Q);
        auto cold = eisenstein_chi(k, chi, Q, res);
        if (!cache.get(key)) cache.put(key, qexp_to_json(cold));
        auto warm = qexp_from_json(*cache.get(key));
        CHECK(warm.agrees_with(cold));
        CHECK(qexp_to_json(warm).dump() == qexp_to_json(cold).dump());
    }
    fs::remove_all(dir);
}

TEST_CASE("TOML subset parsing") {
    auto kv = parse_toml_text(
        "# canonical run\n"
        "p = 5\n"
        "chi = \"3:quad\"  # odd quadratic\n"
        "c = [2, 3]\n"
        "flag = true\n"
        "[paths]\n"
        "out = \"report.json\"\n");
    CHECK(kv.at("p").i == 5);
    CHECK(kv.at("chi").s == "3:quad");
    CHECK(kv.at("c").ints == std::vector<long>{2, 3});
    CHECK(kv.at("flag").b);
    CHECK(kv.at("paths.out").s == "report.json");
    CHECK_THROWS_AS(parse_toml_text("oops\n"), ParameterError);
    CHECK_THROWS_AS(parse_toml_text("x = \n"), ParameterError);
}

TEST_CASE("run config extraction") {
    auto rc = run_config_from_toml(parse_toml_text(
        "p = 7\nN = 5\nchi = \"5:1\"\nc = 3\nK = 12\nQ = 16\nM = 6\nrmax = 2\n"));
    CHECK(rc.p == 7);
    CHECK(rc.N == 5);
    CHECK(rc.chi == "5:1");
    CHECK(rc.c_set == std::vector<long>{3});
    CHECK(rc.K == 12);
    CHECK(rc.M == 6);
    CHECK(rc.r_max == 2);
}

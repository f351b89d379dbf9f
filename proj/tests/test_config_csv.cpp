#include <doctest.h>

#include "membrane/config.hpp"
#include "membrane/csv.hpp"
#include "membrane/errors.hpp"

using namespace membrane;

TEST_SUITE_BEGIN("config_csv");

TEST_CASE("config parsing") {
    const Config cfg = Config::parse_string(
        "# comment line\n"
        "sweep.h_min = -2.5   # trailing comment\n"
        "sweep.samples=100\n"
        "name = torus run\n"
        "flag = true\n"
        "grid = 1.5,2,-3e-1\n");
    CHECK(cfg.get_real("sweep.h_min") == -2.5);
    CHECK(cfg.get_int("sweep.samples") == 100);
    CHECK(cfg.get_string("name") == "torus run");
    CHECK(cfg.get_bool("flag", false));
    const auto grid = cfg.get_real_list("grid");
    CHECK(grid.size() == 3);
    CHECK(grid[2] == doctest::Approx(-0.3));
    CHECK(cfg.get_int("missing", 7) == 7);
    CHECK_THROWS_AS(cfg.get_int("name"), PreconditionError);
    CHECK_THROWS_AS(cfg.get_string("absent"), PreconditionError);
    CHECK_THROWS_AS(Config::parse_string("no equals sign\n"), PreconditionError);
}

TEST_CASE("config hash is stable and content-sensitive") {
    const Config a = Config::parse_string("x=1\ny=2\n");
    const Config b = Config::parse_string("y=2\nx=1\n");   // order-insensitive
    const Config c = Config::parse_string("x=1\ny=3\n");
    CHECK(a.hash() == b.hash());
    CHECK(a.hash() != c.hash());
}

TEST_CASE("csv writer determinism and schema enforcement") {
    CsvWriter w({"a", "b"});
    w.cell(int64_t(1)).cell(0.1);
    w.end_row();
    w.cell(std::string("x"));
    CHECK_THROWS_AS(w.end_row(), PreconditionError);
    CHECK(CsvWriter::format_real(0.1) == "0.10000000000000001");  // round-trip exact
    CHECK(CsvWriter::format_real(1.0) == "1");
}

TEST_SUITE_END();

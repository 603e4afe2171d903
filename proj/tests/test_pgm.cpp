#include "doctest.h"

#include <filesystem>
#include <string>

#include "flowseg/pgm.hpp"
#include "support/subprocess.hpp"

using namespace flowseg;
using testsupport::make_temp_dir;
using testsupport::read_file;
using testsupport::write_file;

TEST_CASE("pgm write/read round trip") {
    const auto dir = make_temp_dir("pgm");
    const std::string path = (dir / "map.pgm").string();

    LabelMap map(3, 2, 0);
    map.at(0, 0) = 2;
    map.at(1, 0) = 0;
    map.at(2, 0) = 5;
    map.at(0, 1) = 1;
    map.at(1, 1) = 5;
    map.at(2, 1) = 3;
    write_pgm(map, path);

    CHECK(read_file(std::filesystem::path(path)) == "P2\n3 2\n5\n2 0 5\n1 5 3\n");
    CHECK(read_pgm(path) == map);

    std::filesystem::remove_all(dir);
}

TEST_CASE("all-background maps still get a legal maxval") {
    const auto dir = make_temp_dir("pgm");
    const std::string path = (dir / "zero.pgm").string();
    write_pgm(LabelMap(2, 2, 0), path);
    CHECK(read_file(std::filesystem::path(path)) == "P2\n2 2\n1\n0 0\n0 0\n");
    CHECK(read_pgm(path).max_label() == 0);
    std::filesystem::remove_all(dir);
}

TEST_CASE("reader tolerates comments and loose whitespace") {
    const auto dir = make_temp_dir("pgm");
    const std::string path = (dir / "messy.pgm").string();
    write_file(dir / "messy.pgm",
               "P2 # magic\n# a full comment line\n 2 1\n\t7\n\n3   7\n");
    const LabelMap map = read_pgm(path);
    CHECK(map.width() == 2);
    CHECK(map.height() == 1);
    CHECK(map.at(0) == 3);
    CHECK(map.at(1) == 7);
    std::filesystem::remove_all(dir);
}

TEST_CASE("reader rejects malformed files") {
    const auto dir = make_temp_dir("pgm");
    auto path_for = [&](const char* name, const std::string& body) {
        write_file(dir / name, body);
        return (dir / name).string();
    };
    SUBCASE("binary magic") {
        CHECK_THROWS_AS(read_pgm(path_for("p5.pgm", "P5\n2 1\n255\n")), HeaderError);
    }
    SUBCASE("zero maxval") {
        CHECK_THROWS_AS(read_pgm(path_for("mv.pgm", "P2\n1 1\n0\n0\n")), HeaderError);
    }
    SUBCASE("oversized maxval") {
        CHECK_THROWS_AS(read_pgm(path_for("big.pgm", "P2\n1 1\n70000\n0\n")), HeaderError);
    }
    SUBCASE("non-positive dimensions") {
        CHECK_THROWS_AS(read_pgm(path_for("dim.pgm", "P2\n0 2\n1\n")), HeaderError);
    }
    SUBCASE("too few pixels") {
        CHECK_THROWS_AS(read_pgm(path_for("short.pgm", "P2\n2 2\n9\n1 2 3\n")), CountMismatch);
    }
    SUBCASE("too many pixels") {
        CHECK_THROWS_AS(read_pgm(path_for("long.pgm", "P2\n2 1\n9\n1 2 3\n")), CountMismatch);
    }
    SUBCASE("pixel above maxval") {
        CHECK_THROWS_AS(read_pgm(path_for("range.pgm", "P2\n2 1\n4\n1 5\n")), ParseError);
    }
    SUBCASE("negative pixel") {
        CHECK_THROWS_AS(read_pgm(path_for("neg.pgm", "P2\n2 1\n4\n-1 2\n")), ParseError);
    }
    SUBCASE("non-numeric pixel") {
        CHECK_THROWS_AS(read_pgm(path_for("alpha.pgm", "P2\n2 1\n4\n1 x\n")), ParseError);
    }
    SUBCASE("missing file") {
        CHECK_THROWS_AS(read_pgm((dir / "absent.pgm").string()), IoError);
    }
    std::filesystem::remove_all(dir);
}

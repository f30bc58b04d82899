#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "fringe/io.hpp"
#include "fringe/rng.hpp"

using namespace fringe;

namespace {

std::string temp_dir() {
    auto dir = std::filesystem::temp_directory_path() / "fringe_io_test";
    std::filesystem::create_directories(dir);
    return dir.string();
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in),
                       std::istreambuf_iterator<char>());
}

RealField random_field(int h, int w, uint64_t seed) {
    RealField f(h, w);
    CounterRng rng(seed);
    for (size_t i = 0; i < f.size(); ++i)
        f[i] = rng.uniform(-3.0, 3.0);
    return f;
}

}  // namespace

TEST_CASE("pfm round-trips bit-exactly at float32 precision") {
    const std::string dir = temp_dir();
    RealField f = random_field(33, 47, 7);
    const std::string p1 = dir + "/a.pfm";
    const std::string p2 = dir + "/b.pfm";
    write_pfm(f, p1);
    RealField g = read_pfm(p1);
    REQUIRE(g.same_dims(f));
    for (size_t i = 0; i < f.size(); ++i)
        CHECK(g[i] == double(float(f[i])));
    // second generation must be byte-identical
    write_pfm(g, p2);
    CHECK(slurp(p1) == slurp(p2));
}

TEST_CASE("pfm reader rejects junk") {
    const std::string dir = temp_dir();
    const std::string path = dir + "/bad.pfm";
    {
        std::ofstream out(path, std::ios::binary);
        out << "P5\n16 16\n255\n";
    }
    CHECK_THROWS_AS(read_pfm(path), IoError);
    {
        std::ofstream out(path, std::ios::binary);
        out << "Pf\n16 16\n-1.0\nshort";
    }
    CHECK_THROWS_AS(read_pfm(path), IoError);
    CHECK_THROWS_AS(read_pfm(dir + "/missing.pfm"), IoError);
}

TEST_CASE("pgm writes both depths and reads back the scaled levels") {
    const std::string dir = temp_dir();
    RealField f(16, 16);
    for (size_t i = 0; i < f.size(); ++i)
        f[i] = double(i) / double(f.size() - 1);  // ramp over [0, 1]

    write_pgm(f, dir + "/g8.pgm", 0.0, 1.0, false);
    RealField g8 = read_pgm(dir + "/g8.pgm");
    CHECK(g8[0] == 0.0);
    CHECK(g8[g8.size() - 1] == 255.0);

    write_pgm(f, dir + "/g16.pgm", 0.0, 1.0, true);
    RealField g16 = read_pgm(dir + "/g16.pgm");
    CHECK(g16[g16.size() - 1] == 65535.0);
    // clamping outside [lo, hi]
    write_pgm(f, dir + "/gc.pgm", 0.25, 0.75, false);
    RealField gc = read_pgm(dir + "/gc.pgm");
    CHECK(gc[0] == 0.0);
    CHECK(gc[gc.size() - 1] == 255.0);
}

TEST_CASE("csv quoting follows RFC-4180 conventions") {
    CHECK(csv_quote("plain") == "plain");
    CHECK(csv_quote("with,comma") == "\"with,comma\"");
    CHECK(csv_quote("quote\"inside") == "\"quote\"\"inside\"");
    CHECK(csv_quote("line\nbreak") == "\"line\nbreak\"");
    CHECK(csv_row({"a", "b", "c"}) == "a,b,c");
}

TEST_CASE("format_double round-trips exactly and stays short") {
    CounterRng rng(3);
    for (int i = 0; i < 500; ++i) {
        const double v = rng.gaussian() * std::pow(10.0, double(rng.below(9)) - 4.0);
        CHECK(std::stod(format_double(v)) == v);
    }
    CHECK(format_double(0.25) == "0.25");
    CHECK(format_double(0.0) == "0");
}

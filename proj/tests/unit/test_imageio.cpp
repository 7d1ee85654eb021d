#include <doctest.h>

#include <fstream>

#include "gkeca/image.hpp"
#include "gkeca/manifest.hpp"
#include "test_support.hpp"

using namespace gkeca;
using namespace gkeca::testing;

namespace {

void write_text(const std::filesystem::path& p, const std::string& s) {
    std::ofstream out(p, std::ios::binary);
    out << s;
}

PgmErrorKind pgm_error_kind(const std::string& bytes) {
    try {
        decode_pgm(bytes);
    } catch (const PgmError& e) {
        return e.kind();
    }
    FAIL("expected a PgmError");
    return PgmErrorKind::write_failed;
}

ManifestErrorKind manifest_error_kind(const std::filesystem::path& p) {
    try {
        load_manifest(p);
    } catch (const ManifestError& e) {
        return e.kind();
    }
    FAIL("expected a ManifestError");
    return ManifestErrorKind::missing_file;
}

}  // namespace

TEST_CASE("ascii pgm decodes verbatim") {
    const auto img = decode_pgm("P2 2 2 255\n0 128 255 64\n");
    CHECK(img.width() == 2);
    CHECK(img.height() == 2);
    CHECK(img.data() == std::vector<double>{0, 128, 255, 64});
}

TEST_CASE("binary pgm with one black pixel") {
    const auto img = decode_pgm(std::string("P5\n1 1\n255\n") + '\0');
    CHECK(img.width() == 1);
    CHECK(img.data() == std::vector<double>{0});
}

TEST_CASE("header comments are skipped") {
    const auto img = decode_pgm("P2\n# a comment\n3 1 # trailing\n10\n1 2 3\n");
    CHECK(img.data() == std::vector<double>{1, 2, 3});
}

TEST_CASE("pgm errors are distinguished") {
    CHECK(pgm_error_kind(std::string("P5\n2 2\n255\n") + std::string(3, 'a')) == PgmErrorKind::truncated_data);
    CHECK(pgm_error_kind("P2 2 2 255\n1 2 3\n") == PgmErrorKind::truncated_data);
    CHECK(pgm_error_kind("P6 1 1 255\n\x01\x02\x03") == PgmErrorKind::malformed_header);
    CHECK(pgm_error_kind("P2 x 1 255\n0") == PgmErrorKind::malformed_header);
    CHECK(pgm_error_kind("P2 1 1 65535\n0") == PgmErrorKind::unsupported_maxval);
    CHECK(pgm_error_kind("") == PgmErrorKind::malformed_header);

    try {
        load_pgm("/nonexistent/dir/none.pgm");
        FAIL("expected missing file");
    } catch (const PgmError& e) {
        CHECK(e.kind() == PgmErrorKind::missing_file);
    }
}

TEST_CASE("P5 round trip is byte identical") {
    Rng rng(7);
    TempDir dir("pgm");
    for (int trial = 0; trial < 5; ++trial) {
        const int w = uniform_int(rng, 1, 40);
        const int h = uniform_int(rng, 1, 40);
        std::vector<double> px(static_cast<std::size_t>(w) * h);
        for (auto& p : px) p = uniform_int(rng, 0, 255);
        const GrayImage img(w, h, px);
        const auto path = dir / "rt.pgm";
        save_pgm(img, path);
        const auto back = load_pgm(path);
        CHECK(back == img);
        CHECK(encode_pgm(back) == encode_pgm(img));
    }
}

TEST_CASE("GrayImage rejects invalid rasters") {
    CHECK_THROWS_AS(GrayImage(0, 1, {}), std::invalid_argument);
    CHECK_THROWS_AS(GrayImage(2, 1, {1.0}), std::invalid_argument);
    CHECK_THROWS_AS(GrayImage(1, 1, {256.0}), std::invalid_argument);
    CHECK_THROWS_AS(GrayImage(1, 1, {-0.5}), std::invalid_argument);
    CHECK_THROWS_AS(GrayImage(1, 1, {std::nan("")}), std::invalid_argument);
}

TEST_CASE("resize_bilinear") {
    SUBCASE("constant stays constant") {
        const GrayImage img(5, 3, std::vector<double>(15, 77.0));
        const auto out = resize_bilinear(img, 11, 8);
        CHECK(out.width() == 11);
        CHECK(out.height() == 8);
        for (double v : out.data()) CHECK(v == doctest::Approx(77.0).epsilon(1e-15));
    }
    SUBCASE("identity") {
        Rng rng(3);
        const auto img = random_image(rng, 9, 6);
        CHECK(resize_bilinear(img, 9, 6) == img);
    }
    SUBCASE("endpoint-aligned upsample") {
        const auto out = resize_bilinear(GrayImage(2, 1, {0.0, 100.0}), 3, 1);
        CHECK(out.data() == std::vector<double>{0.0, 50.0, 100.0});
    }
    SUBCASE("zero target") {
        CHECK_THROWS_AS(resize_bilinear(GrayImage(1, 1, {0.0}), 0, 3), std::invalid_argument);
    }
    SUBCASE("output stays within the input range") {
        Rng rng(11);
        for (int trial = 0; trial < 30; ++trial) {
            const auto img = random_image(rng, uniform_int(rng, 1, 20), uniform_int(rng, 1, 20));
            const auto out = resize_bilinear(img, uniform_int(rng, 1, 30), uniform_int(rng, 1, 30));
            const auto [lo, hi] = std::minmax_element(img.data().begin(), img.data().end());
            for (double v : out.data()) {
                CHECK(v >= *lo);
                CHECK(v <= *hi);
            }
        }
    }
}

TEST_CASE("rescale_to_gray maps min to 0 and max to 255") {
    const auto g = rescale_to_gray(3, 1, {-2.0, 0.0, 2.0});
    CHECK(g.data() == std::vector<double>{0.0, 127.5, 255.0});
    CHECK(rescale_to_gray(2, 1, {4.0, 4.0}).data() == std::vector<double>{0.0, 0.0});
}

TEST_CASE("manifest loading") {
    TempDir dir("manifest");
    const GrayImage small(2, 2, {0, 50, 100, 150});
    save_pgm(small, dir / "a.pgm");
    save_pgm(small, dir / "b.pgm");
    save_pgm(small, dir / "c.pgm");

    SUBCASE("three roles, resized to the working size") {
        write_text(dir / "m.csv",
                   "path,label,role\na.pgm,s1,train\nb.pgm,s1,positive-test\nc.pgm,s2,negative-test\n");
        const auto ds = load_manifest(dir / "m.csv", ImageSize{4, 3});
        REQUIRE(ds.entries.size() == 3);
        CHECK(ds.entries[0].role == Role::train);
        CHECK(ds.entries[1].role == Role::positive_test);
        CHECK(ds.entries[2].role == Role::negative_test);
        CHECK(ds.entries[2].label == "s2");
        CHECK(ds.entries[0].image.width() == 4);
        CHECK(ds.entries[0].image.height() == 3);
        CHECK(ds.with_role(Role::train).size() == 1);
    }
    SUBCASE("header only is an empty dataset") {
        write_text(dir / "m.csv", "path,label,role\n");
        CHECK(load_manifest(dir / "m.csv").entries.empty());
    }
    SUBCASE("unknown role") {
        write_text(dir / "m.csv", "path,label,role\na.pgm,s1,probe\n");
        CHECK(manifest_error_kind(dir / "m.csv") == ManifestErrorKind::unknown_role);
    }
    SUBCASE("unreadable image names the path") {
        write_text(dir / "m.csv", "path,label,role\nmissing.pgm,s1,train\n");
        try {
            load_manifest(dir / "m.csv");
            FAIL("expected error");
        } catch (const ManifestError& e) {
            CHECK(e.kind() == ManifestErrorKind::unreadable_image);
            CHECK(std::string(e.what()).find("missing.pgm") != std::string::npos);
        }
    }
    SUBCASE("duplicate path and role") {
        write_text(dir / "m.csv", "path,label,role\na.pgm,s1,train\na.pgm,s1,train\n");
        CHECK(manifest_error_kind(dir / "m.csv") == ManifestErrorKind::duplicate_row);
    }
    SUBCASE("same path under two roles is fine") {
        write_text(dir / "m.csv", "path,label,role\na.pgm,s1,train\na.pgm,s1,positive-test\n");
        CHECK(load_manifest(dir / "m.csv").entries.size() == 2);
    }
    SUBCASE("bad header and malformed rows") {
        write_text(dir / "m.csv", "file,label,role\n");
        CHECK(manifest_error_kind(dir / "m.csv") == ManifestErrorKind::bad_header);
        write_text(dir / "m.csv", "path,label,role\na.pgm,s1\n");
        CHECK(manifest_error_kind(dir / "m.csv") == ManifestErrorKind::malformed_row);
        CHECK(manifest_error_kind(dir / "absent.csv") == ManifestErrorKind::missing_file);
    }
}

TEST_CASE("role tokens") {
    CHECK(parse_role("positive-test") == Role::positive_test);
    CHECK(parse_role("negative-test") == Role::negative_test);
    CHECK(parse_role("train") == Role::train);
    CHECK_FALSE(parse_role("probe").has_value());
    CHECK(to_string(Role::negative_test) == "negative-test");
}

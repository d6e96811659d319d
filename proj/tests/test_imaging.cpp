#include <doctest.h>

#include <fstream>
#include <random>
#include <string>

#include "support/oracles.hpp"
#include "support/temp_dir.hpp"
#include "tapemouse/imaging.hpp"

using namespace tapemouse;

TEST_CASE("rgb_to_hsv reference colours") {
    const HsvPixel red = rgb_to_hsv(255, 0, 0);
    CHECK(red.hue == 0.0);
    CHECK(red.saturation == 1.0);
    CHECK(red.value == 1.0);

    const HsvPixel grey = rgb_to_hsv(128, 128, 128);
    CHECK(grey.hue == 0.0);
    CHECK(grey.saturation == 0.0);
    CHECK(grey.value == doctest::Approx(128.0 / 255.0));
    CHECK(grey.value == doctest::Approx(0.502).epsilon(1e-3));

    const HsvPixel yellow = rgb_to_hsv(255, 255, 0);
    CHECK(yellow.hue == 60.0);
    CHECK(yellow.saturation == 1.0);
    CHECK(yellow.value == 1.0);

    CHECK(rgb_to_hsv(0, 0, 255).hue == 240.0);
    CHECK(rgb_to_hsv(0, 0, 0).saturation == 0.0);
    // Just below red on the circle.
    CHECK(rgb_to_hsv(255, 0, 21).hue == doctest::Approx(355.0588).epsilon(1e-4));
}

TEST_CASE("rgb_to_hsv stays in range and inverts on a 16^3 grid") {
    for (int r = 0; r < 256; r += 17) {
        for (int g = 0; g < 256; g += 17) {
            for (int b = 0; b < 256; b += 17) {
                const auto c = Rgb8{static_cast<std::uint8_t>(r), static_cast<std::uint8_t>(g),
                                    static_cast<std::uint8_t>(b)};
                const HsvPixel p = rgb_to_hsv(c);
                REQUIRE(p.hue >= 0.0);
                REQUIRE(p.hue < 360.0);
                REQUIRE(p.saturation >= 0.0);
                REQUIRE(p.saturation <= 1.0);
                if (p.saturation == 0.0) {
                    CHECK(p.hue == 0.0);
                    continue;
                }
                const auto back = oracle::hsv_to_rgb(p.hue, p.saturation, p.value);
                CHECK(std::abs(back.r - r) <= 1);
                CHECK(std::abs(back.g - g) <= 1);
                CHECK(std::abs(back.b - b) <= 1);
            }
        }
    }
}

TEST_CASE("load_ppm decodes a 2x1 image") {
    const std::string bytes = std::string("P6\n2 1\n255\n") + std::string("\xff\x00\x00\x00\xff\x00", 6);
    const Frame f = load_ppm(bytes);
    CHECK(f.width() == 2);
    CHECK(f.height() == 1);
    CHECK(f.at(0, 0) == Rgb8{255, 0, 0});
    CHECK(f.at(1, 0) == Rgb8{0, 255, 0});
}

TEST_CASE("load_ppm accepts comments and arbitrary whitespace in the header") {
    const std::string bytes = std::string("P6 # comment\n 1\t1 \n# more\n255\n") + std::string("\x01\x02\x03", 3);
    const Frame f = load_ppm(bytes);
    CHECK(f.at(0, 0) == Rgb8{1, 2, 3});
}

namespace {

PpmErrorKind error_kind(const std::string& bytes) {
    try {
        load_ppm(bytes);
    } catch (const PpmError& e) {
        return e.kind();
    }
    FAIL("expected PpmError");
    return PpmErrorKind::MalformedHeader;
}

}  // namespace

TEST_CASE("load_ppm reports each failure distinctly") {
    CHECK(error_kind("P6\n0 0\n255\n") == PpmErrorKind::BadDimensions);
    CHECK(error_kind("P6\n3 0\n255\n") == PpmErrorKind::BadDimensions);
    CHECK(error_kind("P5\n1 1\n255\n\x00") == PpmErrorKind::MalformedHeader);
    CHECK(error_kind("P6\nx 1\n255\n") == PpmErrorKind::MalformedHeader);
    CHECK(error_kind("P6\n1") == PpmErrorKind::MalformedHeader);
    CHECK(error_kind("") == PpmErrorKind::MalformedHeader);
    CHECK(error_kind("P6\n1 1\n65535\n\x00\x00\x00\x00\x00\x00") == PpmErrorKind::UnsupportedMaxval);
    CHECK(error_kind("P6\n1 1\n15\n\x00\x00\x00") == PpmErrorKind::UnsupportedMaxval);
    CHECK(error_kind("P6\n2 2\n255\n\x01\x02\x03") == PpmErrorKind::TruncatedPayload);
    CHECK(error_kind("P6\n1 1\n255") == PpmErrorKind::TruncatedPayload);
}

TEST_CASE("save_ppm writes the canonical header") {
    const Frame black(1, 1);
    CHECK(save_ppm(black) == std::string("P6\n1 1\n255\n\x00\x00\x00", 14));

    const Frame vga(640, 480);
    CHECK(save_ppm(vga).size() == 15 + 640 * 480 * 3);
    CHECK(load_ppm(save_ppm(vga)) == vga);
}

TEST_CASE("P6 round-trips byte for byte on generated files") {
    std::mt19937 rng(7);
    std::uniform_int_distribution<int> side(1, 40);
    std::uniform_int_distribution<int> byte(0, 255);
    for (int trial = 0; trial < 200; ++trial) {
        const int w = side(rng), h = side(rng);
        std::string file = "P6\n" + std::to_string(w) + " " + std::to_string(h) + "\n255\n";
        for (int i = 0; i < w * h * 3; ++i) {
            file.push_back(static_cast<char>(byte(rng)));
        }
        const Frame f = load_ppm(file);
        REQUIRE(save_ppm(f) == file);
        REQUIRE(load_ppm(save_ppm(f)) == f);
    }
}

TEST_CASE("Frame rejects inconsistent buffers") {
    CHECK_THROWS_AS(Frame(0, 5), std::invalid_argument);
    CHECK_THROWS_AS(Frame(2, 2, std::vector<std::uint8_t>(11)), std::invalid_argument);
    CHECK_THROWS_AS(Frame(1, 1, -1), std::invalid_argument);
}

TEST_CASE("synth_frame paints exactly the disk pixels") {
    SUBCASE("no disks") {
        const Frame f = synth_frame(8, 6, Rgb8{0, 0, 0}, {});
        CHECK(f == Frame(8, 6));
    }
    SUBCASE("one yellow disk against the brute-force oracle") {
        const DiskSpec disk{{100.0, 80.0}, 10.0, Rgb8{255, 255, 0}};
        const Frame f = synth_frame(320, 240, Rgb8{0, 0, 0}, std::span(&disk, 1));
        const auto expected = oracle::disk_pixels(100.0, 80.0, 10.0, 320, 240);
        std::size_t yellow = 0;
        for (std::size_t y = 0; y < 240; ++y) {
            for (std::size_t x = 0; x < 320; ++x) {
                yellow += f.at(x, y) == Rgb8{255, 255, 0};
            }
        }
        CHECK(yellow == expected.pixels.size());
        for (auto [x, y] : expected.pixels) {
            CHECK(f.at(static_cast<std::size_t>(x), static_cast<std::size_t>(y)) == Rgb8{255, 255, 0});
        }
    }
    SUBCASE("later disks overdraw earlier ones") {
        const DiskSpec disks[] = {{{20.0, 20.0}, 8.0, Rgb8{255, 0, 0}},
                                  {{26.0, 20.0}, 8.0, Rgb8{0, 0, 255}}};
        const Frame f = synth_frame(50, 40, Rgb8{0, 0, 0}, disks);
        CHECK(f.at(23, 19) == Rgb8{0, 0, 255});
        CHECK(f.at(13, 19) == Rgb8{255, 0, 0});
    }
    SUBCASE("disks partly outside the raster are clipped") {
        const DiskSpec disk{{-2.0, 3.0}, 6.0, Rgb8{9, 9, 9}};
        const Frame f = synth_frame(10, 10, Rgb8{0, 0, 0}, std::span(&disk, 1));
        CHECK(f.at(0, 3) == Rgb8{9, 9, 9});
        CHECK(f.at(9, 9) == Rgb8{0, 0, 0});
    }
}

TEST_CASE("synth_frame is deterministic") {
    const DiskSpec disks[] = {{{33.3, 12.7}, 5.5, Rgb8{1, 2, 3}}, {{10.0, 10.0}, 3.0, Rgb8{4, 5, 6}}};
    CHECK(save_ppm(synth_frame(64, 48, Rgb8{7, 7, 7}, disks, 5)) ==
          save_ppm(synth_frame(64, 48, Rgb8{7, 7, 7}, disks, 5)));
}

TEST_CASE("frame sequences read in lexicographic order with fps timestamps") {
    testing_support::TempDir dir("seq");
    for (std::size_t i : {3u, 1u, 2u}) {
        Frame f(1, 1);
        f.set(0, 0, Rgb8{static_cast<std::uint8_t>(i), 0, 0});
        write_ppm_file(dir / frame_file_name(i), f);
    }
    std::ofstream(dir / "notes.txt") << "ignored";
    const auto files = list_frame_files(dir.path());
    REQUIRE(files.size() == 3);
    CHECK(files[0].filename() == "frame_000001.ppm");
    CHECK(files[2].filename() == "frame_000003.ppm");
    CHECK(read_ppm_file(files[1]).at(0, 0).r == 2);

    CHECK(frame_timestamp_ms(0, 30) == 0);
    CHECK(frame_timestamp_ms(1, 30) == 33);
    CHECK(frame_timestamp_ms(209, 30) == 6966);
    CHECK(frame_timestamp_ms(210, 30) == 7000);
    CHECK_THROWS(frame_timestamp_ms(1, 0));
}

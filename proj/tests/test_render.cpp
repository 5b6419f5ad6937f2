#include <cmath>
#include <set>

#include "common.hpp"
#include "doctest.h"
#include "zvdl/render.hpp"
#include "zvdl/zeta.hpp"

using namespace zvdl;

namespace {

const GenericFunction kFourZeros = GenericFunction::with_finite_difference([](Complex s) {
    const Complex I(0.0, 1.0);
    return (s - 1.0) * (s - 1.0) * (s - I) * std::pow(s + 1.0, 5) / std::pow(s + I, 3);
});

std::set<Code> neighborhood(const QuadrantImage& img, Complex w) {
    const auto p = img.region.to_pixel(w);
    const int i = static_cast<int>(std::lround(p[0])), j = static_cast<int>(std::lround(p[1]));
    std::set<Code> out;
    for (int dj = -1; dj <= 1; ++dj) {
        for (int di = -1; di <= 1; ++di) out.insert(img.at(i + di, j + dj));
    }
    return out;
}

}  // namespace

TEST_CASE("quadrant_code follows the color table") {
    CHECK(quadrant_code(Complex(1, 1)) == Code::rich_blue);
    CHECK(quadrant_code(Complex(-20, 20)) == Code::pale_red);
    CHECK(quadrant_code(Complex(-1, -1)) == Code::rich_yellow);
    CHECK(quadrant_code(Complex(30, -1)) == Code::pale_green);
    CHECK(quadrant_code(Complex(0, 1)) == Code::black);
    CHECK(quadrant_code(Complex(1e-3, 1), 10.0, 1e-2) == Code::black);
}

TEST_CASE("quadrant_plot of the identity") {
    const PlotRegion r{0.0, 60.0, 60.0, 60, 60};
    const QuadrantImage img = quadrant_plot(GenericFunction::identity(), r);
    const auto at = [&](Complex w) {
        const auto p = r.to_pixel(w);
        return img.at(static_cast<int>(std::lround(p[0])), static_cast<int>(std::lround(p[1])));
    };
    CHECK(at(Complex(1.5, 1.5)) == Code::rich_blue);
    CHECK(at(Complex(-20.5, 20.5)) == Code::pale_red);
}

TEST_CASE("rational test function: rich colors meet at the zeros, pale at the pole") {
    const PlotRegion r{0.0, 4.0, 4.0, 400, 400};
    const QuadrantImage a = quadrant_plot(kFourZeros, r);
    const std::set<Code> rich = {Code::rich_blue, Code::rich_red, Code::rich_yellow, Code::rich_green};
    const std::set<Code> pale = {Code::pale_blue, Code::pale_red, Code::pale_yellow, Code::pale_green};
    CHECK(neighborhood(a, 1.0) == rich);
    CHECK(neighborhood(a, -1.0) == rich);
    CHECK(neighborhood(a, Complex(0, -1)) == pale);
    CHECK(ppm_bytes(to_rgb(a)) == ppm_bytes(to_rgb(quadrant_plot(kFourZeros, r))));
}

TEST_CASE("pole pixels take a pale hue") {
    // pixel centers of a 3x3 grid on [-1.5, 1.5]^2 include s = 0 exactly
    const GenericFunction inv = GenericFunction::with_finite_difference([](Complex s) { return 1.0 / s; });
    const QuadrantImage img = quadrant_plot(inv, PlotRegion{0.0, 3.0, 3.0, 3, 3});
    CHECK(img.pole_pixels == 1);
    const Code c = img.at(1, 1);
    CHECK((c == Code::pale_blue || c == Code::pale_red || c == Code::pale_yellow || c == Code::pale_green));
}

TEST_CASE("PlotRegion validation") {
    CHECK_THROWS_AS(quadrant_plot(kFourZeros, PlotRegion{0.0, 0.0, 4.0, 10, 10}), Error);
    CHECK_THROWS_AS(quadrant_plot(kFourZeros, PlotRegion{0.0, 4.0, 4.0, 0, 10}), Error);
    const PlotRegion r{Complex(1, 2), 4.0, 2.0, 40, 20};
    const auto p = r.to_pixel(r.at(7, 3));
    CHECK(std::abs(p[0] - 7) < 1e-9);
    CHECK(std::abs(p[1] - 3) < 1e-9);
}

TEST_CASE("basin_cell") {
    BasinParams p;
    CHECK(basin_cell(p.phi, p) == BasinCell::inside);
    CHECK(basin_cell(0.0, p) == BasinCell::inside);
    CHECK(basin_cell(-1.0, p) == BasinCell::inside);
    CHECK(basin_cell(Complex(1.0, 1e-7), p) == BasinCell::outside);
    // zeta(40) rounds to 1 + 1e-12: the orbit lands in the pole guard
    CHECK(basin_cell(40.0, p) == BasinCell::unresolved);
    // oracle: direct iteration from -3 settles on phi
    Complex w = -3.0;
    for (int n = 0; n < 300; ++n) w = zeta(w);
    CHECK(std::abs(w - p.phi) < 1e-9);
    CHECK(basin_cell(-3.0, p) == BasinCell::inside);
    BasinParams bad;
    bad.max_iter = 10;
    CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("basin modes agree on most pixels") {
    const PlotRegion r{Complex(-2.0, 0.0), 8.0, 8.0, 48, 48};
    BasinParams a;
    BasinParams b;
    b.mode = BasinMode::complement_a_infinity;
    const BasinImage ia = basin_plot(a, r), ib = basin_plot(b, r);
    std::size_t same = 0;
    for (std::size_t k = 0; k < ia.cells.size(); ++k) same += ia.cells[k] == ib.cells[k];
    CHECK(double(same) / ia.cells.size() > 0.99);
    CHECK(ppm_bytes(to_rgb(ia)) == ppm_bytes(to_rgb(basin_plot(a, r))));
}

TEST_CASE("spiral_overlay draws one marker per point and chords between them") {
    std::vector<Complex> pts;
    for (int n = 0; n < 8; ++n) pts.push_back(std::exp(-0.5 * n) * std::polar(1.0, 0.9 * n));
    const auto cp = CenteredPoints::from_points(pts, 0.0);
    const PlotRegion r = PlotRegion::fit(eversion_embed(cp).points, 200, 200);
    const RgbImage img = spiral_overlay(cp, r);
    std::size_t red = 0, blue = 0;
    for (const Rgb& p : img.pixels) {
        red += p == kMarkerRed;
        blue += p == kChordBlue;
    }
    CHECK(red == 8 * 9);
    CHECK(blue > 0);
    // every blue pixel lies on one of the 7 chords
    const Eversion ev = eversion_embed(cp);
    for (int j = 0; j < img.height; ++j) {
        for (int i = 0; i < img.width; ++i) {
            if (!(img.at(i, j) == kChordBlue)) continue;
            double best = 1e300;
            for (std::size_t k = 1; k < ev.points.size(); ++k) {
                const auto a = r.to_pixel(ev.points[k - 1]), b = r.to_pixel(ev.points[k]);
                const double dx = b[0] - a[0], dy = b[1] - a[1];
                const double t = std::clamp(((i - a[0]) * dx + (j - a[1]) * dy) / (dx * dx + dy * dy), 0.0, 1.0);
                best = std::min(best, std::hypot(i - a[0] - t * dx, j - a[1] - t * dy));
            }
            CHECK(best <= 1.5);
        }
    }
    CHECK_THROWS_AS(spiral_overlay(std::vector<Complex>{1.0}, 0.0, r), Error);
}

TEST_CASE("ppm encoding") {
    RgbImage one(1, 1, palette(Code::black));
    CHECK(ppm_bytes(one) == std::string("P6\n1 1\n255\n\0\0\0", 14));
    RgbImage two(2, 1, palette(Code::rich_blue));
    two.at(1, 0) = palette(Code::pale_green);
    const std::string b = ppm_bytes(two);
    const std::string payload = b.substr(b.size() - 6);
    CHECK(payload == std::string("\x00\x00\xff\xaa\xff\xaa", 6));
    CHECK_THROWS_AS(ppm_bytes(RgbImage{}), Error);
}

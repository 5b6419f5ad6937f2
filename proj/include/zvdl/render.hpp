#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "zvdl/spiral.hpp"
#include "zvdl/variant.hpp"

namespace zvdl {

/// Rectangle of the plane sampled on a px_width x px_height lattice.
struct PlotRegion {
    Complex center;
    double width = 4.0;
    double height = 4.0;
    int px_width = 400;
    int px_height = 400;

    /// Throws Errc::invalid_argument for non-positive sizes.
    void validate() const;
    /// Center of pixel (i, j); row 0 is the top row.
    Complex at(int i, int j) const;
    /// Fractional pixel coordinates of w (inverse of at()).
    std::array<double, 2> to_pixel(Complex w) const;
    /// Smallest region with the given aspect that holds every point, plus a margin.
    static PlotRegion fit(const std::vector<Complex>& points, int px_width, int px_height, double margin = 0.05);
};

enum class Code : std::uint8_t {
    black,
    rich_blue,
    pale_blue,
    rich_red,
    pale_red,
    rich_yellow,
    pale_yellow,
    rich_green,
    pale_green,
};

struct Rgb {
    std::uint8_t r, g, b;
    bool operator==(const Rgb&) const = default;
};

Rgb palette(Code c);

/// Color code of one value: quadrant of f picks the hue, |f| <= disk_radius
/// picks rich over pale, and a component within axis_tol (1 + |f|) of zero is black.
Code quadrant_code(Complex f, double disk_radius = 10.0, double axis_tol = 0.0);

struct QuadrantImage {
    PlotRegion region;
    std::vector<Code> codes;  ///< row-major, index j * px_width + i
    std::size_t pole_pixels = 0;
    std::size_t failed_pixels = 0;

    Code at(int i, int j) const { return codes[static_cast<std::size_t>(j) * region.px_width + i]; }
};

/// Pixels where f is not finite are treated as poles: they take the pale code
/// of f at a nearby point. Pixels where that fails too are black and counted.
QuadrantImage quadrant_plot(const GenericFunction& f, const PlotRegion& region, double disk_radius = 10.0,
                            double axis_tol = 0.0);

enum class BasinMode { a_phi, complement_a_infinity };
enum class BasinCell : std::uint8_t { outside, inside, unresolved };

struct BasinParams {
    BasinMode mode = BasinMode::a_phi;
    int max_iter = 400;
    double escape_radius = 1e6;
    double attract_tol = 1e-6;
    Complex phi{-0.29590500557521395, 0.0};

    /// Throws Errc::invalid_argument unless max_iter >= 50, escape_radius >= 100 and attract_tol > 0.
    void validate() const;
};

struct BasinImage {
    PlotRegion region;
    std::vector<BasinCell> cells;

    BasinCell at(int i, int j) const { return cells[static_cast<std::size_t>(j) * region.px_width + i]; }
};

/// Classification of a single start point under iteration of zeta.
BasinCell basin_cell(Complex w, const BasinParams& params);
BasinImage basin_plot(const BasinParams& params, const PlotRegion& region);

struct RgbImage {
    int width = 0;
    int height = 0;
    std::vector<Rgb> pixels;  ///< row-major

    RgbImage() = default;
    RgbImage(int w, int h, Rgb fill) : width(w), height(h), pixels(static_cast<std::size_t>(w) * h, fill) {}
    Rgb& at(int i, int j) { return pixels[static_cast<std::size_t>(j) * width + i]; }
    const Rgb& at(int i, int j) const { return pixels[static_cast<std::size_t>(j) * width + i]; }
};

RgbImage to_rgb(const QuadrantImage& img);
/// Inside black, outside white, unresolved mid grey.
RgbImage to_rgb(const BasinImage& img);

inline constexpr Rgb kWhite{255, 255, 255};
inline constexpr Rgb kMarkerRed{255, 0, 0};
inline constexpr Rgb kChordBlue{0, 0, 255};

/// Everted points as red 3x3 markers joined by blue chords on white.
/// Throws Errc::too_short for fewer than 2 points.
RgbImage spiral_overlay(const CenteredPoints& pts, const PlotRegion& region);
RgbImage spiral_overlay(const std::vector<Complex>& points, Complex center, const PlotRegion& region);

/// P6 encoding. Throws Errc::invalid_argument for an empty image.
std::string ppm_bytes(const RgbImage& img);
/// Throws Errc::io_failure.
void write_ppm(const RgbImage& img, const std::string& path);

}  // namespace zvdl

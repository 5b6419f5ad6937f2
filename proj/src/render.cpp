#include "zvdl/render.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <thread>

namespace zvdl {
namespace {

// Runs body(j) for every row; rows are split across threads but each writes
// only its own pixels, so the output does not depend on scheduling.
template <typename Body>
void for_rows(int rows, Body body) {
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const int workers = static_cast<int>(std::min<unsigned>(hw, static_cast<unsigned>(rows)));
    if (workers <= 1) {
        for (int j = 0; j < rows; ++j) body(j);
        return;
    }
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([=] {
            for (int j = w; j < rows; j += workers) body(j);
        });
    }
    for (auto& t : pool) t.join();
}

bool finite(Complex c) { return std::isfinite(c.real()) && std::isfinite(c.imag()); }

Code hue(Complex f, bool rich) {
    const bool re = f.real() > 0.0, im = f.imag() > 0.0;
    if (re && im) return rich ? Code::rich_blue : Code::pale_blue;
    if (!re && im) return rich ? Code::rich_red : Code::pale_red;
    if (!re && !im) return rich ? Code::rich_yellow : Code::pale_yellow;
    return rich ? Code::rich_green : Code::pale_green;
}

void plot(RgbImage& img, int i, int j, Rgb c) {
    if (i >= 0 && j >= 0 && i < img.width && j < img.height) img.at(i, j) = c;
}

void line(RgbImage& img, int x0, int y0, int x1, int y1, Rgb c) {
    const int dx = std::abs(x1 - x0), dy = -std::abs(y1 - y0);
    const int sx = x0 < x1 ? 1 : -1, sy = y0 < y1 ? 1 : -1;
    int err = dx + dy;
    for (;;) {
        plot(img, x0, y0, c);
        if (x0 == x1 && y0 == y1) return;
        const int e2 = 2 * err;
        if (e2 >= dy) {
            err += dy;
            x0 += sx;
        }
        if (e2 <= dx) {
            err += dx;
            y0 += sy;
        }
    }
}

}  // namespace

void PlotRegion::validate() const {
    if (!(width > 0.0 && height > 0.0) || px_width < 1 || px_height < 1) {
        throw Error(Errc::invalid_argument, "plot region needs positive extent and pixel counts");
    }
}

Complex PlotRegion::at(int i, int j) const {
    const double re = ((i + 0.5) / px_width - 0.5) * width;
    const double im = (0.5 - (j + 0.5) / px_height) * height;
    return center + Complex(re, im);
}

std::array<double, 2> PlotRegion::to_pixel(Complex w) const {
    const Complex d = w - center;
    return {(d.real() / width + 0.5) * px_width - 0.5, (0.5 - d.imag() / height) * px_height - 0.5};
}

PlotRegion PlotRegion::fit(const std::vector<Complex>& points, int px_width, int px_height, double margin) {
    if (points.empty()) throw Error(Errc::too_short, "nothing to fit");
    double x0 = HUGE_VAL, x1 = -HUGE_VAL, y0 = HUGE_VAL, y1 = -HUGE_VAL;
    for (Complex p : points) {
        x0 = std::min(x0, p.real());
        x1 = std::max(x1, p.real());
        y0 = std::min(y0, p.imag());
        y1 = std::max(y1, p.imag());
    }
    PlotRegion r;
    r.px_width = px_width;
    r.px_height = px_height;
    r.center = Complex((x0 + x1) / 2, (y0 + y1) / 2);
    const double aspect = double(px_width) / px_height;
    double w = std::max(x1 - x0, 1e-300), h = std::max(y1 - y0, 1e-300);
    if (w / h > aspect) {
        h = w / aspect;
    } else {
        w = h * aspect;
    }
    r.width = w * (1.0 + 2.0 * margin);
    r.height = h * (1.0 + 2.0 * margin);
    r.validate();
    return r;
}

Rgb palette(Code c) {
    switch (c) {
        case Code::black: return {0, 0, 0};
        case Code::rich_blue: return {0, 0, 255};
        case Code::pale_blue: return {170, 170, 255};
        case Code::rich_red: return {255, 0, 0};
        case Code::pale_red: return {255, 170, 170};
        case Code::rich_yellow: return {255, 215, 0};
        case Code::pale_yellow: return {255, 255, 170};
        case Code::rich_green: return {0, 160, 0};
        case Code::pale_green: return {170, 255, 170};
    }
    return {0, 0, 0};
}

Code quadrant_code(Complex f, double disk_radius, double axis_tol) {
    const double band = axis_tol * (1.0 + std::abs(f));
    if (std::abs(f.real()) <= band || std::abs(f.imag()) <= band) return Code::black;
    return hue(f, std::abs(f) <= disk_radius);
}

QuadrantImage quadrant_plot(const GenericFunction& f, const PlotRegion& region, double disk_radius, double axis_tol) {
    region.validate();
    QuadrantImage img;
    img.region = region;
    img.codes.assign(static_cast<std::size_t>(region.px_width) * region.px_height, Code::black);
    std::vector<unsigned char> kind(img.codes.size(), 0);  // 1 pole, 2 failure

    for_rows(region.px_height, [&](int j) {
        for (int i = 0; i < region.px_width; ++i) {
            const std::size_t idx = static_cast<std::size_t>(j) * region.px_width + i;
            const Complex w = region.at(i, j);
            Complex v;
            bool ok = true;
            try {
                v = f(w);
                ok = finite(v);
            } catch (const Error&) {
                ok = false;
            }
            if (ok) {
                img.codes[idx] = quadrant_code(v, disk_radius, axis_tol);
                continue;
            }
            // pole: direction of f just off the singular point
            const double h = 1e-7 * std::max(region.width / region.px_width, 1e-12);
            try {
                const Complex near = f(w + Complex(h, h));
                if (finite(near) && near != 0.0) {
                    img.codes[idx] = hue(near, false);
                    kind[idx] = 1;
                    continue;
                }
            } catch (const Error&) {
            }
            kind[idx] = 2;
        }
    });
    img.pole_pixels = static_cast<std::size_t>(std::count(kind.begin(), kind.end(), 1));
    img.failed_pixels = static_cast<std::size_t>(std::count(kind.begin(), kind.end(), 2));
    return img;
}

void BasinParams::validate() const {
    if (max_iter < 50) throw Error(Errc::invalid_argument, "basin max_iter must be >= 50");
    if (!(escape_radius >= 100.0)) throw Error(Errc::invalid_argument, "escape radius must be >= 100");
    if (!(attract_tol > 0.0)) throw Error(Errc::invalid_argument, "attract_tol must be > 0");
}

BasinCell basin_cell(Complex w, const BasinParams& p) {
    // Once an orbit has settled on the attracting fixed point it stays bounded,
    // so both modes can stop there.
    int settled = -1;
    try {
        for (int n = 0; n <= p.max_iter; ++n) {
            if (!finite(w) || std::abs(w) > p.escape_radius) return BasinCell::outside;
            if (std::abs(w - p.phi) <= p.attract_tol) {
                if (settled < 0) settled = n;
                if (n - settled >= 3) return BasinCell::inside;
            } else {
                settled = -1;
            }
            if (n == p.max_iter) break;
            w = zeta(w);
        }
    } catch (const Error&) {
        return BasinCell::unresolved;  // orbit hit the pole
    }
    // orbit stayed bounded without settling on phi
    return p.mode == BasinMode::complement_a_infinity ? BasinCell::inside : BasinCell::outside;
}

BasinImage basin_plot(const BasinParams& params, const PlotRegion& region) {
    params.validate();
    region.validate();
    BasinImage img;
    img.region = region;
    img.cells.assign(static_cast<std::size_t>(region.px_width) * region.px_height, BasinCell::outside);
    for_rows(region.px_height, [&](int j) {
        for (int i = 0; i < region.px_width; ++i) {
            img.cells[static_cast<std::size_t>(j) * region.px_width + i] = basin_cell(region.at(i, j), params);
        }
    });
    return img;
}

RgbImage to_rgb(const QuadrantImage& img) {
    RgbImage out(img.region.px_width, img.region.px_height, {0, 0, 0});
    for (std::size_t k = 0; k < img.codes.size(); ++k) out.pixels[k] = palette(img.codes[k]);
    return out;
}

RgbImage to_rgb(const BasinImage& img) {
    RgbImage out(img.region.px_width, img.region.px_height, kWhite);
    for (std::size_t k = 0; k < img.cells.size(); ++k) {
        switch (img.cells[k]) {
            case BasinCell::inside: out.pixels[k] = {0, 0, 0}; break;
            case BasinCell::outside: out.pixels[k] = kWhite; break;
            case BasinCell::unresolved: out.pixels[k] = {128, 128, 128}; break;
        }
    }
    return out;
}

RgbImage spiral_overlay(const CenteredPoints& pts, const PlotRegion& region) {
    region.validate();
    if (pts.size() < 2) throw Error(Errc::too_short, "overlay needs at least 2 points");
    const std::vector<Complex> ev = eversion_embed(pts).points;
    RgbImage img(region.px_width, region.px_height, kWhite);
    std::vector<std::array<int, 2>> px;
    px.reserve(ev.size());
    for (Complex p : ev) {
        const auto f = region.to_pixel(p);
        // clamp far-away points so the chord direction survives without int overflow
        const double lim = 4.0 * std::max(region.px_width, region.px_height);
        px.push_back({static_cast<int>(std::lround(std::clamp(f[0], -lim, lim))),
                      static_cast<int>(std::lround(std::clamp(f[1], -lim, lim)))});
    }
    for (std::size_t k = 1; k < px.size(); ++k) line(img, px[k - 1][0], px[k - 1][1], px[k][0], px[k][1], kChordBlue);
    for (const auto& p : px) {
        for (int di = -1; di <= 1; ++di) {
            for (int dj = -1; dj <= 1; ++dj) plot(img, p[0] + di, p[1] + dj, kMarkerRed);
        }
    }
    return img;
}

RgbImage spiral_overlay(const std::vector<Complex>& points, Complex center, const PlotRegion& region) {
    return spiral_overlay(CenteredPoints::from_points(points, center), region);
}

std::string ppm_bytes(const RgbImage& img) {
    if (img.width < 1 || img.height < 1 || img.pixels.size() != static_cast<std::size_t>(img.width) * img.height) {
        throw Error(Errc::invalid_argument, "empty or malformed image");
    }
    std::string out = "P6\n" + std::to_string(img.width) + " " + std::to_string(img.height) + "\n255\n";
    out.reserve(out.size() + img.pixels.size() * 3);
    for (const Rgb& p : img.pixels) {
        out.push_back(static_cast<char>(p.r));
        out.push_back(static_cast<char>(p.g));
        out.push_back(static_cast<char>(p.b));
    }
    return out;
}

void write_ppm(const RgbImage& img, const std::string& path) {
    const std::string bytes = ppm_bytes(img);
    std::ofstream os(path, std::ios::binary);
    if (!os) throw Error(Errc::io_failure, "cannot open " + path);
    os.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!os) throw Error(Errc::io_failure, "write failed for " + path);
}

}  // namespace zvdl

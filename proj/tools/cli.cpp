#include "cli.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "cache.hpp"
#include "json.hpp"
#include "zvdl/harness.hpp"
#include "zvdl/io.hpp"
#include "zvdl/render.hpp"
#include "zvdl/zeta.hpp"

namespace zvdl::cli {
namespace {

using nlohmann::json;

int exit_code_for(Errc c) {
    switch (c) {
        case Errc::parse_error:
        case Errc::invalid_argument:
        case Errc::io_failure:
        case Errc::window_out_of_range:
        case Errc::empty_result: return kUsage;
        case Errc::trace_broken:
        case Errc::residual_degraded: return kTraceFailure;
        default: return kDomain;
    }
}

std::string fmt15(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    return buf;
}

std::string fmt_complex15(Complex c) {
    if (c.imag() == 0.0) return fmt15(c.real());
    const std::string im = fmt15(std::abs(c.imag())) + "i";
    if (c.real() == 0.0) return (c.imag() < 0 ? "-" : "") + im;
    return fmt15(c.real()) + (c.imag() < 0 ? "-" : "+") + im;
}

json pair(Complex c) { return json::array({c.real(), c.imag()}); }

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> out = parse_index_range(text);
    if (out.empty()) throw Error(Errc::parse_error, "empty list '" + text + "'");
    return out;
}

// ---- traces --------------------------------------------------------------

struct TraceRequest {
    int zero = 1;
    std::string u = "1,0";
    double dx = 1.0;
    int count = 301;
    double tol = 1e-12;
};

struct TraceOutcome {
    TraceFile file;
    Complex rho;
    std::optional<std::string> error;
    std::vector<std::string> warnings;
};

json trace_manifest(const TraceRequest& r, Complex u) {
    return {{"kind", "trace"}, {"format", 1},       {"zero", r.zero}, {"u", pair(u)},
            {"dx", r.dx},      {"count", r.count}, {"tol", r.tol}};
}

// Cached traces are stored as trace CSV at 17 digits, which reproduces every
// double exactly. Broken traces are never cached.
TraceOutcome obtain_trace(const TraceRequest& req, const std::optional<Cache>& cache) {
    const Complex u = parse_complex(req.u);
    const RaySpec ray(u);
    const Progression prog(req.dx, req.count);
    NewtonConfig cfg;
    cfg.tol = req.tol;
    cfg.validate();

    TraceOutcome out;
    out.rho = riemann_zero(req.zero);
    if (!ray.is_real() && !(out.rho.imag() * u.imag() < 0.0)) {
        throw Error(Errc::invalid_argument, "a non-real ray needs Im rho * Im u < 0");
    }
    const json manifest = trace_manifest(req, u);
    if (cache) {
        if (auto bytes = cache->load(manifest, ".csv")) {
            std::istringstream is(*bytes);
            try {
                out.file = read_trace_csv(is);
                return out;
            } catch (const Error&) {
                // unreadable entry: recompute and overwrite
            }
        }
    }
    const NearestFixpoint nf = nearest_fixpoint_to_zero(out.rho, cfg);
    out.warnings = nf.warnings;
    TraceOptions opts;
    opts.target = out.rho;
    out.file.zero_index = req.zero;
    try {
        out.file.seq = trace_ray(ray, prog, nf.psi, cfg, opts);
    } catch (const TraceError& e) {
        out.file.seq = e.partial();
        out.file.partial = true;
        out.error = e.what();
        return out;
    }
    if (cache) {
        std::ostringstream os;
        write_trace_csv(os, out.file.seq, req.zero, false);
        cache->store(manifest, ".csv", os.str());
    }
    return out;
}

Complex center_of(const FixedPointSequence& seq, Complex fallback) {
    if (seq.center) return *seq.center;
    if (seq.target) return *seq.target;
    return fallback;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw Error(Errc::io_failure, "cannot open " + path);
    os << text;
    if (!os) throw Error(Errc::io_failure, "write failed for " + path);
}

TraceFile load_trace_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw Error(Errc::io_failure, "missing trace file " + path);
    return read_trace_csv(is);
}

// ---- commands ------------------------------------------------------------

struct EvalArgs {
    std::string s;
    std::string z;
};

int cmd_eval(const EvalArgs& a, std::ostream& out) {
    const Complex s = parse_complex(a.s);
    std::optional<Complex> z;
    if (!a.z.empty()) z = parse_complex(a.z);
    const Complex zs = zeta(s);
    const std::optional<Complex> vz = z ? std::optional<Complex>(v(*z, s)) : std::nullopt;
    out << "zeta(s) = " << fmt_complex15(zs) << "\n";
    if (vz) out << "V_z(s) = " << fmt_complex15(*vz) << "\n";
    return kOk;
}

struct TraceArgs {
    TraceRequest req;
    std::string out = "trace";
    std::string Ks = "25,50,100";
    int K = 50;
    bool no_cache = false;
};

int cmd_trace(const TraceArgs& a, std::ostream& out, std::ostream& err) {
    const std::vector<int> Ks = parse_int_list(a.Ks);
    std::optional<Cache> cache;
    if (!a.no_cache) cache.emplace(default_cache_dir());
    const TraceOutcome t = obtain_trace(a.req, cache);
    for (const auto& w : t.warnings) err << "warning: " << w << "\n";
    const FixedPointSequence& seq = t.file.seq;

    std::ostringstream trace_csv;
    write_trace_csv(trace_csv, seq, a.req.zero, t.file.partial);
    write_text(a.out + ".csv", trace_csv.str());

    json report;
    if (seq.points.size() >= 2) {
        ConjectureReport r = conjecture2_from_trace(a.req.zero, t.rho, seq, Ks);
        if (t.error) {
            r.converged = false;
            r.error = *t.error + (r.error ? "; " + *r.error : std::string());
        }
        report = to_json(r);
        try {
            const PolarTrace pt = unwrap_theta(CenteredPoints::from_sequence(seq, center_of(seq, t.rho)));
            std::ostringstream stats;
            write_stats_csv(stats, pt, a.K);
            write_text(a.out + "_stats.csv", stats.str());
        } catch (const Error& e) {
            report["stats_error"] = e.what();
        }
    } else {
        report = {{"zero_index", a.req.zero}, {"converged", false}};
        if (t.error) report["error"] = *t.error;
    }
    report["partial"] = t.file.partial;
    report["manifest"] = trace_manifest(a.req, parse_complex(a.req.u));
    write_text(a.out + ".json", report.dump(2) + "\n");
    out << "wrote " << a.out << ".csv (" << seq.points.size() << " points"
        << (t.file.partial ? ", partial" : "") << ")\n";
    if (t.file.partial) {
        err << "trace failed: " << t.error.value_or("unknown") << "\n";
        return kTraceFailure;
    }
    return kOk;
}

struct CoarsenArgs {
    std::string trace_file;
    std::string filters;
    std::string out = "coarsen.csv";
    double from_x = 0.0;
};

CenteredPoints tail_from(const CenteredPoints& all, const FixedPointSequence& seq, double from_x) {
    std::size_t start = 0;
    while (start < seq.points.size() && seq.points[start].x < from_x - 1e-9 * std::max(1.0, std::abs(from_x))) ++start;
    CenteredPoints tail;
    tail.center = all.center;
    tail.log_offsets.assign(all.log_offsets.begin() + static_cast<std::ptrdiff_t>(start), all.log_offsets.end());
    tail.resolution.assign(all.resolution.begin() + static_cast<std::ptrdiff_t>(start), all.resolution.end());
    if (tail.size() < 2) throw Error(Errc::too_short, "fewer than 2 points at or after the requested x");
    return tail;
}

int cmd_coarsen(const CoarsenArgs& a, std::ostream& out) {
    const std::vector<int> filters = parse_filter_indices(a.filters);
    const TraceFile tf = load_trace_file(a.trace_file);
    const Complex c = center_of(tf.seq, tf.seq.points.empty() ? Complex() : tf.seq.points.back().phi);
    const CenteredPoints pts = tail_from(CenteredPoints::from_sequence(tf.seq, c), tf.seq, a.from_x);
    const CoarseningSweep sweep = coarsening_sweep(pts, filters);

    std::ostringstream os;
    os << "# center=" << format_double(c.real()) << "," << format_double(c.imag()) << "\n";
    os << "filter_index,points,slope,intercept,r_squared,slope_diff,intercept_diff,polygon_length\n";
    std::vector<double> lengths;
    for (std::size_t i = 0; i < sweep.filter_indices.size(); ++i) {
        const CenteredPoints sub = coarsen(pts, sweep.filter_indices[i]);
        const LinearModel& m = sweep.models[i];
        os << sweep.filter_indices[i] << ',' << sub.size() << ',' << format_double(m.m) << ','
           << format_double(m.b) << ',' << format_double(m.r_squared) << ',';
        if (i > 0) os << format_double(sweep.slope_diffs[i - 1]) << ',' << format_double(sweep.intercept_diffs[i - 1]);
        else os << ',';
        os << ',';
        if (sub.size() >= 2) {
            lengths.push_back(polygon_length(eversion_embed(sub).points));
            os << format_double(lengths.back());
        }
        os << '\n';
    }
    write_text(a.out, os.str());
    out << "wrote " << a.out << " (" << sweep.filter_indices.size() << " rows)\n";
    if (sweep.slope_diffs.size() >= 2) {
        out << "slope diffs decreasing: " << fraction_decreasing(sweep.slope_diffs) << "\n";
        out << "intercept diffs decreasing: " << fraction_decreasing(sweep.intercept_diffs) << "\n";
    }
    if (lengths.size() >= 3) {
        std::vector<double> diffs;
        for (std::size_t i = 1; i < lengths.size(); ++i) diffs.push_back(std::abs(lengths[i] - lengths[i - 1]));
        out << "polygon length diffs decreasing: " << fraction_decreasing(diffs) << "\n";
    }
    return kOk;
}

struct RenderArgs {
    std::string kind;
    std::string function = "zeta";
    std::string z = "1,0";
    std::string center = "0,0";
    double width = 4.0;
    double height = 4.0;
    int px = 400;
    int py = 400;
    double disk = 10.0;
    double axis_tol = 0.0;
    std::string mode = "a-phi";
    int max_iter = 400;
    double escape = 1e6;
    double attract_tol = 1e-6;
    std::string trace_file;
    double from_x = 0.0;
    std::string out;
};

// Named functions for quadrant plots.
GenericFunction function_by_name(const std::string& name, Complex z) {
    if (name == "zeta") return GenericFunction::zeta();
    if (name == "zeta-minus-s") {
        return GenericFunction([](Complex s) { return zeta(s) - s; }, [](Complex s) { return zeta_deriv(s) - 1.0; });
    }
    if (name == "v-minus-s") {
        return GenericFunction([z](Complex s) { return v(z, s) - s; },
                               [z](Complex s) { return v_deriv(z, s) - 1.0; });
    }
    if (name == "rational-demo") {
        // (s - 1)^2 (s - i)(s + 1)^5 / (s + i)^3
        const Complex I(0.0, 1.0);
        return GenericFunction::with_finite_difference(
            [I](Complex s) { return (s - 1.0) * (s - 1.0) * (s - I) * std::pow(s + 1.0, 5) / std::pow(s + I, 3); });
    }
    throw Error(Errc::parse_error, "unknown function '" + name + "' (zeta, zeta-minus-s, v-minus-s, rational-demo)");
}

int cmd_render(const RenderArgs& a, std::ostream& out) {
    if (a.out.empty()) throw Error(Errc::invalid_argument, "render needs --out");
    PlotRegion region{parse_complex(a.center), a.width, a.height, a.px, a.py};
    RgbImage img;
    if (a.kind == "quadrant") {
        const QuadrantImage q = quadrant_plot(function_by_name(a.function, parse_complex(a.z)), region, a.disk, a.axis_tol);
        img = to_rgb(q);
        out << "pole pixels " << q.pole_pixels << ", failed pixels " << q.failed_pixels << "\n";
    } else if (a.kind == "basin") {
        BasinParams p;
        if (a.mode == "a-phi") p.mode = BasinMode::a_phi;
        else if (a.mode == "complement") p.mode = BasinMode::complement_a_infinity;
        else throw Error(Errc::parse_error, "unknown basin mode '" + a.mode + "' (a-phi, complement)");
        p.max_iter = a.max_iter;
        p.escape_radius = a.escape;
        p.attract_tol = a.attract_tol;
        img = to_rgb(basin_plot(p, region));
    } else if (a.kind == "spiral") {
        if (a.trace_file.empty()) throw Error(Errc::invalid_argument, "spiral render needs --trace");
        const TraceFile tf = load_trace_file(a.trace_file);
        const Complex c = center_of(tf.seq, tf.seq.points.empty() ? Complex() : tf.seq.points.back().phi);
        const CenteredPoints pts = tail_from(CenteredPoints::from_sequence(tf.seq, c), tf.seq, a.from_x);
        const PlotRegion fitted = PlotRegion::fit(eversion_embed(pts).points, a.px, a.py);
        img = spiral_overlay(pts, fitted);
    } else {
        throw Error(Errc::parse_error, "render kind must be quadrant, basin or spiral");
    }
    write_ppm(img, a.out);
    out << "wrote " << a.out << " (" << img.width << "x" << img.height << ")\n";
    return kOk;
}

struct VerifyArgs {
    std::string suite;
    std::string zeros = "1..10";
    TraceRequest req;
    double identity_tol = 1e-6;
    double sigma_tol = 1e-5;
    std::string Ks = "25,50,100";
    std::string out;
    bool no_cache = false;
};

struct VerifyResult {
    json report;
    bool ok = false;
};

VerifyResult verify_one(const VerifyArgs& a, int zero, const std::vector<int>& Ks, const std::optional<Cache>& cache) {
    VerifyResult res;
    TraceRequest req = a.req;
    req.zero = zero;
    try {
        const TraceOutcome t = obtain_trace(req, cache);
        const FixedPointSequence& seq = t.file.seq;
        if (a.suite == "conjecture2") {
            ConjectureReport r = conjecture2_from_trace(zero, t.rho, seq, Ks);
            if (t.error) {
                r.converged = false;
                r.error = *t.error;
            }
            res.report = to_json(r);
            res.ok = !t.error && r.all_hold();
            return res;
        }
        if (t.error) throw Error(Errc::trace_broken, *t.error);
        if (a.suite == "theorem1") {
            const Theorem1Report r = check_theorem1(seq, GenericFunction::zeta(), a.identity_tol);
            res.report = to_json(r);
            res.ok = r.verdict == TheoremVerdict::consistent;
        } else if (a.suite == "corollary") {
            const CorollaryVerdict v = check_corollary(seq);
            res.report = {{"verdict", std::string(to_string(v))}};
            if (auto l = limit_estimate(seq)) res.report["limit"] = pair(*l);
            res.ok = v == CorollaryVerdict::riemann_zero;
        } else {
            const Question1Report r = check_question1(seq);
            res.report = {{"sigma_estimate", r.sigma_estimate}, {"gap_to_half", r.gap_to_half}};
            if (r.decay_of_re_parts) {
                res.report["decay"] = {{"slope", r.decay_of_re_parts->slope},
                                       {"r_squared", r.decay_of_re_parts->r_squared},
                                       {"is_exponential_decay", r.decay_of_re_parts->is_exponential_decay}};
            }
            res.ok = r.gap_to_half < a.sigma_tol;
        }
    } catch (const Error& e) {
        res.report["error"] = e.what();
        res.ok = false;
    }
    return res;
}

int cmd_verify(const VerifyArgs& a, std::ostream& out) {
    static const std::vector<std::string> suites = {"theorem1", "corollary", "conjecture2", "question1"};
    if (std::find(suites.begin(), suites.end(), a.suite) == suites.end()) {
        throw Error(Errc::parse_error, "suite must be theorem1, corollary, conjecture2 or question1");
    }
    const std::vector<int> zeros = parse_index_range(a.zeros);
    if (zeros.empty()) throw Error(Errc::empty_result, "empty zero range '" + a.zeros + "'");
    for (int n : zeros) {
        if (n < 1 || n > kMaxZeroIndex) throw Error(Errc::out_of_range, "zero index " + std::to_string(n));
    }
    const std::vector<int> Ks = parse_int_list(a.Ks);
    parse_complex(a.req.u);
    std::optional<Cache> cache;
    if (!a.no_cache) cache.emplace(default_cache_dir());

    // each zero is independent; results are collected by position so output
    // order does not depend on scheduling
    std::vector<VerifyResult> results(zeros.size());
    std::atomic<std::size_t> next{0};
    const unsigned workers = std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(),
                                                             static_cast<unsigned>(zeros.size())));
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t k = next++; k < zeros.size(); k = next++) results[k] = verify_one(a, zeros[k], Ks, cache);
        });
    }
    for (auto& t : pool) t.join();

    std::ostringstream lines;
    json failed = json::array();
    for (std::size_t k = 0; k < zeros.size(); ++k) {
        json j = results[k].report;
        j["zero_index"] = zeros[k];
        j["suite"] = a.suite;
        j["ok"] = results[k].ok;
        if (!results[k].ok) failed.push_back(zeros[k]);
        lines << j.dump() << "\n";
    }
    json summary = {{"summary", true},
                    {"suite", a.suite},
                    {"count", zeros.size()},
                    {"passed", zeros.size() - failed.size()},
                    {"failed", failed},
                    {"all_ok", failed.empty()},
                    {"manifest", trace_manifest(a.req, parse_complex(a.req.u))}};
    summary["manifest"].erase("zero");
    lines << summary.dump() << "\n";
    if (!a.out.empty()) write_text(a.out, lines.str());
    out << lines.str();
    return failed.empty() ? kOk : kVerdictFailure;
}

void add_trace_request(CLI::App* cmd, TraceRequest& r, bool with_zero) {
    if (with_zero) cmd->add_option("--zero", r.zero, "Zero index n of rho_n (1-based)")->required();
    cmd->add_option("--u", r.u, "Ray direction as re,im (|u| = 1)");
    cmd->add_option("--dx", r.dx, "Progression step");
    cmd->add_option("--count", r.count, "Number of progression members");
    cmd->add_option("--tol", r.tol, "Relative Newton residual tolerance");
}

}  // namespace

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Zeta fixed points, V-variants and spiral statistics"};
    app.set_config("--config", "", "INI file with the same keys as the flags; flags override it");
    app.require_subcommand(1);

    EvalArgs eval_args;
    auto* eval = app.add_subcommand("eval", "Evaluate zeta(s) and optionally V_z(s)");
    eval->add_option("--s", eval_args.s, "Point s as re,im or a+bi")->required();
    eval->add_option("--z", eval_args.z, "Variant parameter z as re,im");

    TraceArgs trace_args;
    auto* trace = app.add_subcommand("trace", "Trace the fixed-point sequence toward rho_n");
    add_trace_request(trace, trace_args.req, true);
    trace->add_option("--out", trace_args.out, "Output prefix for .csv, _stats.csv and .json");
    trace->add_option("--Ks", trace_args.Ks, "Window sizes for the nearly-logarithmic test");
    trace->add_option("--K", trace_args.K, "Window size of the d_h column in the statistics CSV");
    trace->add_flag("--no-cache", trace_args.no_cache, "Do not read or write the trace cache");

    CoarsenArgs coarsen_args;
    auto* coarsen_cmd = app.add_subcommand("coarsen", "Linear models and polygon lengths over filter indices");
    coarsen_cmd->add_option("trace_file", coarsen_args.trace_file, "Trace CSV written by 'trace'")->required();
    coarsen_cmd->add_option("--filters", coarsen_args.filters, "e.g. 512,128,64,16 or 2^13..2^0")->required();
    coarsen_cmd->add_option("--from-x", coarsen_args.from_x, "Use only members with x >= this");
    coarsen_cmd->add_option("--out", coarsen_args.out, "Sweep CSV path");

    RenderArgs render_args;
    auto* render = app.add_subcommand("render", "Write a PPM image");
    render->add_option("kind", render_args.kind, "quadrant, basin or spiral")->required();
    render->add_option("--function", render_args.function, "zeta, zeta-minus-s, v-minus-s or rational-demo");
    render->add_option("--z", render_args.z, "z for v-minus-s");
    render->add_option("--center", render_args.center, "Region center as re,im");
    render->add_option("--width", render_args.width, "Region width");
    render->add_option("--height", render_args.height, "Region height");
    render->add_option("--px", render_args.px, "Image width in pixels");
    render->add_option("--py", render_args.py, "Image height in pixels");
    render->add_option("--disk", render_args.disk, "Rich/pale radius for quadrant plots");
    render->add_option("--axis-tol", render_args.axis_tol, "Relative band painted black around the axes");
    render->add_option("--mode", render_args.mode, "Basin mode: a-phi or complement");
    render->add_option("--max-iter", render_args.max_iter, "Basin iteration limit");
    render->add_option("--escape", render_args.escape, "Basin escape radius");
    render->add_option("--attract-tol", render_args.attract_tol, "Basin settling distance to phi");
    render->add_option("--trace", render_args.trace_file, "Trace CSV for spiral renders");
    render->add_option("--from-x", render_args.from_x, "Spiral: use only members with x >= this");
    render->add_option("--out", render_args.out, "Output .ppm path")->required();

    VerifyArgs verify_args;
    auto* verify = app.add_subcommand("verify", "Run a verdict suite over a range of zeros");
    verify->add_option("suite", verify_args.suite, "theorem1, corollary, conjecture2 or question1")->required();
    verify->add_option("--zeros", verify_args.zeros, "Zero index range, e.g. 1..10");
    add_trace_request(verify, verify_args.req, false);
    verify->add_option("--identity-tol", verify_args.identity_tol, "Theorem 1 tolerance");
    verify->add_option("--sigma-tol", verify_args.sigma_tol, "Question 1 bound on |sigma - 1/2|");
    verify->add_option("--Ks", verify_args.Ks, "Window sizes for conjecture2");
    verify->add_option("--out", verify_args.out, "Also write the JSON lines here");
    verify->add_flag("--no-cache", verify_args.no_cache, "Do not read or write the trace cache");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        return kUsage;
    }

    try {
        if (eval->parsed()) return cmd_eval(eval_args, out);
        if (trace->parsed()) return cmd_trace(trace_args, out, err);
        if (coarsen_cmd->parsed()) return cmd_coarsen(coarsen_args, out);
        if (render->parsed()) return cmd_render(render_args, out);
        if (verify->parsed()) return cmd_verify(verify_args, out);
    } catch (const Error& e) {
        err << e.what() << "\n";
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kDomain;
    }
    return kUsage;
}

}  // namespace zvdl::cli

#include "zvdl/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace zvdl {
namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& text) {
    const std::string t = trim(text);
    if (t.empty()) throw Error(Errc::parse_error, "empty number");
    char* end = nullptr;
    const double v = std::strtod(t.c_str(), &end);
    if (end != t.c_str() + t.size()) throw Error(Errc::parse_error, "bad number '" + t + "'");
    return v;
}

int parse_int(const std::string& text) {
    const std::string t = trim(text);
    if (t.empty()) throw Error(Errc::parse_error, "empty integer");
    char* end = nullptr;
    const long v = std::strtol(t.c_str(), &end, 10);
    if (end != t.c_str() + t.size() || v < -(1L << 30) || v > (1L << 30)) {
        throw Error(Errc::parse_error, "bad integer '" + t + "'");
    }
    return static_cast<int>(v);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

// a+bi forms; the split point is the last sign not following an exponent marker
Complex parse_algebraic(const std::string& t) {
    if (t.back() != 'i') return {parse_double(t), 0.0};
    const std::string body = t.substr(0, t.size() - 1);
    std::size_t cut = std::string::npos;
    for (std::size_t k = body.size(); k-- > 1;) {
        if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
            cut = k;
            break;
        }
    }
    const std::string re = cut == std::string::npos ? "" : body.substr(0, cut);
    std::string im = cut == std::string::npos ? body : body.substr(cut);
    if (im.empty() || im == "+") im = "1";
    if (im == "-") im = "-1";
    return {re.empty() ? 0.0 : parse_double(re), parse_double(im)};
}

std::string fmt_complex(Complex c) { return format_double(c.real()) + "," + format_double(c.imag()); }

}  // namespace

Complex parse_complex(const std::string& text) {
    const std::string t = trim(text);
    if (t.empty()) throw Error(Errc::parse_error, "empty complex literal");
    const auto parts = split(t, ',');
    if (parts.size() == 2) return {parse_double(parts[0]), parse_double(parts[1])};
    if (parts.size() != 1) throw Error(Errc::parse_error, "bad complex literal '" + t + "'");
    return parse_algebraic(t);
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<int> parse_filter_indices(const std::string& text) {
    std::vector<int> out;
    for (const std::string& raw : split(trim(text), ',')) {
        const std::string item = trim(raw);
        const auto dots = item.find("..");
        if (dots == std::string::npos) {
            if (item.rfind("2^", 0) == 0) {
                out.push_back(static_cast<int>(std::floor(std::pow(2.0, parse_double(item.substr(2))))));
            } else {
                out.push_back(parse_int(item));
            }
            continue;
        }
        std::string a = trim(item.substr(0, dots)), b = trim(item.substr(dots + 2));
        const bool powers = a.rfind("2^", 0) == 0;
        if (powers != (b.rfind("2^", 0) == 0)) throw Error(Errc::parse_error, "mixed range '" + item + "'");
        if (powers) {
            a = a.substr(2);
            b = b.substr(2);
        }
        const int lo = parse_int(a), hi = parse_int(b);
        if (powers && (std::max(lo, hi) > 30 || std::min(lo, hi) < 0)) {
            throw Error(Errc::parse_error, "power out of range in '" + item + "'");
        }
        const int step = lo <= hi ? 1 : -1;
        for (int k = lo;; k += step) {
            out.push_back(powers ? (1 << k) : k);
            if (k == hi) break;
        }
    }
    for (int v : out) {
        if (v < 1) throw Error(Errc::parse_error, "filter indices must be >= 1");
    }
    return out;
}

std::vector<int> parse_index_range(const std::string& text) {
    std::vector<int> out;
    const std::string t = trim(text);
    if (t.empty()) throw Error(Errc::parse_error, "empty index range");
    for (const std::string& raw : split(t, ',')) {
        const std::string item = trim(raw);
        const auto dots = item.find("..");
        if (dots == std::string::npos) {
            out.push_back(parse_int(item));
            continue;
        }
        const int lo = parse_int(item.substr(0, dots)), hi = parse_int(item.substr(dots + 2));
        for (int k = lo; k <= hi; ++k) out.push_back(k);
    }
    return out;
}

void write_trace_csv(std::ostream& os, const FixedPointSequence& seq, std::optional<int> zero_index, bool partial) {
    os << "# zvdl-trace 1\n";
    if (zero_index) os << "# zero=" << *zero_index << "\n";
    os << "# u=" << fmt_complex(seq.ray.u()) << "\n";
    os << "# dx=" << format_double(seq.prog.dx) << "\n";
    os << "# count=" << seq.prog.count << "\n";
    if (seq.target) os << "# target=" << fmt_complex(*seq.target) << "\n";
    if (seq.center) os << "# center=" << fmt_complex(*seq.center) << "\n";
    os << "# model_start=" << seq.model_start << "\n";
    os << "# converged=" << (seq.converged ? 1 : 0) << "\n";
    os << "# partial=" << (partial ? 1 : 0) << "\n";
    os << "n,x,phi_re,phi_im,residual,logoff_re,logoff_im\n";
    for (std::size_t n = 0; n < seq.points.size(); ++n) {
        const TracePoint& p = seq.points[n];
        os << n << ',' << format_double(p.x) << ',' << format_double(p.phi.real()) << ','
           << format_double(p.phi.imag()) << ',' << format_double(p.residual) << ',';
        if (p.log_offset) os << format_double(p.log_offset->real()) << ',' << format_double(p.log_offset->imag());
        else os << ',';
        os << '\n';
    }
}

TraceFile read_trace_csv(std::istream& is) {
    std::map<std::string, std::string> meta;
    std::string line;
    bool header = false;
    TraceFile tf;
    std::vector<TracePoint> pts;
    while (std::getline(is, line)) {
        line = trim(line);
        if (line.empty()) continue;
        if (line[0] == '#') {
            const auto eq = line.find('=');
            if (eq != std::string::npos) meta[trim(line.substr(1, eq - 1))] = trim(line.substr(eq + 1));
            continue;
        }
        if (!header) {
            if (line.rfind("n,x,phi_re,phi_im,residual", 0) != 0) throw Error(Errc::parse_error, "missing trace header");
            header = true;
            continue;
        }
        const auto f = split(line, ',');
        if (f.size() != 5 && f.size() != 7) throw Error(Errc::parse_error, "bad trace row: " + line);
        if (parse_int(f[0]) != static_cast<int>(pts.size())) throw Error(Errc::parse_error, "trace rows out of order");
        TracePoint p;
        p.x = parse_double(f[1]);
        p.phi = {parse_double(f[2]), parse_double(f[3])};
        p.residual = parse_double(f[4]);
        if (f.size() == 7 && !trim(f[5]).empty()) p.log_offset = Complex(parse_double(f[5]), parse_double(f[6]));
        pts.push_back(p);
    }
    if (!header) throw Error(Errc::parse_error, "not a trace file");
    auto get = [&](const char* key) -> const std::string* {
        auto it = meta.find(key);
        return it == meta.end() ? nullptr : &it->second;
    };
    const std::string* u = get("u");
    const std::string* dx = get("dx");
    const std::string* count = get("count");
    if (!u || !dx || !count) throw Error(Errc::parse_error, "trace file lacks u, dx or count");
    try {
        tf.seq = FixedPointSequence(RaySpec(parse_complex(*u)), Progression(parse_double(*dx), parse_int(*count)));
    } catch (const Error& e) {
        throw Error(Errc::parse_error, std::string("bad trace metadata: ") + e.what());
    }
    tf.seq.points = std::move(pts);
    if (auto* s = get("zero")) tf.zero_index = parse_int(*s);
    if (auto* s = get("target")) tf.seq.target = parse_complex(*s);
    if (auto* s = get("center")) tf.seq.center = parse_complex(*s);
    tf.seq.model_start = tf.seq.points.size();
    if (auto* s = get("model_start")) tf.seq.model_start = static_cast<std::size_t>(parse_int(*s));
    if (auto* s = get("converged")) tf.seq.converged = parse_int(*s) != 0;
    if (auto* s = get("partial")) tf.partial = parse_int(*s) != 0;
    return tf;
}

void write_stats_csv(std::ostream& os, const PolarTrace& trace, int K) {
    std::vector<double> dh;
    if (K >= 2 && trace.theta.size() >= static_cast<std::size_t>(K) + 2) dh = d_h_series(trace, K);
    os << "# center=" << fmt_complex(trace.center) << "\n";
    os << "# K=" << K << " (d_h column indexed by window start h)\n";
    os << "n,theta,log_r,delta,big_delta,d_h\n";
    for (std::size_t n = 0; n < trace.theta.size(); ++n) {
        os << n << ',' << format_double(trace.theta[n]) << ',' << format_double(trace.log_r[n]) << ',';
        if (n < trace.delta.size()) os << format_double(trace.delta[n]);
        os << ',';
        if (n < trace.big_delta.size()) os << format_double(trace.big_delta[n]);
        os << ',';
        if (n < dh.size()) os << format_double(dh[n]);
        os << '\n';
    }
}

}  // namespace zvdl

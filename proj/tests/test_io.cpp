#include <cmath>
#include <cstring>
#include <sstream>

#include "common.hpp"
#include "doctest.h"
#include "zvdl/io.hpp"

using namespace zvdl;

TEST_CASE("parse_complex") {
    CHECK(parse_complex("1,0") == Complex(1, 0));
    CHECK(parse_complex(" -0.5 , 14.1 ") == Complex(-0.5, 14.1));
    CHECK(parse_complex("2") == Complex(2, 0));
    CHECK(parse_complex("1.5-2i") == Complex(1.5, -2));
    CHECK(parse_complex("3i") == Complex(0, 3));
    CHECK(parse_complex("-i") == Complex(0, -1));
    CHECK(parse_complex("1e-3+2e+1i") == Complex(1e-3, 20));
    for (const char* bad : {"", "x", "1,2,3", "1,", "2+zi"}) CHECK_THROWS_AS(parse_complex(bad), Error);
}

TEST_CASE("format_double round-trips") {
    for (double v : {0.1, 1.0 / 3.0, 14.134725141734693, -2.5e-300, 6.02e23}) {
        CHECK(std::strtod(format_double(v).c_str(), nullptr) == v);
    }
}

TEST_CASE("parse_filter_indices") {
    CHECK(parse_filter_indices("512,128,64,16") == std::vector<int>{512, 128, 64, 16});
    CHECK(parse_filter_indices("1") == std::vector<int>{1});
    const auto pw = parse_filter_indices("2^0..2^13");
    REQUIRE(pw.size() == 14);
    CHECK(pw.front() == 1);
    CHECK(pw.back() == 8192);
    CHECK(parse_filter_indices("2^13..2^11") == std::vector<int>{8192, 4096, 2048});
    CHECK(parse_filter_indices("4..2") == std::vector<int>{4, 3, 2});
    CHECK_THROWS_AS(parse_filter_indices("0"), Error);
    CHECK_THROWS_AS(parse_filter_indices("2^1..5"), Error);
}

TEST_CASE("parse_index_range") {
    CHECK(parse_index_range("1..3") == std::vector<int>{1, 2, 3});
    CHECK(parse_index_range("7") == std::vector<int>{7});
    CHECK(parse_index_range("5..1").empty());
    CHECK_THROWS_AS(parse_index_range(""), Error);
}

TEST_CASE("trace CSV round-trips every bit") {
    const auto& seq = testing::trace_of(1);
    std::ostringstream os;
    write_trace_csv(os, seq, 1);
    std::istringstream is(os.str());
    const TraceFile tf = read_trace_csv(is);
    CHECK(tf.zero_index == 1);
    CHECK(!tf.partial);
    REQUIRE(tf.seq.points.size() == seq.points.size());
    CHECK(tf.seq.center == seq.center);
    CHECK(tf.seq.target == seq.target);
    CHECK(tf.seq.model_start == seq.model_start);
    CHECK(tf.seq.converged == seq.converged);
    CHECK(tf.seq.ray.u() == seq.ray.u());
    CHECK(tf.seq.prog.dx == seq.prog.dx);
    for (std::size_t n = 0; n < seq.points.size(); ++n) {
        CHECK(tf.seq.points[n].x == seq.points[n].x);
        CHECK(tf.seq.points[n].phi == seq.points[n].phi);
        CHECK(tf.seq.points[n].residual == seq.points[n].residual);
        CHECK(tf.seq.points[n].log_offset == seq.points[n].log_offset);
    }
    std::ostringstream again;
    write_trace_csv(again, tf.seq, 1);
    CHECK(again.str() == os.str());
}

TEST_CASE("statistics recomputed from a written trace match") {
    const auto& seq = testing::trace_of(2);
    std::ostringstream os;
    write_trace_csv(os, seq);
    std::istringstream is(os.str());
    const TraceFile tf = read_trace_csv(is);
    const PolarTrace a = unwrap_theta(CenteredPoints::from_sequence(seq, *seq.center));
    const PolarTrace b = unwrap_theta(CenteredPoints::from_sequence(tf.seq, *tf.seq.center));
    REQUIRE(a.theta.size() == b.theta.size());
    for (std::size_t n = 0; n < a.theta.size(); ++n) {
        CHECK(std::abs(a.theta[n] - b.theta[n]) <= 1e-12);
        CHECK(std::abs(a.log_r[n] - b.log_r[n]) <= 1e-12);
    }
    const auto da = d_h_series(a, 50), db = d_h_series(b, 50);
    for (std::size_t n = 0; n < da.size(); ++n) CHECK(std::abs(da[n] - db[n]) <= 1e-12);
}

TEST_CASE("malformed trace files") {
    std::istringstream empty("");
    CHECK_THROWS_AS(read_trace_csv(empty), Error);
    std::istringstream no_meta("n,x,phi_re,phi_im,residual\n0,0,1,2,0\n");
    CHECK_THROWS_AS(read_trace_csv(no_meta), Error);
    std::istringstream bad_row("# u=1,0\n# dx=1\n# count=2\nn,x,phi_re,phi_im,residual\n0,0,1\n");
    CHECK_THROWS_AS(read_trace_csv(bad_row), Error);
}

TEST_CASE("stats CSV layout") {
    const PolarTrace t = unwrap_theta(CenteredPoints::from_sequence(testing::trace_of(1), *testing::trace_of(1).center));
    std::ostringstream os;
    write_stats_csv(os, t, 50);
    std::istringstream is(os.str());
    std::string line;
    std::vector<std::string> rows;
    while (std::getline(is, line)) {
        if (!line.empty() && line[0] != '#') rows.push_back(line);
    }
    CHECK(rows.front() == "n,theta,log_r,delta,big_delta,d_h");
    CHECK(rows.size() == t.theta.size() + 1);
    CHECK(rows.back().substr(rows.back().size() - 3) == ",,,");
}

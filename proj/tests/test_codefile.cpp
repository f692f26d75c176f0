#include <catch2/catch.hpp>

#include "helpers.hpp"
#include "mrc/codefile.hpp"

using namespace mrc;

TEST_CASE("code files round trip exactly", "[codefile]") {
    ErasurePattern ref = testutil::reference_pattern_6x10();
    Field f(kDefaultModulus);
    SampledCode code = sample_code(ref, f, 1);
    CodeFile cf = CodeFile::from_sample(code);

    const std::string text = cf.serialize();
    CodeFile back = CodeFile::parse(text);
    CHECK(back.topo == cf.topo);
    CHECK(back.q == cf.q);
    CHECK(back.seed == cf.seed);
    CHECK(back.grow == cf.grow);
    CHECK(back.gcol == cf.gcol);
    CHECK(back.assignment == cf.assignment);
    CHECK(back.serialize() == text);

    // the reconstructed generator matches the instantiation
    CHECK(back.generator() == code.inst.g);
}

TEST_CASE("two-parity code files round trip", "[codefile]") {
    ErasurePattern ref = testutil::reference_pattern_6x10();
    ExtendedPattern x = extend_pattern(ref, {2});
    Field f(kDefaultModulus);
    SampledCode code = sample_code_a2(x, f, 5);
    CodeFile cf = CodeFile::from_sample(code);
    CodeFile back = CodeFile::parse(cf.serialize());
    CHECK(back.generator() == code.inst.g);
    CHECK(back.topo.a == 2);
    CHECK(back.topo.m == 7);
}

TEST_CASE("code file parser rejects tampered content", "[codefile]") {
    ErasurePattern ref = testutil::reference_pattern_6x10();
    SampledCode code = sample_code(ref, Field(kDefaultModulus), 1);
    const std::string good = CodeFile::from_sample(code).serialize();

    CHECK_THROWS_AS(CodeFile::parse(""), ParseError);
    CHECK_THROWS_AS(CodeFile::parse("mrc-code 2\n"), ParseError);

    // flip one digit of the stored row generator: integrity check fires
    std::string bad = good;
    const size_t pos = bad.find("grow 8 10\n") + 10;
    bad[pos] = bad[pos] == '1' ? '2' : '1';
    CHECK_THROWS_AS(CodeFile::parse(bad), ParseError);

    // drop the assignment tail
    std::string truncated = good.substr(0, good.find("assignment"));
    CHECK_THROWS_AS(CodeFile::parse(truncated), ParseError);
}

TEST_CASE("received grids round trip and validate", "[codefile]") {
    Topology t(3, 4, 1, 1);
    Field f(97);
    PartialCodeword pc{t, std::vector<std::optional<uint64_t>>(12)};
    for (int i = 0; i < 12; ++i)
        if (i % 3 != 0) pc.cells[static_cast<size_t>(i)] = static_cast<uint64_t>(i * 7 % 97);

    const std::string text = format_received(pc);
    PartialCodeword back = parse_received(text, t, f);
    CHECK(back.cells == pc.cells);
    CHECK(back.pattern().erasure_count() == 4);

    CHECK_THROWS_AS(parse_received("1 2 3\n", t, f), ParseError);           // short row
    CHECK_THROWS_AS(parse_received("1 2 3 4 5\n0 0 0 0\n0 0 0 0\n", t, f), ParseError); // long row
    CHECK_THROWS_AS(parse_received("1 2 3 99\n0 0 0 0\n0 0 0 0\n", t, f), ParseError);  // >= q
    CHECK_THROWS_AS(parse_received("1 2 3 !\n0 0 0 0\n0 0 0 0\n", t, f), ParseError);
    CHECK_THROWS_AS(parse_received("1 2 3 4\n0 0 0 0\n", t, f), ParseError); // missing row
    CHECK_THROWS_AS(parse_received("1 2 3 -1\n0 0 0 0\n0 0 0 0\n", t, f), ParseError); // signed token

    // carriage returns are tolerated
    PartialCodeword crlf = parse_received("1 2 3 4\r\n0 0 0 0\r\n? 0 0 0\r\n", t, f);
    CHECK(crlf.pattern().erasure_count() == 1);
}

TEST_CASE("codeword formatting is a plain decimal grid", "[codefile]") {
    Topology t(2, 3, 1, 1);
    Field f(7);
    Codeword cw{t, FieldMatrix::from_rows(f, {{1, 2, 3}, {4, 5, 6}})};
    CHECK(format_codeword(cw) == "1 2 3\n4 5 6\n");
}

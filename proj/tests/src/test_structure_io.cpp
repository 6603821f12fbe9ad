#include "fraisse/structure_io.hpp"

#include "fraisse/errors.hpp"
#include "fraisse/rng.hpp"
#include "testgen.hpp"

#include "doctest.h"

#include <string>

using namespace fraisse;

namespace {

const char* kFull = R"(# equilateral pair with one predicate and a constant
fraisse-structure v1
signature
  P 1 1/2 0 1
  const e
  diameter 2
points
  x y
dist
  3/2
pred P
  1/4 1
const e = y
)";

}  // namespace

TEST_SUITE("structure-io") {
    TEST_CASE("full-featured file parses to the expected data") {
        const MetricStructure s = parse_structure(kFull);
        CHECK(s.points == std::vector<std::string>{"x", "y"});
        CHECK(s.d(0, 1) == Rational(3, 2));
        REQUIRE(s.signature.predicates.size() == 1);
        CHECK(s.signature.predicates[0].name == "P");
        CHECK(s.signature.predicates[0].lipschitz == Rational(1, 2));
        CHECK(s.tables[0] == std::vector<Rational>{Rational(1, 4), Rational(1)});
        CHECK(s.signature.constants == std::vector<std::string>{"e"});
        CHECK(s.constant_points == std::vector<int>{1});
        CHECK(s.signature.diameter == Rational(2));
        CHECK(validate(s).empty());
    }

    TEST_CASE("serialize then parse is bit-exact") {
        const MetricStructure s = parse_structure(kFull);
        const std::string text = serialize_structure(s);
        CHECK(parse_structure(text) == s);
        // Canonical form is a fixed point of the round trip.
        CHECK(serialize_structure(parse_structure(text)) == text);
    }

    TEST_CASE("round trip holds on randomized structures") {
        Rng rng(2024);
        testgen::GenOptions opt;
        for (int i = 0; i < 50; ++i) {
            const MetricStructure s = testgen::random_structure(rng, opt);
            CHECK(parse_structure(serialize_structure(s)) == s);
        }
    }

    TEST_CASE("parse errors carry line and column") {
        try {
            parse_structure("fraisse-structure v1\nsignature\npoints\n  x\ndist\n  oops\n");
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(e.line() >= 5);
            CHECK(e.column() >= 1);
            CHECK(std::string(e.what()).find("line") != std::string::npos);
        }
    }

    TEST_CASE("malformed inputs are rejected") {
        CHECK_THROWS_AS(parse_structure(""), ParseError);
        CHECK_THROWS_AS(parse_structure("fraisse-structure v2\n"), ParseError);
        // missing dist row
        CHECK_THROWS_AS(parse_structure("fraisse-structure v1\nsignature\npoints\n  x y\ndist\n"), ParseError);
        // unknown label in constant binding
        CHECK_THROWS_AS(parse_structure("fraisse-structure v1\nsignature\n  const e\npoints\n  x\ndist\nconst e = zz\n"),
                        ParseError);
        // reserved predicate name
        CHECK_THROWS_AS(parse_structure("fraisse-structure v1\nsignature\n  pred 1 1 0 1\npoints\n  x\ndist\n"),
                        ParseError);
        // duplicate point label is a validate-level diagnostic via load_structure
        CHECK_THROWS_AS(load_structure("fraisse-structure v1\nsignature\npoints\n  x x\ndist\n  1\n"), DomainError);
        // predicate table with the wrong number of values
        CHECK_THROWS_AS(parse_structure("fraisse-structure v1\nsignature\n  P 1 1 0 1\npoints\n  x y\ndist\n  1\npred P\n  0\n"),
                        ParseError);
    }

    TEST_CASE("load_structure validates") {
        // triangle violation: parse succeeds, load rejects
        const char* bad =
            "fraisse-structure v1\nsignature\npoints\n  a b c\ndist\n  1\n  1 5\n";
        CHECK_NOTHROW(parse_structure(bad));
        CHECK_THROWS_AS(load_structure(bad), DomainError);
        CHECK_NOTHROW(load_structure(kFull));
    }

    TEST_CASE("file helpers mention the path on failure") {
        try {
            load_structure_file("/nonexistent/file.fs");
            FAIL("expected error");
        } catch (const std::exception& e) {
            CHECK(std::string(e.what()).find("/nonexistent/file.fs") != std::string::npos);
        }
    }

    TEST_CASE("comments and blank lines are ignored") {
        const MetricStructure a = parse_structure("fraisse-structure v1\n\n# hi\nsignature\npoints\n  x\n# mid\ndist\n");
        CHECK(a.size() == 1);
    }
}

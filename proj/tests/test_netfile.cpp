#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>

#include "helpers.hpp"
#include "netwave/netfile.hpp"

using namespace netwave;

namespace {

bool throws_mentioning(const std::string& text, const std::string& needle) {
    try {
        parse_network_text(text);
    } catch (const ValidationError& e) {
        return std::string(e.what()).find(needle) != std::string::npos;
    }
    return false;
}

}  // namespace

TEST_CASE("serialization round-trips through the parser") {
    NetworkSpec spec = parse_network_file(testnets::data_path("seven_pipe.net"));
    NetworkSpec again = parse_network_text(serialize_network(spec));
    CHECK(again.alpha == spec.alpha);
    REQUIRE(again.vertices == spec.vertices);
    REQUIRE(again.edges.size() == spec.edges.size());
    for (size_t i = 0; i < spec.edges.size(); ++i) {
        CHECK(again.edges[i].id == spec.edges[i].id);
        CHECK(again.edges[i].tail == spec.edges[i].tail);
        CHECK(again.edges[i].head == spec.edges[i].head);
        CHECK(again.edges[i].length == spec.edges[i].length);
        CHECK(again.edges[i].a == spec.edges[i].a);
        CHECK(again.edges[i].b == spec.edges[i].b);
        CHECK(again.edges[i].c == spec.edges[i].c);
    }
}

TEST_CASE("comments and blank lines are ignored, alpha defaults to 1") {
    NetworkSpec spec = parse_network_text(
        "# leading comment\n"
        "\n"
        "vertex id=v1  # trailing comment\n"
        "vertex id=v2\n"
        "edge id=e1 tail=v1 head=v2 length=2 a=1 b=1 c=1\n");
    CHECK(spec.alpha == 1.0);
    CHECK(spec.vertices == std::vector<std::string>{"v1", "v2"});
    REQUIRE(spec.edges.size() == 1);
    CHECK(spec.edges[0].length == 2.0);
}

TEST_CASE("parse errors carry line numbers and the offending field") {
    CHECK(throws_mentioning("vertex id=v1\nbogus record\n", "line 2"));
    CHECK(throws_mentioning("bogus record\n", "unknown record 'bogus'"));
    CHECK(throws_mentioning("edge id=e1 tail=v1 head=v2 a=1 b=1 c=1\n", "missing field 'length'"));
    CHECK(throws_mentioning("vertex id=v1 id=v2\n", "duplicate field 'id'"));
    CHECK(throws_mentioning("edge id=e1 tail=v1 head=v2 length=abc a=1 b=1 c=1\n",
                            "'abc' is not a number"));
    CHECK(throws_mentioning("edge id=e1 tail=v1 head=v2 length=nan a=1 b=1 c=1\n", "not finite"));
    CHECK(throws_mentioning("alpha -2\n", "alpha must be positive"));
    CHECK(throws_mentioning("vertex v1\n", "expected key=value"));
    CHECK_THROWS_AS(parse_network_file(testnets::data_path("does_not_exist.net")),
                    ValidationError);
}

TEST_CASE("edges referring to unknown vertices are rejected at build time") {
    NetworkSpec spec = parse_network_text(
        "vertex id=v1\n"
        "vertex id=v2\n"
        "edge id=e1 tail=v1 head=v9 length=1 a=1 b=1 c=1\n");
    CHECK_THROWS_AS(build_network(spec), ValidationError);
}

TEST_CASE("number formatting preserves doubles exactly") {
    for (double x : {1.0, 0.1, -3.25, 1.0 / 3.0, 1e-300, 9.5e17}) {
        CHECK(std::stod(format_number(x)) == x);
    }
}

TEST_CASE("bundled network files parse and validate") {
    Network seven = build_network(parse_network_file(testnets::data_path("seven_pipe.net")));
    CHECK(seven.num_edges() == 7);
    Network single = build_network(parse_network_file(testnets::data_path("single_edge.net")));
    CHECK(single.num_edges() == 1);
}

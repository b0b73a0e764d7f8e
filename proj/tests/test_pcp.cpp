#include "safa/pcp.hpp"

#include "helpers.hpp"

#include <doctest.h>

using namespace safa;
using namespace safa::testing;

TEST_CASE("check_pcp_solution") {
    PcpInstance paper = paper_instance();
    // u-side "abbaa" vs v-side "abbaaabbabb"
    CHECK_FALSE(check_pcp_solution(paper, {{1, 2, 1, 1}}));
    CHECK(concat_u(paper, {{1, 2, 1, 1}}).str() == "abbaa");
    CHECK(concat_v(paper, {{1, 2, 1, 1}}).str() == "abbaaabbabb");
    CHECK_FALSE(check_pcp_solution(paper, {{2}}));

    PcpInstance trivial = make_instance({"a"}, {{"a", "a"}});
    CHECK(check_pcp_solution(trivial, {{1}}));

    CHECK_THROWS_AS(check_pcp_solution(paper, {{3}}), std::out_of_range);
    CHECK_THROWS_AS(check_pcp_solution(paper, {{}}), std::out_of_range);
}

TEST_CASE("check_prefix_pcp_solution") {
    PcpInstance paper = paper_instance();
    CHECK(check_prefix_pcp_solution(paper, {{1, 2, 1, 1}}, {{1, 2}}));
    CHECK(concat_u(paper, {{1, 2, 1, 1}}).str() == "abbaa"); // the common word
    CHECK_FALSE(check_prefix_pcp_solution(paper, {{1, 2}}, {{1, 2, 1, 1}}));
    // index words must be prefix-related
    CHECK_FALSE(check_prefix_pcp_solution(paper, {{1, 2}}, {{2}}));

    PcpInstance trivial = make_instance({"a"}, {{"a", "a"}});
    CHECK(check_prefix_pcp_solution(trivial, {{1}}, {{1}}));
}

TEST_CASE("search_prefix_pcp finds the canonical shortest witness") {
    PcpInstance paper = paper_instance();
    auto sol = search_prefix_pcp(paper, 4);
    REQUIRE(sol.has_value());
    // u1 u2 = abb = v1: the shortest solution; the worked 4/2 solution
    // (1211, 12) is valid but not minimal.
    CHECK(sol->longer == IndexWord{{1, 2}});
    CHECK(sol->shorter == IndexWord{{1}});
    CHECK(sol->orientation == PrefixPcpSolution::Orientation::ULong);
    CHECK(check_prefix_pcp_solution(paper, sol->longer, sol->shorter));

    CHECK_FALSE(search_prefix_pcp(make_instance({"a", "b"}, {{"a", "ba"}}), 6).has_value());

    auto unit = search_prefix_pcp(make_instance({"a"}, {{"a", "a"}}), 1);
    REQUIRE(unit.has_value());
    CHECK(unit->longer == IndexWord{{1}});
    CHECK(unit->shorter == IndexWord{{1}});
}

TEST_CASE("search_pcp") {
    CHECK_FALSE(search_pcp(paper_instance(), 8).has_value());

    auto unit = search_pcp(make_instance({"a"}, {{"a", "a"}}), 1);
    REQUIRE(unit.has_value());
    CHECK(*unit == IndexWord{{1}});

    auto abb = search_pcp(make_instance({"a", "b"}, {{"ab", "a"}, {"b", "bb"}}), 4);
    REQUIRE(abb.has_value());
    CHECK(*abb == IndexWord{{1, 2}});
}

TEST_CASE("reduce_pcp_to_prefix emits the marker pairs") {
    PcpInstance inst = make_instance({"a", "b"}, {{"a", "abb"}});
    PcpInstance red = reduce_pcp_to_prefix(inst);
    REQUIRE(red.size() == 3); // 2n+1 with n=1
    CHECK(red.u(1).str() == "#a");
    CHECK(red.v(1).str() == "#a*b*b*");
    CHECK(red.u(2).str() == "*a");
    CHECK(red.v(2).str() == "a*b*b*");
    CHECK(red.u(3).str() == "*#");
    CHECK(red.v(3).str() == "#");

    PcpInstance single = make_instance({"x", "y"}, {{"x", "y"}});
    PcpInstance sred = reduce_pcp_to_prefix(single);
    CHECK(sred.u(1).str() == "#x");
    CHECK(sred.v(1).str() == "#y*");
    CHECK(sred.u(2).str() == "*x");
    CHECK(sred.v(2).str() == "y*");

    PcpInstance two = reduce_pcp_to_prefix(paper_instance());
    CHECK(two.size() == 5);
    CHECK(two.u(5).str() == "*#");
    CHECK(two.v(5).str() == "#");
}

TEST_CASE("reduce_pcp_to_prefix rejects marker clashes") {
    CHECK_THROWS_WITH_AS(
        (void)reduce_pcp_to_prefix(make_instance({"a", "#"}, {{"a", "#"}})),
        doctest::Contains("'#'"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(
        (void)reduce_pcp_to_prefix(make_instance({"a", "*"}, {{"*", "a"}})),
        doctest::Contains("'*'"), std::invalid_argument);
}

TEST_CASE("encode_solution / decode_reduced_solution") {
    // n = 1, w = 1: indices (A_1, Y) = (1, 3)
    PrefixPcpSolution one = encode_solution({{1}}, 1);
    CHECK(one.longer == IndexWord{{1, 3}});
    CHECK(one.shorter == IndexWord{{1, 3}});
    // w = 11 -> (1, n+1, 2n+1)
    PrefixPcpSolution two = encode_solution({{1, 1}}, 1);
    CHECK(two.longer == IndexWord{{1, 2, 3}});

    CHECK(decode_reduced_solution(one, 1) == IndexWord{{1}});
    CHECK(decode_reduced_solution(two, 1) == IndexWord{{1, 1}});

    // malformed witnesses
    CHECK_THROWS_AS((void)decode_reduced_solution({{{1, 3}}, {{1}}}, 1), std::invalid_argument);
    CHECK_THROWS_AS((void)decode_reduced_solution({{{3, 3}}, {{3, 3}}}, 1), std::invalid_argument);
    CHECK_THROWS_AS((void)decode_reduced_solution({{{1, 1, 3}}, {{1, 1, 3}}}, 1),
                    std::invalid_argument);
}

TEST_CASE("encode round-trips through the reduced checker") {
    PcpInstance inst = make_instance({"a"}, {{"a", "a"}});
    PcpInstance red = reduce_pcp_to_prefix(inst);
    auto w = search_pcp(inst, 2);
    REQUIRE(w.has_value());
    PrefixPcpSolution enc = encode_solution(*w, inst.size());
    CHECK(check_prefix_pcp_solution(red, enc.longer, enc.shorter));
    CHECK(decode_reduced_solution(enc, inst.size()) == *w);
}

TEST_CASE("reduction on random instances: forward and backward") {
    Rng rng(20240910);
    int forward_hits = 0, backward_hits = 0;
    for (int iter = 0; iter < 30; ++iter) {
        PcpInstance inst = random_instance(rng);
        bool clash = inst.alphabet->contains("#") || inst.alphabet->contains("*");
        REQUIRE_FALSE(clash);
        PcpInstance red = reduce_pcp_to_prefix(inst);
        if (auto w = search_pcp(inst, 4)) {
            ++forward_hits;
            PrefixPcpSolution enc = encode_solution(*w, inst.size());
            CHECK(check_prefix_pcp_solution(red, enc.longer, enc.shorter));
        }
        if (auto sol = search_prefix_pcp(red, 4)) {
            ++backward_hits;
            IndexWord dec = decode_reduced_solution(*sol, inst.size());
            CHECK(check_pcp_solution(inst, dec));
        }
    }
    CHECK(forward_hits > 0);
    CHECK(backward_hits > 0);
}

TEST_CASE("searches are sound and deterministic") {
    Rng rng(20240911);
    for (int iter = 0; iter < 40; ++iter) {
        PcpInstance inst = random_instance(rng);
        auto a = search_pcp(inst, 4);
        auto b = search_pcp(inst, 4);
        CHECK(a == b);
        if (a) CHECK(check_pcp_solution(inst, *a));
        auto p = search_prefix_pcp(inst, 4);
        auto q = search_prefix_pcp(inst, 4);
        CHECK(p == q);
        if (p) {
            CHECK(check_prefix_pcp_solution(inst, *p));
            CHECK(p->shorter.is_prefix_of(p->longer));
        }
    }
}

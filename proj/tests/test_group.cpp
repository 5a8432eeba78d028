#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>
#include <vector>

#include "core/group.hpp"
#include "core/rng.hpp"

using namespace ncqft;

namespace {

GroupParams finite_params(int d, int n, double eps = 1.0) {
    GroupParams p;
    p.d = d;
    p.n = n;
    p.epsilon = eps;
    p.model = Model::FiniteCyclic;
    return p;
}

GroupParams continuum_params(int d, double eps = 1.0) {
    GroupParams p;
    p.d = d;
    p.n = 8;
    p.epsilon = eps;
    p.model = Model::ContinuumLattice;
    return p;
}

RElement random_relement(const GroupParams& p, CounterRng& rng) {
    RElement g;
    for (int i = 0; i < p.d; ++i) g.x.push_back(rng.uniform(-2.0, 2.0));
    for (int i = 0; i < p.m(); ++i) g.a.push_back(rng.uniform(-2.0, 2.0));
    return g;
}

double dist(const RElement& a, const RElement& b) {
    double s = 0;
    for (size_t i = 0; i < a.x.size(); ++i) s += std::abs(a.x[i] - b.x[i]);
    for (size_t i = 0; i < a.a.size(); ++i) s += std::abs(a.a[i] - b.a[i]);
    return s;
}

} // namespace

TEST_CASE("wedge basics") {
    std::vector<double> e1{1, 0, 0, 0}, e2{0, 1, 0, 0};
    auto w = wedge(e1, e2);
    CHECK(w == std::vector<double>{1, 0, 0, 0, 0, 0});

    std::vector<double> x{0.3, -1.2, 0.5, 2.0};
    auto wxx = wedge(x, x);
    for (double v : wxx) CHECK(v == 0.0);

    auto wxy = wedge(x, e1);
    auto wyx = wedge(e1, x);
    for (size_t i = 0; i < wxy.size(); ++i) CHECK(wxy[i] == -wyx[i]);

    std::vector<double> a{1, 0}, b{0, 2};
    CHECK(wedge(a, b) == std::vector<double>{2});

    CHECK_THROWS_AS(wedge(a, e1), ShapeError);
}

TEST_CASE("compose closed form and identity laws") {
    auto p = continuum_params(2, 1.0);
    RElement g1{{1, 0}, {0}}, g2{{0, 2}, {0}};
    auto g = compose(g1, g2, p);
    CHECK(g.x == std::vector<double>{1, 2});
    CHECK(g.a == std::vector<double>{1});

    CounterRng rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        auto h = random_relement(p, rng);
        CHECK(dist(compose(h, identity_r(p), p), h) == 0.0);
        CHECK(dist(compose(identity_r(p), h, p), h) == 0.0);
        CHECK(dist(compose(h, inverse(h), p), identity_r(p)) < 1e-14);
    }
}

TEST_CASE("eps = 0 group law is vector addition") {
    auto p = continuum_params(4, 0.0);
    CounterRng rng(11);
    for (int trial = 0; trial < 100; ++trial) {
        auto g1 = random_relement(p, rng);
        auto g2 = random_relement(p, rng);
        auto g = compose(g1, g2, p);
        for (int i = 0; i < p.d; ++i) CHECK(g.x[i] == g1.x[i] + g2.x[i]);
        for (int i = 0; i < p.m(); ++i) CHECK(g.a[i] == g1.a[i] + g2.a[i]);
        // deformation bound: |compose_eps - compose_0| = (eps/2)|wedge|
        auto pe = continuum_params(4, 1.5);
        auto ge = compose(g1, g2, pe);
        auto w = wedge(g1.x, g2.x);
        for (int i = 0; i < p.m(); ++i)
            CHECK(std::abs(ge.a[i] - g.a[i]) == doctest::Approx(0.75 * std::abs(w[i])).epsilon(1e-14));
    }
}

TEST_CASE("associativity: random continuum triples") {
    auto p = continuum_params(4, 1.0);
    CounterRng rng(13);
    for (int trial = 0; trial < 1000; ++trial) {
        auto g1 = random_relement(p, rng);
        auto g2 = random_relement(p, rng);
        auto g3 = random_relement(p, rng);
        auto lhs = compose(compose(g1, g2, p), g3, p);
        auto rhs = compose(g1, compose(g2, g3, p), p);
        CHECK(dist(lhs, rhs) < 1e-12);
    }
}

TEST_CASE("finite model: exhaustive associativity and commutator centrality, n = 3") {
    auto p = finite_params(2, 3);
    const auto count = z_element_count(p);
    REQUIRE(count == 27);
    for (std::uint64_t i = 0; i < count; ++i)
        for (std::uint64_t j = 0; j < count; ++j) {
            auto gi = z_element_at(i, p);
            auto gj = z_element_at(j, p);
            auto c = group_commutator(gi, gj, p);
            for (auto v : c.x) CHECK(v == 0); // center containment
            for (std::uint64_t k = 0; k < count; ++k) {
                auto gk = z_element_at(k, p);
                CHECK(compose(compose(gi, gj, p), gk, p) ==
                      compose(gi, compose(gj, gk, p), p));
            }
        }
}

TEST_CASE("finite commutator distinguished value") {
    // d=2, eps=1, g1=((1,0),0), g2=((0,1),0) -> ((0,0),1), expanded by hand
    auto p = finite_params(2, 5);
    ZElement g1{{1, 0}, {0}}, g2{{0, 1}, {0}};
    auto c = group_commutator(g1, g2, p);
    CHECK(c.x == std::vector<long long>{0, 0});
    CHECK(c.a == std::vector<long long>{1});

    // central g1 commutes with everything
    ZElement z{{0, 0}, {3}};
    for (std::uint64_t j = 0; j < z_element_count(p); ++j)
        CHECK(group_commutator(z, z_element_at(j, p), p) == identity_z(p));
}

TEST_CASE("finite inverse mod n") {
    auto p = finite_params(2, 5);
    ZElement g{{2, 4}, {3}};
    auto gi = inverse(g, p);
    CHECK(gi.x == std::vector<long long>{3, 1});
    CHECK(gi.a == std::vector<long long>{2});
    CHECK(compose(g, gi, p) == identity_z(p));
    CHECK(inverse(identity_z(p), p) == identity_z(p));
}

TEST_CASE("even modulus rejected") {
    auto p = finite_params(2, 4);
    ZElement g{{1, 0}, {0}};
    CHECK_THROWS_AS(compose(g, g, p), ConfigError);
}

TEST_CASE("telescope round trip and bijection on the finite model") {
    auto p = finite_params(2, 3);
    const auto count = z_element_count(p); // 27

    // N = 1: telescope is the identity map
    {
        std::vector<ZElement> chain{z_element_at(14, p)};
        CHECK(telescope(chain, p) == chain);
    }

    // exhaustive bijection for N = 2 (27^2 chains) with round trip
    const int N = 2;
    std::uint64_t total = count * count;
    std::set<std::uint64_t> seen;
    for (std::uint64_t code = 0; code < total; ++code) {
        std::vector<ZElement> chain{z_element_at(code % count, p),
                                    z_element_at(code / count, p)};
        auto partials = telescope(chain, p);
        CHECK(untelescope(partials, p) == chain);
        std::uint64_t key = 0, stride = 1;
        for (int j = 0; j < N; ++j) {
            key += z_element_index(partials[j], p) * stride;
            stride *= count;
        }
        seen.insert(key);
    }
    CHECK(seen.size() == total);
}

TEST_CASE("telescope: eps = 0 gives partial sums / first differences") {
    auto p = continuum_params(2, 0.0);
    CounterRng rng(17);
    std::vector<RElement> chain;
    for (int i = 0; i < 6; ++i) chain.push_back(random_relement(p, rng));
    auto partials = telescope(chain, p);
    RElement sum = identity_r(p);
    for (size_t k = 0; k < chain.size(); ++k) {
        sum = compose(sum, chain[k], p);
        CHECK(dist(partials[k], sum) == 0.0);
    }
    auto back = untelescope(partials, p);
    for (size_t k = 0; k < chain.size(); ++k) CHECK(dist(back[k], chain[k]) < 1e-13);
}

TEST_CASE("continuum telescope round trip, random chains") {
    auto p = continuum_params(4, 1.0);
    CounterRng rng(19);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<RElement> chain;
        for (int i = 0; i < 8; ++i) chain.push_back(random_relement(p, rng));
        auto back = untelescope(telescope(chain, p), p);
        double err = 0;
        for (size_t k = 0; k < chain.size(); ++k) err = std::max(err, dist(back[k], chain[k]));
        CHECK(err < 1e-12);
    }
}

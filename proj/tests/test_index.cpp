#include <doctest.h>

#include <random>

#include "nql/error.hpp"
#include "nql/index.hpp"
#include "test_support.hpp"

using namespace nql;
using nql::testing::random_vec;

namespace {

struct Pipeline {
    StandardizedMatrix z;
    PrincipalBasis basis;
    ElasticChain chain;  // oriented
};

const Pipeline& shipped() {
    static const Pipeline p = [] {
        auto z = standardize(nql::testing::shipped_table());
        auto basis = eigendecompose(covariance(z));
        auto chain = orient(fit(z.rows(), basis, ChainConfig{}).chain, z.rows());
        return Pipeline{std::move(z), basis, std::move(chain)};
    }();
    return p;
}

}  // namespace

TEST_CASE("project_point basics") {
    const std::vector<Vec4> nodes{{0, 0, 0, 0}, {2, 0, 0, 0}, {2, 3, 0, 0}};

    SUBCASE("first node") {
        const auto p = project_point(nodes[0], nodes);
        CHECK(p.segment == 0);
        CHECK(p.t == 0.0);
        CHECK(p.arclength == 0.0);
        CHECK(p.distance == 0.0);
    }
    SUBCASE("segment midpoint") {
        const auto p = project_point({2, 1.5, 0, 0}, nodes);
        CHECK(p.segment == 1);
        CHECK(p.t == doctest::Approx(0.5));
        CHECK(p.arclength == doctest::Approx(3.5));
        CHECK(p.distance == doctest::Approx(0.0));
    }
    SUBCASE("shared node resolves to the lower segment") {
        const auto p = project_point({3, -1, 0, 0}, nodes);
        CHECK(p.segment == 0);
        CHECK(p.t == 1.0);
    }
    SUBCASE("degenerate segment") {
        const std::vector<Vec4> bad{{0, 0, 0, 0}, {1, 0, 0, 0}, {1, 0, 0, 0}};
        try {
            project_point({0, 0, 0, 0}, bad);
            FAIL("expected DegenerateSegment");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::DegenerateSegment);
        }
    }
}

TEST_CASE("project_point agrees with dense sampling of the polyline") {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 5; ++trial) {
        std::vector<Vec4> nodes;
        Vec4 cur{};
        for (int j = 0; j < 8; ++j) {
            cur = cur + random_vec(rng);
            nodes.push_back(cur);
        }
        const auto cum = cumulative_lengths(nodes);
        const double length = cum.back();
        const std::size_t steps = 100000;  // arclength step 1e-5 L

        for (int k = 0; k < 4; ++k) {
            const Vec4 x = nodes[rng() % nodes.size()] + random_vec(rng, 0.7);
            double best_d = std::numeric_limits<double>::infinity(), best_s = 0.0;
            std::size_t seg = 0;
            for (std::size_t s = 0; s <= steps; ++s) {
                const double arc = length * static_cast<double>(s) / static_cast<double>(steps);
                while (seg + 2 < cum.size() && cum[seg + 1] < arc) ++seg;
                const double t = std::clamp((arc - cum[seg]) / (cum[seg + 1] - cum[seg]), 0.0, 1.0);
                const Vec4 pt = nodes[seg] + t * (nodes[seg + 1] - nodes[seg]);
                const double d = norm(x - pt);
                if (d < best_d) {
                    best_d = d;
                    best_s = arc;
                }
            }
            const auto p = project_point(x, nodes);
            CHECK(std::abs(p.distance - best_d) < 1e-4);
            CHECK(std::abs(p.arclength - best_s) < 1e-4 * length);
        }
    }
}

TEST_CASE("orient") {
    const auto& sp = shipped();
    SUBCASE("an oriented chain is a fixed point") {
        CHECK(orient(sp.chain, sp.z.rows()).nodes == sp.chain.nodes);
    }
    SUBCASE("a reversed chain is restored") {
        auto reversed = sp.chain;
        std::reverse(reversed.nodes.begin(), reversed.nodes.end());
        CHECK(orient(reversed, sp.z.rows()).nodes == sp.chain.nodes);
    }
    SUBCASE("arclength correlates non-negatively with GDP after orientation") {
        std::vector<double> arcs;
        for (const auto& p : project_all(sp.z.rows(), sp.chain.nodes)) arcs.push_back(p.arclength);
        CHECK(orientation_sign(arcs, sp.z.rows()) > 0.0);
    }
}

TEST_CASE("nql_index maps arclength affinely onto [-1, 1]") {
    PolylineProjection p;
    p.arclength = 0.0;
    CHECK(nql_index(p, 4.0) == -1.0);
    p.arclength = 2.0;
    CHECK(nql_index(p, 4.0) == 0.0);
    p.arclength = 4.0;
    CHECK(nql_index(p, 4.0) == 1.0);
    double prev = -2.0;
    for (int k = 0; k <= 100; ++k) {
        p.arclength = 0.04 * k;
        const double v = nql_index(p, 4.0);
        CHECK(v > prev);
        prev = v;
    }
}

TEST_CASE("rank") {
    SUBCASE("two elements") {
        const std::vector<std::string> names{"B", "A"};
        const std::vector<double> values{0.1, 0.5};
        CHECK(rank(names, values) == std::vector<std::size_t>{2, 1});
    }
    SUBCASE("ties by ascending name") {
        const std::vector<std::string> names{"Beta", "Alpha"};
        const std::vector<double> values{0.3, 0.3};
        CHECK(rank(names, values) == std::vector<std::size_t>{2, 1});
    }
    SUBCASE("ranks are a permutation") {
        std::mt19937_64 rng(12);
        std::uniform_int_distribution<int> coarse(0, 9);
        std::vector<std::string> names;
        std::vector<double> values;
        for (int i = 0; i < 200; ++i) {
            names.push_back("n" + std::to_string(i));
            values.push_back(coarse(rng) * 0.1);
        }
        auto r = rank(names, values);
        std::sort(r.begin(), r.end());
        for (std::size_t i = 0; i < r.size(); ++i) CHECK(r[i] == i + 1);
    }
}

TEST_CASE("compare_linear_nonlinear") {
    const std::vector<std::string> names{"A", "B", "C"};
    SUBCASE("identical columns give no shifts") {
        const std::vector<double> v{0.2, 0.9, -0.4};
        const auto cmp = compare_linear_nonlinear(build_index_table(names, v, v));
        for (const auto& s : cmp.shifts) CHECK(s.shift == 0);
        CHECK_FALSE(cmp.pair.has_value());
    }
    SUBCASE("reversal and movers") {
        const std::vector<double> nql{0.9, 0.5, 0.1};
        const std::vector<double> lin{0.1, 0.5, 0.9};
        const auto table = build_index_table(names, nql, lin);
        const auto cmp = compare_linear_nonlinear(table, std::pair<std::string, std::string>{"A", "C"});
        REQUIRE(cmp.pair.has_value());
        CHECK(cmp.pair->first_above_nql());
        CHECK_FALSE(cmp.pair->first_above_linear());
        CHECK(cmp.pair->reversed());
        const auto top = cmp.top_movers(2);
        REQUIRE(top.size() == 2);
        CHECK(top[0].name == "A");
        CHECK(top[0].shift == 2);
        CHECK(top[1].name == "C");
        CHECK(top[1].shift == -2);
    }
    SUBCASE("unknown pair member") {
        const std::vector<double> v{0.2, 0.9, -0.4};
        try {
            compare_linear_nonlinear(build_index_table(names, v, v), std::pair<std::string, std::string>{"A", "Z"});
            FAIL("expected UnknownCountry");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::UnknownCountry);
        }
    }
}

TEST_CASE("ranking TSV format") {
    const std::vector<std::string> names{"Korea, Rep.", "Malta"};
    const std::vector<double> nql{0.33649, -0.0001};
    const std::vector<double> lin{-1.23456, 2.0};
    CHECK(format_ranking_tsv(build_index_table(names, nql, lin)) ==
          "rank\tcountry\tnql_index\tlinear_rank\tlinear_index\n"
          "1\tKorea, Rep.\t0.336\t2\t-1.235\n"
          "2\tMalta\t0.000\t1\t2.000\n");
}

TEST_CASE("shipped pipeline invariants") {
    const auto& sp = shipped();
    const auto rows = sp.z.rows();
    const auto names = sp.z.names();
    const double length = polyline_length(sp.chain.nodes);
    const auto projections = project_all(rows, sp.chain.nodes);

    SUBCASE("no segment is closer than the reported projection") {
        for (std::size_t i = 0; i < rows.size(); ++i) {
            for (std::size_t k = 0; k + 1 < sp.chain.nodes.size(); ++k) {
                const std::vector<Vec4> seg{sp.chain.nodes[k], sp.chain.nodes[k + 1]};
                CHECK(project_point(rows[i], seg).distance >= projections[i].distance - 1e-12);
            }
        }
    }
    SUBCASE("arclength order equals index order, values in range") {
        const auto table = index_countries(names, rows, sp.chain.nodes, sp.basis.components[0], 1.0);
        for (std::size_t k = 1; k < table.rows.size(); ++k) CHECK(table.rows[k - 1].nql_index >= table.rows[k].nql_index);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const double v = nql_index(projections[i], length);
            CHECK(v >= -1.0);
            CHECK(v <= 1.0);
            if (v == 1.0 || v == -1.0) CHECK((projections[i].t == 0.0 || projections[i].t == 1.0));
            for (std::size_t j = 0; j < rows.size(); ++j) {
                if (projections[i].arclength < projections[j].arclength) CHECK(v <= nql_index(projections[j], length));
            }
        }
    }
    SUBCASE("mean squared projection distance matches the explained-variance residual") {
        double mse = 0.0, total = 0.0;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            mse += projections[i].distance * projections[i].distance;
            total += squared_norm(rows[i]);
        }
        CHECK(std::abs((1.0 - mse / total) - curve_explained_variance(rows, sp.chain.nodes)) < 1e-12);
    }
    SUBCASE("reversing before orient leaves every rank unchanged") {
        auto reversed = sp.chain;
        std::reverse(reversed.nodes.begin(), reversed.nodes.end());
        const auto again = orient(reversed, rows);
        const auto a = index_countries(names, rows, sp.chain.nodes, sp.basis.components[0], 1.0);
        const auto b = index_countries(names, rows, again.nodes, sp.basis.components[0], 1.0);
        for (std::size_t k = 0; k < a.rows.size(); ++k) {
            CHECK(a.rows[k].name == b.rows[k].name);
            CHECK(a.rows[k].nql_rank == b.rows[k].nql_rank);
        }
    }
    SUBCASE("reference extremes") {
        const double sign = orientation_sign(pc1_scores(sp.z, sp.basis), rows);
        const auto table = index_countries(names, rows, sp.chain.nodes, sp.basis.components[0], sign);
        CHECK(table.rows.front().name == "Luxembourg");
        CHECK(table.rows.back().name == "Swaziland");
        CHECK(table.at("Luxembourg").nql_index > 0.0);
        CHECK(table.at("Swaziland").nql_index < 0.0);
        CHECK(table.at("Luxembourg").nql_index >= 0.80);
        CHECK(table.at("Luxembourg").nql_index <= 0.95);
        CHECK(table.at("Swaziland").nql_index >= -0.95);
        CHECK(table.at("Swaziland").nql_index <= -0.78);
        CHECK(table.at("Russia").nql_rank < table.at("Egypt").nql_rank);
        CHECK(table.at("Russia").nql_rank >= 74);
        CHECK(table.at("Russia").nql_rank <= 84);
    }
}

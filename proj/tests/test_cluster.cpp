#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "transit_opt/cluster.hpp"
#include "transit_opt/synth.hpp"

using namespace topt;

namespace {

FeatureVector fv(int year, int month, std::vector<double> values) {
    return FeatureVector{Month{year, month}, std::move(values)};
}

std::vector<FeatureVector> scalar_points(const std::vector<double>& xs) {
    std::vector<FeatureVector> out;
    for (std::size_t i = 0; i < xs.size(); ++i)
        out.push_back(fv(2024, static_cast<int>(i) + 1, {xs[i]}));
    return out;
}

}  // namespace

TEST_CASE("features are per-segment mean median std") {
    SynthSpec spec;
    spec.n_timepoints = 2;
    spec.days_per_month = 3;
    spec.months = {Month{2024, 1}};
    spec.regime_of[{2024, 1}] = 0;
    spec.regime_medians = {{600}};
    spec.dispersion = 0;  // constant travel time
    auto data = generate(spec);
    auto [store, report] = clean(data.records, data.patterns);
    auto built = build_features(store, "T1");
    REQUIRE(built.features.size() == 1);
    REQUIRE(built.features[0].values.size() == 3);
    CHECK(built.features[0].values[0] == doctest::Approx(600));
    CHECK(built.features[0].values[1] == doctest::Approx(600));
    CHECK(built.features[0].values[2] == doctest::Approx(0));
}

TEST_CASE("normalize maps two distinct vectors to plus minus one") {
    auto out = normalize({fv(2024, 1, {10, 5}), fv(2024, 2, {20, 5})});
    CHECK(out[0].values[0] == doctest::Approx(-1));
    CHECK(out[1].values[0] == doctest::Approx(1));
    CHECK(out[0].values[1] == doctest::Approx(0));  // constant dimension
    CHECK(out[1].values[1] == doctest::Approx(0));
}

TEST_CASE("normalize of identical vectors is all zero") {
    auto out = normalize({fv(2024, 1, {3, 4}), fv(2024, 2, {3, 4})});
    for (const auto& v : out)
        for (double x : v.values) CHECK(x == 0);
}

TEST_CASE("kmeans trivial cluster counts") {
    auto pts = scalar_points({0, 10, 20});
    auto all = kmeans(pts, 3, 1);
    CHECK(all.objective == doctest::Approx(0));
    auto one = kmeans(pts, 1, 1);
    CHECK(one.centroids[0][0] == doctest::Approx(10));
    // total variance times count
    CHECK(one.objective == doctest::Approx(200));
    CHECK_THROWS(kmeans(pts, 4, 1));
}

TEST_CASE("kmeans recovers well separated groups for every seed") {
    auto pts = scalar_points({1.0, 1.1, 0.9, 50.0});
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        auto c = kmeans(pts, 2, seed);
        CHECK(c.assignment.at({2024, 1}) == c.assignment.at({2024, 2}));
        CHECK(c.assignment.at({2024, 1}) == c.assignment.at({2024, 3}));
        CHECK(c.assignment.at({2024, 1}) != c.assignment.at({2024, 4}));
    }
}

TEST_CASE("kmeans objective history is non-increasing") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0, 100);
    for (int it = 0; it < 50; ++it) {
        std::vector<FeatureVector> pts;
        int n = 4 + static_cast<int>(rng() % 6);
        for (int i = 0; i < n; ++i) pts.push_back(fv(2024, i + 1, {u(rng), u(rng)}));
        auto c = kmeans(pts, 2 + static_cast<int>(rng() % 2), rng());
        for (std::size_t i = 1; i < c.objective_history.size(); ++i)
            CHECK(c.objective_history[i] <= c.objective_history[i - 1] + 1e-9);
    }
}

TEST_CASE("kmeans is deterministic per seed") {
    auto pts = scalar_points({0, 3, 9, 12, 30, 33});
    auto a = kmeans(pts, 3, 42);
    auto b = kmeans(pts, 3, 42);
    CHECK(a.assignment == b.assignment);
    CHECK(a.objective == b.objective);
}

TEST_CASE("silhouette values stay in range and singletons score zero") {
    CHECK(mean_silhouette({{0}, {1}, {10}}, {0, 0, 1}, 2) <= 1.0);
    CHECK(mean_silhouette({{0}, {1}, {10}}, {0, 0, 1}, 2) >= -1.0);
    // two singletons: both score 0
    CHECK(mean_silhouette({{0}, {10}}, {0, 1}, 2) == doctest::Approx(0));
}

TEST_CASE("select_k picks three groups on three separated bands") {
    auto pts = scalar_points({0, 0.1, 10, 10.1, 20, 20.2});
    auto c = select_k(pts, 5, 1);
    CHECK(c.k == 3);
    std::map<int, std::set<Month>> groups;
    for (const auto& [m, cl] : c.assignment) groups[cl].insert(m);
    CHECK(groups.size() == 3);
    for (const auto& [cl, months] : groups) CHECK(months.size() == 2);
}

TEST_CASE("select_k falls back to one cluster on weak structure") {
    CHECK(select_k(scalar_points({5, 5, 5, 5}), 4, 1).k == 1);
    CHECK(select_k(scalar_points({1, 2}), 4, 1).k == 1);  // too few vectors
}

TEST_CASE("select_k covers every month with no empty cluster") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(0, 10);
    for (int it = 0; it < 30; ++it) {
        int n = 3 + static_cast<int>(rng() % 8);
        std::vector<FeatureVector> pts;
        for (int i = 0; i < n; ++i) pts.push_back(fv(2024, i + 1, {u(rng)}));
        auto c = select_k(pts, 4, rng());
        CHECK(static_cast<int>(pts.size()) == static_cast<int>(c.assignment.size()));
        std::set<int> used;
        for (const auto& [m, cl] : c.assignment) {
            CHECK(cl >= 0);
            CHECK(cl < c.k);
            used.insert(cl);
        }
        CHECK(static_cast<int>(used.size()) == c.k);
        CHECK(c.silhouette <= 1.0);
        CHECK(c.silhouette >= -1.0);
    }
}

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "permlat/spaces.hpp"

using namespace permlat;

namespace {

SpaceParams unit_korobov() { return {1.0, 1.0, 1.0, DecayProfile::korobov()}; }

std::vector<Frequency> collect_nabla(const InvarianceSpec& inv, long long radius) {
    std::vector<Frequency> out;
    NablaEnumerator en(inv, radius);
    Frequency h;
    while (en.next(h)) out.push_back(h);
    return out;
}

// full box [-H,H]^d in lexicographic order
std::vector<Frequency> full_box(int d, long long radius) {
    std::vector<Frequency> out;
    Frequency h(static_cast<std::size_t>(d), -radius);
    while (true) {
        out.push_back(h);
        int l = d - 1;
        while (l >= 0 && ++h[static_cast<std::size_t>(l)] > radius) {
            h[static_cast<std::size_t>(l)] = -radius;
            --l;
        }
        if (l < 0) break;
    }
    return out;
}

}  // namespace

TEST_CASE("weight_inv hand values") {
    SpaceParams p = unit_korobov();
    CHECK(weight_inv(p, {0, 0, 0}) == 1.0);
    CHECK(weight_inv(p, {2}) == doctest::Approx(0.25));

    SpaceParams sob{1.0, 1.0, 1.0, DecayProfile::sobolev_two_pi()};
    CHECK(weight_inv(sob, {1, 1}) ==
          doctest::Approx(std::pow(2.0 * M_PI, -4.0)).epsilon(1e-13));

    SpaceParams scaled{2.0, 1.5, 0.5, DecayProfile::korobov()};
    CHECK(weight_inv(scaled, {0, 3}) == doctest::Approx(1.5 * 0.5 / 81.0));
}

TEST_CASE("weight_inv handles beta1 = 0 and large d") {
    SpaceParams degenerate{1.0, 2.0, 0.0, DecayProfile::korobov()};
    CHECK(weight_inv(degenerate, {0, 0}) == 4.0);
    CHECK(weight_inv(degenerate, {0, 1}) == 0.0);
    CHECK(log_weight_inv(degenerate, {0, 1}) ==
          -std::numeric_limits<double>::infinity());

    // d = 60 crosses the log-space accumulation threshold
    SpaceParams p = unit_korobov();
    Frequency h(60, 2);
    CHECK(weight_inv(p, h) == doctest::Approx(std::pow(0.25, 60)).epsilon(1e-10));
}

TEST_CASE("weight_inv is permutation invariant on the invariant block") {
    SpaceParams p{1.3, 1.2, 0.8, DecayProfile::mixed_smoothness()};
    Frequency h = {3, -1, 0, 2};
    Frequency swapped = {-1, 3, 0, 2};  // swap inside I = {1,2}
    CHECK(weight_inv(p, h) == doctest::Approx(weight_inv(p, swapped)).epsilon(1e-15));
}

TEST_CASE("multiplicity_factorial counts stabilizing permutations") {
    CHECK(multiplicity_factorial({1, 2, 3}, InvarianceSpec::full(3)).exact == 1);
    CHECK(multiplicity_factorial({5, 5, 5}, InvarianceSpec::full(3)).exact == 6);
    CHECK(multiplicity_factorial({3, 3, 7, 9}, InvarianceSpec(4, {1, 2, 3})).exact == 2);
    // coordinates outside the block never contribute
    CHECK(multiplicity_factorial({4, 4}, InvarianceSpec::none(2)).exact == 1);
}

TEST_CASE("nabla enumeration: counts and order") {
    auto six = collect_nabla(InvarianceSpec::full(2), 1);
    std::vector<Frequency> expect = {{-1, -1}, {-1, 0}, {-1, 1}, {0, 0}, {0, 1}, {1, 1}};
    CHECK(six == expect);

    CHECK(collect_nabla(InvarianceSpec::none(1), 2).size() == 5);
    CHECK(collect_nabla(InvarianceSpec::none(2), 1).size() == 9);

    // lexicographic and duplicate-free
    auto big = collect_nabla(InvarianceSpec(3, {2, 3}), 2);
    CHECK(std::is_sorted(big.begin(), big.end()));
    CHECK(std::adjacent_find(big.begin(), big.end()) == big.end());
}

TEST_CASE("distinct rearrangements: counts times multiplicity equals (#I)!") {
    auto three = distinct_rearrangements({1, 1, 2}, InvarianceSpec::full(3));
    CHECK(three.size() == 3);
    CHECK(distinct_rearrangements({4, 4}, InvarianceSpec::full(2)).size() == 1);
    CHECK(distinct_rearrangements({1, 2}, InvarianceSpec(2, {1})).size() == 1);

    for (const Frequency& h :
         {Frequency{0, 1, 1, 2}, Frequency{5, 5, 5, 5}, Frequency{-1, 0, 1, 2}}) {
        auto inv = InvarianceSpec::full(4);
        auto imgs = distinct_rearrangements(h, inv);
        auto mult = multiplicity_factorial(h, inv);
        CHECK(imgs.size() * mult.exact == 24);
        // distinct means distinct
        std::vector<Frequency> sorted = imgs;
        std::sort(sorted.begin(), sorted.end());
        CHECK(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end());
    }
}

TEST_CASE("rearrangement enumeration guard") {
    Frequency h(13, 1);
    for (int i = 0; i < 13; ++i) h[static_cast<std::size_t>(i)] = i;
    CHECK_THROWS_AS(DistinctRearrangements(h, InvarianceSpec::full(13)),
                    TooManyPermutations);
}

TEST_CASE("box equals nabla expanded by rearrangements") {
    // the transform identity: expanding each representative by its distinct
    // images reproduces the full box exactly, orbit by orbit
    for (int d : {1, 2, 3}) {
        for (const auto& inv :
             {InvarianceSpec::none(d), InvarianceSpec::full(d),
              d >= 2 ? InvarianceSpec(d, {1, 2}) : InvarianceSpec::none(d)}) {
            const long long H = 2;
            std::vector<Frequency> expanded;
            for (const Frequency& k : collect_nabla(inv, H))
                for (const Frequency& img : distinct_rearrangements(k, inv))
                    expanded.push_back(img);
            std::sort(expanded.begin(), expanded.end());
            CHECK(expanded == full_box(d, H));
        }
    }
}

#include <gtest/gtest.h>

#include <set>

#include "perco/crossings.hpp"
#include "perco/oracle.hpp"

using namespace perco;

namespace {

constexpr CrossingSpec kLrPlusOcc{Orientation::LeftRight, AdjacencyKind::Plus, CellState::Occupied};
constexpr CrossingSpec kLrStarOcc{Orientation::LeftRight, AdjacencyKind::Star, CellState::Occupied};
constexpr CrossingSpec kTdPlusVac{Orientation::TopDown, AdjacencyKind::Plus, CellState::Vacant};
constexpr CrossingSpec kTdStarVac{Orientation::TopDown, AdjacencyKind::Star, CellState::Vacant};

CrossingSpec rotated(const CrossingSpec& s) {
    return {s.orientation == Orientation::LeftRight ? Orientation::TopDown : Orientation::LeftRight, s.kind, s.state};
}

} // namespace

TEST(Crossings, SpecNamesAndDuals) {
    std::set<std::string> names;
    for (const auto& s : kAllSpecs) names.insert(s.name());
    EXPECT_EQ(names.size(), 8U);
    EXPECT_EQ(kLrPlusOcc.name(), "lr_plus_occupied");
    EXPECT_EQ(kLrPlusOcc.dual(), kTdStarVac);
    EXPECT_EQ(kLrStarOcc.dual(), kTdPlusVac);
    for (const auto& s : kAllSpecs) EXPECT_EQ(s.dual().dual(), s);
}

TEST(Crossings, SingleCell) {
    const Configuration cfg = parse_configuration("#\n");
    const auto w = find_crossing(cfg, {1, 1}, kLrPlusOcc);
    ASSERT_TRUE(w);
    EXPECT_EQ(w->cells, (std::vector<Cell>{{0, 0}}));
    const DualityReport rep = duality_report(cfg, {1, 1});
    EXPECT_TRUE(rep.event(kLrPlusOcc));
    EXPECT_FALSE(rep.event(kTdStarVac));
    EXPECT_TRUE(rep.verdicts_hold());
}

TEST(Crossings, DiagonalPair) {
    const Configuration cfg = parse_configuration("#.\n.#\n");
    const Rect r{2, 2};
    const auto w = find_crossing(cfg, r, kLrStarOcc);
    ASSERT_TRUE(w);
    EXPECT_EQ(w->cells, (std::vector<Cell>{{0, 1}, {1, 0}}));
    EXPECT_FALSE(find_crossing(cfg, r, kLrPlusOcc));
    const DualityReport rep = duality_report(cfg, r);
    EXPECT_TRUE(rep.event(kLrStarOcc));
    EXPECT_FALSE(rep.event(kTdPlusVac));
    EXPECT_FALSE(rep.event(kLrPlusOcc));
    EXPECT_TRUE(rep.event(kTdStarVac));
    EXPECT_TRUE(rep.verdicts_hold());
}

TEST(Crossings, CanonicalWitnesses) {
    const Configuration vacant(3, 3);
    const auto td = find_crossing(vacant, {3, 3}, kTdPlusVac);
    ASSERT_TRUE(td);
    EXPECT_EQ(td->cells, (std::vector<Cell>{{0, 2}, {0, 1}, {0, 0}}));
    const Configuration full(3, 3, CellState::Occupied);
    const auto lr = find_crossing(full, {3, 3}, kLrPlusOcc);
    ASSERT_TRUE(lr);
    EXPECT_EQ(lr->cells, (std::vector<Cell>{{0, 0}, {1, 0}, {2, 0}}));
}

TEST(Crossings, WitnessesHonourSideConditions) {
    // A snake that returns to the left column must be cut at its last left contact.
    const Configuration cfg = parse_configuration("####\n#...\n#...\n");
    const auto w = find_crossing(cfg, {4, 3}, kLrPlusOcc);
    ASSERT_TRUE(w);
    EXPECT_EQ(w->cells.front(), (Cell{0, 2}));
    EXPECT_TRUE(validate_witness({4, 3}, *w, cfg));
}

TEST(Crossings, ValidateRejectsBrokenWitnesses) {
    const Configuration cfg = parse_configuration("###\n###\n");
    const Rect r{3, 2};
    EXPECT_TRUE(validate_witness(r, {{{0, 0}, {1, 0}, {2, 0}}, kLrPlusOcc}, cfg));
    // Interior cell on the start side.
    EXPECT_FALSE(validate_witness(r, {{{0, 0}, {0, 1}, {1, 1}, {2, 1}}, kLrPlusOcc}, cfg));
    // Interior cell on the end side.
    EXPECT_FALSE(validate_witness(r, {{{0, 0}, {1, 0}, {2, 0}, {2, 1}}, kLrPlusOcc}, cfg));
    // State mismatch.
    EXPECT_FALSE(validate_witness(r, {{{0, 0}, {1, 0}, {2, 0}}, kLrPlusOcc}, cfg.with_state({1, 0}, CellState::Vacant)));
    // Diagonal step under plus adjacency.
    EXPECT_FALSE(validate_witness(r, {{{0, 0}, {1, 1}, {2, 0}}, kLrPlusOcc}, cfg));
    EXPECT_TRUE(validate_witness(r, {{{0, 0}, {1, 1}, {2, 0}}, kLrStarOcc}, cfg));
    // Out of bounds, repeats, empty.
    EXPECT_FALSE(validate_witness(r, {{{0, 0}, {1, 0}, {2, 0}, {3, 0}}, kLrPlusOcc}, cfg));
    EXPECT_FALSE(validate_witness(r, {{{0, 0}, {1, 0}, {0, 0}, {1, 0}, {2, 0}}, kLrPlusOcc}, cfg));
    EXPECT_FALSE(validate_witness(r, {{}, kLrPlusOcc}, cfg));
}

TEST(Crossings, RandomWitnessesValidate) {
    for (std::uint64_t i = 0; i < 10000; ++i) {
        const Configuration cfg = random_config(6, 5, 0.5, derive_seed(3, i));
        const CrossingSpec& spec = kAllSpecs[i % 8];
        if (auto w = find_crossing(cfg, {6, 5}, spec)) {
            ASSERT_TRUE(validate_witness({6, 5}, *w, cfg)) << i;
            EXPECT_EQ(w->spec, spec);
        }
    }
}

TEST(Crossings, RectMustFit) {
    EXPECT_THROW(find_crossing(Configuration(2, 2), {3, 2}, kLrPlusOcc), PreconditionError);
    EXPECT_THROW(duality_report(Configuration(2, 2), {2, 3}), PreconditionError);
    // A smaller rect looks only at its own cells.
    const Configuration cfg = parse_configuration("...\n##.\n");
    EXPECT_TRUE(find_crossing(cfg, {2, 1}, kLrPlusOcc));
    EXPECT_FALSE(find_crossing(cfg, {3, 1}, kLrPlusOcc));
}

TEST(Crossings, LabelsAllVacant) {
    const LabelField f = label_from_left(Configuration(3, 3), {3, 3}, AdjacencyKind::Star);
    EXPECT_EQ(f.cells_with(Label::One), CellSet({{-1, 0}, {-1, 1}, {-1, 2}}));
    const CellSet zero = f.cells_with(Label::Zero);
    for (int r = 0; r < 3; ++r) EXPECT_TRUE(zero.contains({0, r}));
    EXPECT_TRUE(zero.contains({-1, 3}));
    EXPECT_TRUE(zero.contains({0, -1}));
    EXPECT_TRUE(zero.contains({-2, 1}));
    EXPECT_FALSE(zero.contains({1, 1}));

    const LabelField p = label_from_left(Configuration(3, 3), {3, 3}, AdjacencyKind::Plus);
    EXPECT_FALSE(p.cells_with(Label::Zero).contains({0, -1}));
    EXPECT_TRUE(p.cells_with(Label::Zero).contains({-1, 3}));
}

TEST(Crossings, LabelsAllOccupied) {
    const LabelField f = label_from_left(Configuration(3, 2, CellState::Occupied), {3, 2}, AdjacencyKind::Plus);
    EXPECT_EQ(f.cells_with(Label::One).size(), 2U + 6U);
}

TEST(Crossings, ZeroLabelsInsideRectAreVacant) {
    for (std::uint64_t i = 0; i < 2000; ++i) {
        const Configuration cfg = random_config(5, 5, 0.45, derive_seed(5, i));
        for (AdjacencyKind kind : {AdjacencyKind::Plus, AdjacencyKind::Star}) {
            const LabelField f = label_from_left(cfg, {5, 5}, kind);
            for (Cell c : f.cells_with(Label::Zero))
                if (c.col >= 0 && c.col < 5 && c.row >= 0 && c.row < 5) {
                    ASSERT_FALSE(cfg.occupied(c));
                }
            // One cells reach the right column iff the occupied crossing exists.
            bool reaches = false;
            for (Cell c : f.cells_with(Label::One)) reaches = reaches || c.col == 4;
            EXPECT_EQ(reaches, find_crossing(cfg, {5, 5}, {Orientation::LeftRight, kind, CellState::Occupied}).has_value());
        }
    }
}

TEST(Crossings, ConstructionsOnAllThreeByThree) {
    const Rect r{3, 3};
    int plus_built = 0, star_built = 0;
    enumerate_configs(3, 3, [&](std::uint64_t i, const Configuration& cfg) {
        if (!find_crossing(cfg, r, kLrStarOcc)) {
            const CrossingWitness w = construct_vacant_plus_td(cfg, r);
            EXPECT_TRUE(validate_witness(r, w, cfg)) << i;
            EXPECT_EQ(w.spec, kTdPlusVac);
            ++plus_built;
        } else {
            EXPECT_THROW(construct_vacant_plus_td(cfg, r), CrossingPresent) << i;
        }
        if (!find_crossing(cfg, r, kLrPlusOcc)) {
            const CrossingWitness w = construct_vacant_star_td(cfg, r);
            EXPECT_TRUE(validate_witness(r, w, cfg)) << i;
            EXPECT_EQ(w.spec, kTdStarVac);
            ++star_built;
        } else {
            EXPECT_THROW(construct_vacant_star_td(cfg, r), CrossingPresent) << i;
        }
    });
    EXPECT_GT(plus_built, 0);
    EXPECT_GT(star_built, plus_built);
}

TEST(Crossings, ConstructionErrorsCarryTheCrossing) {
    const Configuration cfg = parse_configuration("#.\n.#\n");
    try {
        construct_vacant_plus_td(cfg, {2, 2});
        FAIL() << "expected CrossingPresent";
    } catch (const CrossingPresent& e) {
        EXPECT_EQ(e.witness().spec, kLrStarOcc);
        EXPECT_EQ(e.witness().cells, (std::vector<Cell>{{0, 1}, {1, 0}}));
    }
    EXPECT_THROW(construct_vacant_star_td(Configuration(4, 3, CellState::Occupied), {4, 3}), CrossingPresent);
    EXPECT_NO_THROW(construct_vacant_star_td(cfg, {2, 2}));
}

TEST(Crossings, ConstructionsOnVacantRects) {
    for (int m = 1; m <= 5; ++m)
        for (int n = 1; n <= 5; ++n) {
            const Configuration cfg(m, n);
            EXPECT_TRUE(validate_witness({m, n}, construct_vacant_plus_td(cfg, {m, n}), cfg));
            EXPECT_TRUE(validate_witness({m, n}, construct_vacant_star_td(cfg, {m, n}), cfg));
        }
}

TEST(Crossings, ConstructionsOnRandomLargerRects) {
    for (std::uint64_t i = 0; i < 500; ++i) {
        const int m = 4 + static_cast<int>(i % 7), n = 3 + static_cast<int>((i / 7) % 8);
        const Configuration cfg = random_config(m, n, 0.35 + 0.05 * static_cast<double>(i % 5), derive_seed(9, i));
        const Rect r{m, n};
        if (!find_crossing(cfg, r, kLrStarOcc)) {
            EXPECT_TRUE(validate_witness(r, construct_vacant_plus_td(cfg, r), cfg)) << i;
        }
        if (!find_crossing(cfg, r, kLrPlusOcc)) {
            EXPECT_TRUE(validate_witness(r, construct_vacant_star_td(cfg, r), cfg)) << i;
        }
    }
}

TEST(Crossings, ComplementAndRotationSymmetry) {
    for (std::uint64_t i = 0; i < 3000; ++i) {
        const Configuration cfg = random_config(5, 4, 0.5, derive_seed(13, i));
        const Configuration comp = complement(cfg);
        const Configuration rot = rotate_quarter_turn(cfg);
        for (const auto& s : kAllSpecs) {
            const bool here = find_crossing(cfg, {5, 4}, s).has_value();
            EXPECT_EQ(here, find_crossing(comp, {5, 4}, {s.orientation, s.kind, flip(s.state)}).has_value());
            EXPECT_EQ(here, find_crossing(rot, {4, 5}, rotated(s)).has_value());
        }
    }
}

TEST(Crossings, Monotonicity) {
    for (std::uint64_t i = 0; i < 2000; ++i) {
        const Configuration cfg = random_config(5, 5, 0.5, derive_seed(17, i));
        const Cell c{static_cast<int>(i % 5), static_cast<int>((i / 5) % 5)};
        const Configuration more = cfg.with_state(c, CellState::Occupied);
        for (const auto& s : kAllSpecs) {
            const bool before = find_crossing(cfg, {5, 5}, s).has_value();
            const bool after = find_crossing(more, {5, 5}, s).has_value();
            const bool monotone = s.state == CellState::Occupied ? (!before || after) : (before || !after);
            EXPECT_TRUE(monotone) << i << " " << s.name();
        }
    }
}

#pragma once

// Brute-force ground truth. The crossing test here is a separate flood fill
// that shares no traversal code with crossings.hpp.

#include <array>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "crossings.hpp"
#include "dualization.hpp"
#include "error.hpp"
#include "lattice.hpp"

namespace perco {

/// Default limit on m*n for enumeration; PERCO_ENUM_CAP overrides it.
inline constexpr int kEnumerationCap = 24;
/// Limit on m*n for the exhaustive property runs and counts.
inline constexpr int kExhaustiveCap = 20;

struct Violation {
    std::uint64_t index = 0;
    std::string description;

    friend bool operator==(const Violation&, const Violation&) = default;
};

using ViolationList = std::vector<Violation>;

inline int enumeration_cap() {
    if (const char* env = std::getenv("PERCO_ENUM_CAP")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0 && v <= 62) return static_cast<int>(v);
    }
    return kEnumerationCap;
}

/// True iff a set of `spec.state` cells, connected under `spec.kind`, links the start side to the end side.
inline bool naive_crossing_exists(const Configuration& cfg, const Rect& r, const CrossingSpec& spec) {
    if (r.m > cfg.width() || r.n > cfg.height()) throw PreconditionError("rectangle does not fit the configuration");
    const bool lr = spec.orientation == Orientation::LeftRight;
    const bool star = spec.kind == AdjacencyKind::Star;
    std::vector<char> mark(static_cast<std::size_t>(r.m * r.n), 0);
    std::vector<std::pair<int, int>> stack;
    auto match = [&](int x, int y) { return cfg.state({x, y}) == spec.state; };
    auto push = [&](int x, int y) {
        if (x < 0 || y < 0 || x >= r.m || y >= r.n) return;
        char& seen = mark[static_cast<std::size_t>(y * r.m + x)];
        if (seen || !match(x, y)) return;
        seen = 1;
        stack.emplace_back(x, y);
    };
    if (lr)
        for (int y = 0; y < r.n; ++y) push(0, y);
    else
        for (int x = 0; x < r.m; ++x) push(x, r.n - 1);
    while (!stack.empty()) {
        const auto [x, y] = stack.back();
        stack.pop_back();
        if (lr ? x == r.m - 1 : y == 0) return true;
        for (int dy = -1; dy <= 1; ++dy)
            for (int dx = -1; dx <= 1; ++dx) {
                if (dx == 0 && dy == 0) continue;
                if (!star && dx != 0 && dy != 0) continue;
                push(x + dx, y + dy);
            }
    }
    return false;
}

/// Calls `visit(index, cfg)` for every m x n configuration in index order.
inline void enumerate_configs(int m, int n, const std::function<void(std::uint64_t, const Configuration&)>& visit) {
    if (m <= 0 || n <= 0) throw PreconditionError("dimensions must be positive");
    if (m * n > enumeration_cap())
        throw PreconditionError("enumeration of " + std::to_string(m) + "x" + std::to_string(n) + " exceeds cap of " +
                                std::to_string(enumeration_cap()) + " cells");
    const std::uint64_t total = std::uint64_t{1} << (m * n);
    for (std::uint64_t i = 0; i < total; ++i) visit(i, Configuration::from_bits(m, n, i));
}

namespace detail {

inline void check_exhaustive_cap(int m, int n) {
    if (m <= 0 || n <= 0) throw PreconditionError("dimensions must be positive");
    if (m * n > kExhaustiveCap)
        throw PreconditionError("exhaustive run over " + std::to_string(m) + "x" + std::to_string(n) +
                                " exceeds cap of " + std::to_string(kExhaustiveCap) + " cells");
}

// Runs fn(begin, end, shard) over contiguous slices of [0, total).
template <class Fn>
void run_sharded(std::uint64_t total, int workers, Fn&& fn) {
    const auto shards = static_cast<std::uint64_t>(std::max(1, workers));
    if (shards == 1 || total < shards) {
        fn(std::uint64_t{0}, total, std::size_t{0});
        return;
    }
    std::vector<std::thread> pool;
    for (std::uint64_t s = 0; s < shards; ++s) {
        const std::uint64_t b = total * s / shards;
        const std::uint64_t e = total * (s + 1) / shards;
        pool.emplace_back([&fn, b, e, s] { fn(b, e, static_cast<std::size_t>(s)); });
    }
    for (auto& t : pool) t.join();
}

} // namespace detail

/// Checks both duality pairs on every m x n configuration.
inline ViolationList exhaustive_exclusivity(int m, int n, int workers = 1) {
    detail::check_exhaustive_cap(m, n);
    const Rect r{m, n};
    const std::uint64_t total = std::uint64_t{1} << (m * n);
    const auto shards = static_cast<std::size_t>(std::max(1, workers));
    std::vector<ViolationList> found(shards);
    detail::run_sharded(total, workers, [&](std::uint64_t b, std::uint64_t e, std::size_t s) {
        for (std::uint64_t i = b; i < e; ++i) {
            const Configuration cfg = Configuration::from_bits(m, n, i);
            for (const CrossingSpec a : {CrossingSpec{Orientation::LeftRight, AdjacencyKind::Plus, CellState::Occupied},
                                         CrossingSpec{Orientation::LeftRight, AdjacencyKind::Star, CellState::Occupied}}) {
                const bool x = naive_crossing_exists(cfg, r, a);
                const bool y = naive_crossing_exists(cfg, r, a.dual());
                if (x == y)
                    found[s].push_back({i, a.name() + " and " + a.dual().name() + (x ? " both occur" : " both absent")});
            }
        }
    });
    ViolationList out;
    for (auto& v : found) out.insert(out.end(), v.begin(), v.end());
    return out;
}

/// Number of m x n configurations in which the event occurs.
inline std::uint64_t crossing_count(int m, int n, const CrossingSpec& spec, int workers = 1) {
    detail::check_exhaustive_cap(m, n);
    const Rect r{m, n};
    const std::uint64_t total = std::uint64_t{1} << (m * n);
    std::vector<std::uint64_t> counts(static_cast<std::size_t>(std::max(1, workers)), 0);
    detail::run_sharded(total, workers, [&](std::uint64_t b, std::uint64_t e, std::size_t s) {
        for (std::uint64_t i = b; i < e; ++i)
            if (naive_crossing_exists(Configuration::from_bits(m, n, i), r, spec)) ++counts[s];
    });
    std::uint64_t sum = 0;
    for (auto c : counts) sum += c;
    return sum;
}

struct EventTally {
    std::uint64_t configurations = 0;
    std::array<std::uint64_t, 8> counts{}; ///< indexed like kAllSpecs
    ViolationList violations;
};

/// Counts all eight events over every m x n configuration and records
/// exclusivity violations. Subject to the enumeration cap.
inline EventTally tally_events(int m, int n, int workers = 1) {
    if (m <= 0 || n <= 0) throw PreconditionError("dimensions must be positive");
    if (m * n > enumeration_cap())
        throw PreconditionError("enumeration of " + std::to_string(m) + "x" + std::to_string(n) + " exceeds cap of " +
                                std::to_string(enumeration_cap()) + " cells");
    const Rect r{m, n};
    const std::uint64_t total = std::uint64_t{1} << (m * n);
    std::vector<EventTally> parts(static_cast<std::size_t>(std::max(1, workers)));
    detail::run_sharded(total, workers, [&](std::uint64_t b, std::uint64_t e, std::size_t s) {
        EventTally& t = parts[s];
        for (std::uint64_t i = b; i < e; ++i) {
            const Configuration cfg = Configuration::from_bits(m, n, i);
            std::array<bool, 8> hit{};
            for (std::size_t k = 0; k < kAllSpecs.size(); ++k) {
                hit[k] = naive_crossing_exists(cfg, r, kAllSpecs[k]);
                if (hit[k]) ++t.counts[k];
            }
            for (std::size_t k = 0; k < 4; ++k) {
                const CrossingSpec& a = kAllSpecs[k];
                if (hit[k] == hit[spec_index(a.dual())])
                    t.violations.push_back({i, a.name() + " and " + a.dual().name() + (hit[k] ? " both occur" : " both absent")});
            }
        }
    });
    EventTally out;
    out.configurations = total;
    for (const auto& t : parts) {
        for (std::size_t k = 0; k < 8; ++k) out.counts[k] += t.counts[k];
        out.violations.insert(out.violations.end(), t.violations.begin(), t.violations.end());
    }
    return out;
}

/// Every star-connected cell set fitting in a k x k box, anchored so that it
/// touches column 0 and row 0. Sets are listed by increasing bit mask (bit i is
/// cell (i % k, i / k)).
inline std::vector<CellSet> star_shapes_in_box(int k) {
    if (k <= 0 || k * k > kExhaustiveCap) throw PreconditionError("box side out of range");
    std::vector<CellSet> out;
    const std::uint64_t total = std::uint64_t{1} << (k * k);
    std::uint64_t row0 = 0, col0 = 0;
    for (int i = 0; i < k; ++i) {
        row0 |= std::uint64_t{1} << i;
        col0 |= std::uint64_t{1} << (i * k);
    }
    for (std::uint64_t mask = 1; mask < total; ++mask) {
        if (!(mask & row0) || !(mask & col0)) continue;
        CellSet cells = Configuration::from_bits(k, k, mask).occupied_cells();
        if (is_connected(cells, AdjacencyKind::Star)) out.push_back(std::move(cells));
    }
    return out;
}

/// Exhaustive check of envelope dominance for one component.
///
/// Enumerates every plus S-cycle F whose cells lie in lambda0 and which
/// encloses the whole component with a single outer boundary, and reports any
/// F with a skeleton edge neither on nor inside the envelope's skeleton.
/// `cycles_seen`, when given, receives the number of S-cycles examined.
inline std::vector<std::string> envelope_dominance_violations(const CellSet& comp, const EnvelopeResult& env,
                                                              std::uint64_t* cycles_seen = nullptr) {
    const std::vector<Cell>& lam = env.lambda0.cells();
    const std::size_t n = lam.size();
    std::vector<std::vector<std::size_t>> adj(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (adjacent(lam[i], lam[j], AdjacencyKind::Plus)) adj[i].push_back(j);

    const Cycle& outer = env.skeleton.skeleton;
    const EdgeSet outer_edges = outer.edge_set();
    std::vector<std::string> found;
    std::uint64_t seen_count = 0;

    auto examine = [&](const std::vector<std::size_t>& path) {
        ++seen_count;
        std::vector<CornerPoint> centers;
        for (std::size_t i : path) centers.push_back(lam[i].center());
        const Cycle sk(centers);
        bool dominated = true;
        for (const GridEdge& e : sk.edges())
            if (!outer_edges.contains(e) && !edge_in_interior(outer, e)) {
                dominated = false;
                break;
            }
        if (dominated) return;
        for (Cell c : comp)
            if (!cell_in_interior(sk, c)) return;
        std::vector<Cell> cells;
        for (std::size_t i : path) cells.push_back(lam[i]);
        if (outermost_boundary(CellSet(cells), AdjacencyKind::Plus).cycles.size() != 1) return;
        std::string d = "S-cycle";
        for (Cell c : cells) d += " " + to_string(c);
        found.push_back(d + " escapes the envelope skeleton");
    };

    // Each cycle once: smallest index first, second vertex below the last.
    std::vector<std::size_t> path;
    std::vector<char> on_path(n, 0);
    std::function<void(std::size_t)> extend = [&](std::size_t start) {
        const std::size_t at = path.back();
        for (std::size_t nb : adj[at]) {
            if (nb == start && path.size() >= 4 && path[1] < path.back()) examine(path);
            if (nb <= start || on_path[nb]) continue;
            on_path[nb] = 1;
            path.push_back(nb);
            extend(start);
            path.pop_back();
            on_path[nb] = 0;
        }
    };
    for (std::size_t s = 0; s < n; ++s) {
        path.assign(1, s);
        on_path[s] = 1;
        extend(s);
        on_path[s] = 0;
    }
    if (cycles_seen) *cycles_seen = seen_count;
    return found;
}

/// SplitMix64 finaliser.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Seed of the `index`-th sub-stream of `seed`.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    return splitmix64(splitmix64(seed) ^ index);
}

/// I.i.d. Bernoulli(p) occupancy.
///
/// One std::mt19937_64 draw per cell in row-major order; the cell is occupied
/// iff the top 53 bits, read as a fraction in [0, 1), are below p. Both the
/// engine and the conversion are fully specified, so output is identical
/// across platforms.
inline Configuration random_config(int m, int n, double p, std::uint64_t seed) {
    if (!(p >= 0.0 && p <= 1.0)) throw PreconditionError("probability must lie in [0, 1]");
    std::mt19937_64 gen(seed);
    std::vector<CellState> states(static_cast<std::size_t>(m) * static_cast<std::size_t>(n));
    constexpr double kScale = 1.0 / 9007199254740992.0; // 2^-53
    for (auto& s : states) {
        const double u = static_cast<double>(gen() >> 11) * kScale;
        s = u < p ? CellState::Occupied : CellState::Vacant;
    }
    return Configuration(m, n, std::move(states));
}

} // namespace perco

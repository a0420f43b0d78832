#pragma once

// Corner-graph machinery: grid edges, cycles, point location, outermost
// boundaries of components and merging a cycle with an adjacent square.

#include <algorithm>
#include <cstdint>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "error.hpp"
#include "lattice.hpp"

namespace perco {

/// Unit edge of the lattice; `a` is the row-major smaller endpoint.
struct GridEdge {
    CornerPoint a;
    CornerPoint b;

    static GridEdge make(CornerPoint p, CornerPoint q) {
        if (!grid_adjacent(p, q)) throw GeometryError("edge endpoints are not grid-adjacent");
        return q < p ? GridEdge{q, p} : GridEdge{p, q};
    }

    constexpr bool horizontal() const { return a.y == b.y; }
    constexpr CornerPoint midpoint() const { return {(a.x + b.x) / 2, (a.y + b.y) / 2}; }

    friend constexpr bool operator==(const GridEdge&, const GridEdge&) = default;
    friend constexpr auto operator<=>(const GridEdge&, const GridEdge&) = default;
};

/// The two cells sharing a corner-lattice edge: (above, below) or (right, left).
inline std::pair<Cell, Cell> cells_of_edge(const GridEdge& e) {
    if (!e.a.is_corner()) throw GeometryError("cells_of_edge needs an edge of the corner lattice");
    if (e.horizontal()) return {Cell{e.a.x / 2, e.a.y / 2}, Cell{e.a.x / 2, e.a.y / 2 - 1}};
    return {Cell{e.a.x / 2, e.a.y / 2}, Cell{e.a.x / 2 - 1, e.a.y / 2}};
}

inline std::array<GridEdge, 4> cell_edges(Cell c) {
    const auto k = c.corners();
    return {GridEdge::make(k[0], k[1]), GridEdge::make(k[1], k[2]), GridEdge::make(k[3], k[2]),
            GridEdge::make(k[0], k[3])};
}

} // namespace perco

template <>
struct std::hash<perco::GridEdge> {
    std::size_t operator()(const perco::GridEdge& e) const noexcept {
        const std::size_t h1 = std::hash<perco::CornerPoint>{}(e.a);
        const std::size_t h2 = std::hash<perco::CornerPoint>{}(e.b);
        return h1 ^ (h2 + 0x9e3779b97f4a7c15ULL + (h1 << 6) + (h1 >> 2));
    }
};

namespace perco {

using EdgeSet = std::unordered_set<GridEdge>;

/// Simple closed walk on one sub-lattice (all vertices even-even, or all odd-odd).
///
/// Vertex order is kept as given; canonical() fixes a counter-clockwise
/// orientation starting at the row-major smallest vertex.
class Cycle {
public:
    explicit Cycle(std::vector<CornerPoint> vertices) : v_(std::move(vertices)) {
        if (v_.size() < 4) throw GeometryError("a cycle needs at least four edges");
        const bool even = v_.front().is_corner();
        if (!even && !v_.front().is_center()) throw GeometryError("cycle vertex of mixed parity");
        for (std::size_t i = 0; i < v_.size(); ++i) {
            const CornerPoint p = v_[i];
            if (even ? !p.is_corner() : !p.is_center()) throw GeometryError("cycle vertices of mixed parity");
            if (!grid_adjacent(p, v_[(i + 1) % v_.size()])) throw GeometryError("consecutive cycle vertices not adjacent");
        }
        std::vector<CornerPoint> sorted = v_;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            throw GeometryError("cycle repeats a vertex");
    }

    const std::vector<CornerPoint>& vertices() const { return v_; }
    std::size_t size() const { return v_.size(); }
    const CornerPoint& vertex(std::size_t i) const { return v_[i % v_.size()]; }
    GridEdge edge(std::size_t i) const { return GridEdge::make(v_[i], v_[(i + 1) % v_.size()]); }

    std::vector<GridEdge> edges() const {
        std::vector<GridEdge> out;
        out.reserve(v_.size());
        for (std::size_t i = 0; i < v_.size(); ++i) out.push_back(edge(i));
        return out;
    }

    EdgeSet edge_set() const {
        EdgeSet s;
        s.reserve(v_.size() * 2);
        for (std::size_t i = 0; i < v_.size(); ++i) s.insert(edge(i));
        return s;
    }

    bool has_vertex(CornerPoint p) const { return std::find(v_.begin(), v_.end(), p) != v_.end(); }

    /// Twice the signed enclosed area in doubled units; positive when counter-clockwise.
    std::int64_t twice_signed_area() const {
        std::int64_t s = 0;
        for (std::size_t i = 0; i < v_.size(); ++i) {
            const CornerPoint p = v_[i];
            const CornerPoint q = v_[(i + 1) % v_.size()];
            s += static_cast<std::int64_t>(p.x) * q.y - static_cast<std::int64_t>(q.x) * p.y;
        }
        return s;
    }

    Cycle canonical() const {
        std::vector<CornerPoint> w = v_;
        if (twice_signed_area() < 0) std::reverse(w.begin(), w.end());
        auto it = std::min_element(w.begin(), w.end());
        std::rotate(w.begin(), it, w.end());
        Cycle c;
        c.v_ = std::move(w);
        return c;
    }

    bool same_as(const Cycle& other) const { return canonical().v_ == other.canonical().v_; }

    Cycle translated(int dx, int dy) const {
        Cycle c;
        c.v_ = v_;
        for (auto& p : c.v_) {
            p.x += dx;
            p.y += dy;
        }
        return c;
    }

    friend bool operator==(const Cycle&, const Cycle&) = default;

private:
    Cycle() = default;
    std::vector<CornerPoint> v_;
};

/// Boundary of a cell's closed square as a counter-clockwise cycle.
inline Cycle cell_cycle(Cell c) {
    const auto k = c.corners();
    return Cycle({k[0], k[1], k[2], k[3]});
}

enum class Location { Inside, On, Outside };

/// Exact point location by ray casting along +x with a half-open crossing rule.
inline Location point_in_cycle(const Cycle& cyc, CornerPoint p) {
    bool inside = false;
    const auto& v = cyc.vertices();
    for (std::size_t i = 0; i < v.size(); ++i) {
        const CornerPoint a = v[i];
        const CornerPoint b = v[(i + 1) % v.size()];
        if (a.x == b.x) {
            const int lo = std::min(a.y, b.y);
            const int hi = std::max(a.y, b.y);
            if (p.x == a.x && p.y >= lo && p.y <= hi) return Location::On;
            if (a.x > p.x && p.y >= lo && p.y < hi) inside = !inside;
        } else if (p.y == a.y && p.x >= std::min(a.x, b.x) && p.x <= std::max(a.x, b.x)) {
            return Location::On;
        }
    }
    return inside ? Location::Inside : Location::Outside;
}

/// An edge lies in the interior when at least one endpoint does.
inline bool edge_in_interior(const Cycle& cyc, const GridEdge& e) {
    return point_in_cycle(cyc, e.a) == Location::Inside || point_in_cycle(cyc, e.b) == Location::Inside;
}

inline bool cell_in_interior(const Cycle& cyc, Cell c) { return point_in_cycle(cyc, c.center()) == Location::Inside; }

/// All cells whose centers lie strictly inside `cyc`, by one scanline pass per row.
inline CellSet cells_inside(const Cycle& cyc) {
    const auto& v = cyc.vertices();
    int xmin = v.front().x, xmax = xmin, ymin = v.front().y, ymax = ymin;
    for (const CornerPoint p : v) {
        xmin = std::min(xmin, p.x);
        xmax = std::max(xmax, p.x);
        ymin = std::min(ymin, p.y);
        ymax = std::max(ymax, p.y);
    }
    std::vector<Cell> out;
    std::vector<int> crossings;
    std::vector<int> on_xs;
    std::vector<std::pair<int, int>> on_spans;
    // Odd coordinates: floor((y - 1) / 2) for the first center row above ymin.
    auto floor_half = [](int z) { return z >= 0 ? z / 2 : -((-z + 1) / 2); };
    for (int row = floor_half(ymin - 1); 2 * row + 1 < ymax; ++row) {
        const int y = 2 * row + 1;
        if (y <= ymin) continue;
        crossings.clear();
        on_xs.clear();
        on_spans.clear();
        for (std::size_t i = 0; i < v.size(); ++i) {
            const CornerPoint a = v[i];
            const CornerPoint b = v[(i + 1) % v.size()];
            if (a.x == b.x) {
                const int lo = std::min(a.y, b.y);
                const int hi = std::max(a.y, b.y);
                if (y >= lo && y < hi) crossings.push_back(a.x);
                if (y >= lo && y <= hi) on_xs.push_back(a.x);
            } else if (a.y == y) {
                on_spans.emplace_back(std::min(a.x, b.x), std::max(a.x, b.x));
            }
        }
        std::sort(crossings.begin(), crossings.end());
        for (int col = floor_half(xmin - 1); 2 * col + 1 < xmax; ++col) {
            const int x = 2 * col + 1;
            if (x <= xmin) continue;
            const auto right = crossings.end() - std::upper_bound(crossings.begin(), crossings.end(), x);
            if ((right & 1) == 0) continue;
            if (std::find(on_xs.begin(), on_xs.end(), x) != on_xs.end()) continue;
            if (std::any_of(on_spans.begin(), on_spans.end(),
                            [x](const auto& s) { return x >= s.first && x <= s.second; }))
                continue;
            out.push_back({col, row});
        }
    }
    return CellSet(std::move(out));
}

/// The four edges of every cell of `comp`, deduplicated.
inline EdgeSet component_edge_graph(const CellSet& comp) {
    if (comp.empty()) throw PreconditionError("component_edge_graph of an empty component");
    EdgeSet out;
    out.reserve(comp.size() * 4);
    for (Cell c : comp)
        for (const GridEdge& e : cell_edges(c)) out.insert(e);
    return out;
}

/// Outer face of a component: cycles with disjoint interiors meeting at pinch points.
struct OutermostBoundary {
    std::vector<Cycle> cycles;
    std::vector<CornerPoint> pinch_points;

    std::vector<GridEdge> edges() const {
        std::vector<GridEdge> out;
        for (const Cycle& c : cycles)
            for (const GridEdge& e : c.edges()) out.push_back(e);
        std::sort(out.begin(), out.end());
        return out;
    }

    std::vector<CornerPoint> vertices() const {
        std::vector<CornerPoint> out;
        for (const Cycle& c : cycles) out.insert(out.end(), c.vertices().begin(), c.vertices().end());
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }
};

namespace detail {

// Direction indices: 0 = E, 1 = N, 2 = W, 3 = S (doubled steps).
inline constexpr std::array<CornerPoint, 4> kSteps{{{2, 0}, {0, 2}, {-2, 0}, {0, -2}}};

// Splits a closed walk at repeated vertices into simple cycles.
inline void split_closed_walk(const std::vector<CornerPoint>& walk, std::vector<Cycle>& out) {
    std::vector<CornerPoint> stack;
    std::unordered_map<CornerPoint, std::size_t> pos;
    for (const CornerPoint p : walk) {
        auto it = pos.find(p);
        if (it != pos.end()) {
            const std::size_t k = it->second;
            std::vector<CornerPoint> loop(stack.begin() + static_cast<std::ptrdiff_t>(k), stack.end());
            for (std::size_t i = k + 1; i < stack.size(); ++i) pos.erase(stack[i]);
            stack.resize(k + 1);
            out.emplace_back(std::move(loop));
            continue;
        }
        pos.emplace(p, stack.size());
        stack.push_back(p);
    }
    if (!stack.empty()) out.emplace_back(std::move(stack));
}

} // namespace detail

/// Outermost boundary of a `kind`-connected component.
///
/// The exterior face is the set of non-component cells plus-reachable from
/// outside the bounding box (diagonal contacts block it). Boundary edges are
/// walked with the component on the left, preferring left turn, then
/// straight, then right, and each closed walk is split at repeated corners.
inline OutermostBoundary outermost_boundary(const CellSet& comp, AdjacencyKind kind) {
    if (comp.empty()) throw PreconditionError("outermost_boundary of an empty component");
    if (!is_connected(comp, kind)) throw PreconditionError("component is not connected");

    const Box box = comp.bounding_box().expanded(1);
    const auto w = static_cast<std::size_t>(box.width());
    const auto h = static_cast<std::size_t>(box.height());
    auto idx = [&](Cell c) {
        return static_cast<std::size_t>(c.row - box.min_row) * w + static_cast<std::size_t>(c.col - box.min_col);
    };
    std::vector<std::uint8_t> in_comp(w * h, 0), outside(w * h, 0);
    for (Cell c : comp) in_comp[idx(c)] = 1;

    std::vector<Cell> stack{{box.min_col, box.min_row}};
    outside[idx(stack.front())] = 1;
    while (!stack.empty()) {
        const Cell c = stack.back();
        stack.pop_back();
        for (const Offset o : neighbor_offsets(AdjacencyKind::Plus)) {
            const Cell nb = c.shifted(o.dc, o.dr);
            if (!box.contains(nb) || in_comp[idx(nb)] || outside[idx(nb)]) continue;
            outside[idx(nb)] = 1;
            stack.push_back(nb);
        }
    }

    // Directed boundary edges keyed by tail vertex; per vertex at most one per direction.
    struct Slots {
        std::array<std::uint8_t, 4> present{};
        std::array<std::uint8_t, 4> used{};
    };
    std::unordered_map<CornerPoint, Slots> out_edges;
    std::vector<std::pair<CornerPoint, int>> starts;
    auto add = [&](CornerPoint from, int dir) {
        out_edges[from].present[static_cast<std::size_t>(dir)] = 1;
        starts.emplace_back(from, dir);
    };
    for (Cell c : comp) {
        const auto k = c.corners();
        if (outside[idx(c.shifted(0, -1))]) add(k[0], 0);
        if (outside[idx(c.shifted(1, 0))]) add(k[1], 1);
        if (outside[idx(c.shifted(0, 1))]) add(k[2], 2);
        if (outside[idx(c.shifted(-1, 0))]) add(k[3], 3);
    }
    std::sort(starts.begin(), starts.end());

    std::vector<Cycle> cycles;
    for (const auto& [start, start_dir] : starts) {
        if (out_edges[start].used[static_cast<std::size_t>(start_dir)]) continue;
        std::vector<CornerPoint> walk;
        CornerPoint at = start;
        int dir = start_dir;
        while (true) {
            auto& here = out_edges[at];
            if (here.used[static_cast<std::size_t>(dir)]) throw InternalError("boundary walk reused an edge");
            here.used[static_cast<std::size_t>(dir)] = 1;
            walk.push_back(at);
            at = {at.x + detail::kSteps[static_cast<std::size_t>(dir)].x,
                  at.y + detail::kSteps[static_cast<std::size_t>(dir)].y};
            const auto& slots = out_edges[at];
            int next = -1;
            for (int t : {(dir + 1) % 4, dir, (dir + 3) % 4}) {
                if (slots.present[static_cast<std::size_t>(t)]) {
                    next = t;
                    break;
                }
            }
            if (next < 0) throw InternalError("boundary walk got stuck");
            dir = next;
            if (at == start && dir == start_dir) break;
        }
        detail::split_closed_walk(walk, cycles);
    }

    OutermostBoundary result;
    for (Cycle& c : cycles) result.cycles.push_back(c.canonical());
    std::sort(result.cycles.begin(), result.cycles.end(),
              [](const Cycle& a, const Cycle& b) { return a.vertex(0) < b.vertex(0); });

    std::unordered_map<CornerPoint, int> seen;
    for (const Cycle& c : result.cycles)
        for (const CornerPoint p : c.vertices()) ++seen[p];
    for (const auto& [p, count] : seen)
        if (count > 1) result.pinch_points.push_back(p);
    std::sort(result.pinch_points.begin(), result.pinch_points.end());
    return result;
}

namespace detail {

// Orders an edge set in which every vertex has degree two into one cycle.
inline std::optional<Cycle> single_cycle_from_edges(const EdgeSet& edges) {
    if (edges.size() < 4) return std::nullopt;
    std::unordered_map<CornerPoint, std::vector<CornerPoint>> adj;
    for (const GridEdge& e : edges) {
        adj[e.a].push_back(e.b);
        adj[e.b].push_back(e.a);
    }
    for (const auto& [p, nbs] : adj)
        if (nbs.size() != 2) return std::nullopt;
    CornerPoint start = adj.begin()->first;
    for (const auto& [p, nbs] : adj)
        if (p < start) start = p;
    std::vector<CornerPoint> walk{start};
    CornerPoint prev = start;
    CornerPoint at = adj[start][0];
    while (at != start) {
        walk.push_back(at);
        const auto& nbs = adj[at];
        const CornerPoint next = nbs[0] == prev ? nbs[1] : nbs[0];
        prev = at;
        at = next;
    }
    if (walk.size() != edges.size()) return std::nullopt;
    return Cycle(std::move(walk)).canonical();
}

} // namespace detail

/// Merges a corner-lattice cycle with an exterior square sharing at least one edge.
///
/// The result bounds the union of the old interior and the square, using
/// only edges of the two. A square that meets the cycle only at a corner
/// cannot be merged into a simple cycle and is rejected.
inline Cycle merge_cycle_square(const Cycle& cyc, Cell c) {
    if (!cyc.vertex(0).is_corner()) throw PreconditionError("merge_cycle_square needs a corner-lattice cycle");
    const Location where = point_in_cycle(cyc, c.center());
    if (where != Location::Outside) throw PreconditionError("square is already interior to the cycle");

    EdgeSet sym = cyc.edge_set();
    bool shares_edge = false;
    for (const GridEdge& e : cell_edges(c)) {
        if (sym.erase(e))
            shares_edge = true;
        else
            sym.insert(e);
    }
    if (!shares_edge) {
        const auto k = c.corners();
        const bool touches = std::any_of(k.begin(), k.end(), [&](CornerPoint p) { return cyc.has_vertex(p); });
        throw PreconditionError(touches ? "square meets the cycle only at a corner"
                                        : "square is disjoint from the cycle");
    }
    if (auto merged = detail::single_cycle_from_edges(sym)) return *merged;

    // The square closes off a pocket: take the outer boundary of the filled region.
    CellSet region = cells_inside(cyc);
    region.insert(c);
    OutermostBoundary ob = outermost_boundary(region, AdjacencyKind::Plus);
    if (ob.cycles.size() != 1) throw InternalError("merged region has a split boundary");
    return ob.cycles.front();
}

} // namespace perco

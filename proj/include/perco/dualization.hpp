#pragma once

// Dual skeletons and the surrounding vacant plus-connected S-cycle of a finite
// star-connected occupied component.
//
// Pipeline: outer boundary of the component (star), the dual squares centred
// on its vertices, the outer boundary of that cover on the dual lattice, then
// exterior chords are absorbed until none is left. The cells centred on the
// final cycle's vertices form the envelope.

#include <algorithm>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "error.hpp"
#include "lattice.hpp"
#include "topology.hpp"

namespace perco {

/// Cyclic sequence of distinct cells, consecutive ones `kind`-adjacent.
struct SCycle {
    std::vector<Cell> cells;
    AdjacencyKind kind = AdjacencyKind::Plus;

    bool valid() const {
        const std::size_t min_len = kind == AdjacencyKind::Plus ? 4 : 3;
        if (cells.size() < min_len) return false;
        if (CellSet(cells).size() != cells.size()) return false;
        for (std::size_t i = 0; i < cells.size(); ++i)
            if (!adjacent(cells[i], cells[(i + 1) % cells.size()], kind)) return false;
        return true;
    }

    CellSet cell_set() const { return CellSet(cells); }
};

/// Cycle through cell centers (odd-odd vertices).
struct DualSkeleton {
    Cycle skeleton;

    std::vector<Cell> cells() const {
        std::vector<Cell> out;
        out.reserve(skeleton.size());
        for (const CornerPoint p : skeleton.vertices()) out.push_back(cell_at_center(p));
        return out;
    }

    friend bool operator==(const DualSkeleton&, const DualSkeleton&) = default;
};

struct PropertyCheck {
    std::string name;
    bool passed = true;
    std::vector<std::string> details;
};

struct PropertyReport {
    std::vector<PropertyCheck> checks;

    bool ok() const {
        return std::all_of(checks.begin(), checks.end(), [](const PropertyCheck& c) { return c.passed; });
    }

    const PropertyCheck* find(const std::string& name) const {
        for (const auto& c : checks)
            if (c.name == name) return &c;
        return nullptr;
    }
};

struct EnvelopeResult {
    SCycle g_out;
    DualSkeleton skeleton;
    Cycle outer_boundary;
    CellSet lambda0;
    PropertyReport report;
};

inline std::string to_string(Cell c) { return "(" + std::to_string(c.col) + "," + std::to_string(c.row) + ")"; }
inline std::string to_string(CornerPoint p) { return "(" + std::to_string(p.x) + "," + std::to_string(p.y) + ")"; }

inline DualSkeleton skeleton_of_scycle(const SCycle& s) {
    if (s.kind != AdjacencyKind::Plus) throw PreconditionError("dual skeletons need a plus-connected S-cycle");
    if (!s.valid()) throw GeometryError("not a plus-connected S-cycle");
    std::vector<CornerPoint> centers;
    centers.reserve(s.cells.size());
    for (Cell c : s.cells) centers.push_back(c.center());
    return DualSkeleton{Cycle(std::move(centers))};
}

/// Vacant cells sharing at least a corner with some cell of `comp`.
inline CellSet lambda0(const Configuration& cfg, const CellSet& comp) {
    std::vector<Cell> out;
    for (Cell c : comp)
        for (const Offset o : neighbor_offsets(AdjacencyKind::Star)) {
            const Cell nb = c.shifted(o.dc, o.dr);
            if (cfg.state(nb) == CellState::Vacant && !comp.contains(nb)) out.push_back(nb);
        }
    return CellSet(std::move(out));
}

/// Dual squares centred on the boundary's vertices.
///
/// Cover cell (i, j) stands for the dual square centred at corner (2i, 2j),
/// i.e. the grid cell whose lower-left corner is that vertex. Its corners are
/// the centers of the four primal cells meeting there.
inline CellSet boundary_vertex_dual_cover(const OutermostBoundary& b) {
    if (b.cycles.empty()) throw PreconditionError("empty boundary");
    std::vector<Cell> out;
    for (const Cycle& c : b.cycles)
        for (const CornerPoint v : c.vertices()) out.push_back({v.x / 2, v.y / 2});
    return CellSet(std::move(out));
}

/// Outer boundary of the dual cover, placed on the dual lattice (vertices at cell centers).
inline DualSkeleton dual_outer_cycle(const CellSet& cover) {
    if (!is_connected(cover, AdjacencyKind::Plus)) throw PreconditionError("dual cover is not plus-connected");
    OutermostBoundary ob = outermost_boundary(cover, AdjacencyKind::Plus);
    if (ob.cycles.size() != 1) throw InternalError("plus component with a split outer boundary");
    return DualSkeleton{ob.cycles.front().translated(-1, -1).canonical()};
}

namespace detail {

struct Chord {
    std::size_t i;
    std::size_t j;
};

// First grid edge joining two non-consecutive cycle vertices through the exterior.
inline std::optional<Chord> find_exterior_chord(const Cycle& cyc) {
    const auto& v = cyc.vertices();
    const std::size_t n = v.size();
    std::unordered_map<CornerPoint, std::size_t> where;
    where.reserve(n * 2);
    for (std::size_t i = 0; i < n; ++i) where.emplace(v[i], i);
    for (std::size_t i = 0; i < n; ++i) {
        for (const CornerPoint step : kSteps) {
            const CornerPoint w{v[i].x + step.x, v[i].y + step.y};
            auto it = where.find(w);
            if (it == where.end()) continue;
            const std::size_t j = it->second;
            if (j == (i + 1) % n || i == (j + 1) % n) continue;
            const CornerPoint mid{(v[i].x + w.x) / 2, (v[i].y + w.y) / 2};
            if (point_in_cycle(cyc, mid) == Location::Outside) return Chord{i, j};
        }
    }
    return std::nullopt;
}

} // namespace detail

/// Absorbs exterior chords until none remain.
///
/// Each step splits the cycle at the chord's endpoints and keeps the arc whose
/// closure with the chord encloses the old cycle (the larger area). The vertex
/// set can only shrink.
inline DualSkeleton maximize_skeleton(const DualSkeleton& d) {
    Cycle cur = d.skeleton.canonical();
    while (auto chord = detail::find_exterior_chord(cur)) {
        const auto& v = cur.vertices();
        const std::size_t n = v.size();
        std::vector<CornerPoint> arc1, arc2;
        for (std::size_t k = chord->i;; k = (k + 1) % n) {
            arc1.push_back(v[k]);
            if (k == chord->j) break;
        }
        for (std::size_t k = chord->j;; k = (k + 1) % n) {
            arc2.push_back(v[k]);
            if (k == chord->i) break;
        }
        auto area = [](const std::vector<CornerPoint>& w) -> std::int64_t {
            if (w.size() < 4) return -1;
            const std::int64_t a = Cycle(w).twice_signed_area();
            return a < 0 ? -a : a;
        };
        cur = Cycle(area(arc1) > area(arc2) ? arc1 : arc2).canonical();
    }
    return DualSkeleton{cur};
}

/// Checks the four envelope properties; failures name the offending cells or edges.
inline PropertyReport verify_envelope(const Configuration& cfg, const CellSet& comp, const EnvelopeResult& res) {
    PropertyReport rep;
    const auto& cells = res.g_out.cells;
    const CellSet g_set(cells);
    const Cycle& sk = res.skeleton.skeleton;

    PropertyCheck shape{"scycle", true, {}};
    if (!res.g_out.valid() || res.g_out.kind != AdjacencyKind::Plus) {
        shape.passed = false;
        shape.details.push_back("g_out is not a plus-connected S-cycle");
    } else if (!skeleton_of_scycle(res.g_out).skeleton.same_as(sk)) {
        shape.passed = false;
        shape.details.push_back("skeleton does not pass through the g_out cell centers");
    }
    rep.checks.push_back(shape);

    const CellSet lam = lambda0(cfg, comp);
    PropertyCheck p1{"i_vacant_in_lambda0", true, {}};
    for (Cell c : cells) {
        if (cfg.state(c) != CellState::Vacant) {
            p1.passed = false;
            p1.details.push_back("cell " + to_string(c) + " is occupied");
        } else if (!lam.contains(c)) {
            p1.passed = false;
            p1.details.push_back("cell " + to_string(c) + " is not in lambda0");
        }
    }
    rep.checks.push_back(p1);

    PropertyCheck p2{"ii_single_outer_cycle", true, {}};
    if (!shape.passed) {
        p2.passed = false;
        p2.details.push_back("skipped: g_out malformed");
    } else {
        const OutermostBoundary ob = outermost_boundary(g_set, AdjacencyKind::Plus);
        if (ob.cycles.size() != 1) {
            p2.passed = false;
            p2.details.push_back("outer boundary has " + std::to_string(ob.cycles.size()) + " cycles");
        } else {
            const Cycle& outer = ob.cycles.front();
            if (!outer.same_as(res.outer_boundary)) {
                p2.passed = false;
                p2.details.push_back("stored outer boundary differs from the recomputed one");
            }
            for (Cell c : cells)
                if (!cell_in_interior(outer, c)) {
                    p2.passed = false;
                    p2.details.push_back("cell " + to_string(c) + " not inside the outer boundary");
                }
            for (const GridEdge& e : sk.edges())
                if (!edge_in_interior(outer, e)) {
                    p2.passed = false;
                    p2.details.push_back("skeleton edge " + to_string(e.a) + "-" + to_string(e.b) +
                                         " not inside the outer boundary");
                }
        }
    }
    rep.checks.push_back(p2);

    PropertyCheck p3a{"iii_component_inside", true, {}};
    for (Cell c : comp)
        if (!cell_in_interior(sk, c)) {
            p3a.passed = false;
            p3a.details.push_back("component cell " + to_string(c) + " not inside the skeleton");
        }
    rep.checks.push_back(p3a);

    PropertyCheck p3b{"iii_lambda0_inside", true, {}};
    for (Cell c : lam)
        if (!g_set.contains(c) && !cell_in_interior(sk, c)) {
            p3b.passed = false;
            p3b.details.push_back("lambda0 cell " + to_string(c) + " neither on nor inside the skeleton");
        }
    rep.checks.push_back(p3b);

    PropertyCheck p4{"iv_no_exterior_chord", true, {}};
    if (auto chord = detail::find_exterior_chord(sk)) {
        p4.passed = false;
        p4.details.push_back("exterior chord " + to_string(sk.vertex(chord->i)) + "-" + to_string(sk.vertex(chord->j)));
    }
    rep.checks.push_back(p4);
    return rep;
}

/// Minimum number of vacant cells required between the component and the window edge.
inline constexpr int kEnvelopeMargin = 2;

/// The maximal vacant plus-connected S-cycle around a finite star component.
inline EnvelopeResult surrounding_vacant_scycle(const Configuration& cfg, const CellSet& comp) {
    if (comp.empty()) throw PreconditionError("empty component");
    for (Cell c : comp)
        if (!cfg.occupied(c)) throw PreconditionError("component cell " + to_string(c) + " is not occupied");
    if (connected_component(cfg, comp.front(), AdjacencyKind::Star, CellState::Occupied) != comp)
        throw PreconditionError("cells do not form a full star-connected occupied component");
    const Box bb = comp.bounding_box();
    if (bb.min_col < kEnvelopeMargin || bb.min_row < kEnvelopeMargin || bb.max_col > cfg.width() - 1 - kEnvelopeMargin ||
        bb.max_row > cfg.height() - 1 - kEnvelopeMargin)
        throw PreconditionError("component too close to window boundary");

    const OutermostBoundary boundary = outermost_boundary(comp, AdjacencyKind::Star);
    const DualSkeleton initial = dual_outer_cycle(boundary_vertex_dual_cover(boundary));
    const DualSkeleton maximal = maximize_skeleton(initial);

    EnvelopeResult res{SCycle{maximal.cells(), AdjacencyKind::Plus}, maximal, maximal.skeleton, lambda0(cfg, comp), {}};
    const OutermostBoundary outer = outermost_boundary(res.g_out.cell_set(), AdjacencyKind::Plus);
    if (outer.cycles.size() != 1) throw InternalError("envelope outer boundary is not a single cycle");
    res.outer_boundary = outer.cycles.front();
    res.report = verify_envelope(cfg, comp, res);
    return res;
}

} // namespace perco

#pragma once

// Rectangle crossing events: detection, witness validation, the left-halo
// labelling, and the two constructive procedures that turn "no occupied
// left-right crossing" into an explicit vacant top-down crossing.

#include <array>
#include <optional>
#include <queue>
#include <string>
#include <unordered_map>
#include <vector>

#include "dualization.hpp"
#include "error.hpp"
#include "lattice.hpp"
#include "topology.hpp"

namespace perco {

/// R = [0,m] x [0,n]: cells (0..m-1) x (0..n-1).
struct Rect {
    int m = 1;
    int n = 1;

    bool contains(Cell c) const { return c.col >= 0 && c.col < m && c.row >= 0 && c.row < n; }
    friend bool operator==(const Rect&, const Rect&) = default;
};

enum class Orientation : std::uint8_t { LeftRight, TopDown };

struct CrossingSpec {
    Orientation orientation = Orientation::LeftRight;
    AdjacencyKind kind = AdjacencyKind::Plus;
    CellState state = CellState::Occupied;

    friend bool operator==(const CrossingSpec&, const CrossingSpec&) = default;

    std::string name() const {
        std::string s = orientation == Orientation::LeftRight ? "lr_" : "td_";
        s += kind == AdjacencyKind::Plus ? "plus_" : "star_";
        s += state == CellState::Occupied ? "occupied" : "vacant";
        return s;
    }

    /// The event paired with this one by duality: other orientation, other adjacency, other state.
    CrossingSpec dual() const {
        return {orientation == Orientation::LeftRight ? Orientation::TopDown : Orientation::LeftRight,
                kind == AdjacencyKind::Plus ? AdjacencyKind::Star : AdjacencyKind::Plus, flip(state)};
    }
};

/// All eight events in a fixed order.
inline constexpr std::array<CrossingSpec, 8> kAllSpecs{{
    {Orientation::LeftRight, AdjacencyKind::Plus, CellState::Occupied},
    {Orientation::LeftRight, AdjacencyKind::Plus, CellState::Vacant},
    {Orientation::LeftRight, AdjacencyKind::Star, CellState::Occupied},
    {Orientation::LeftRight, AdjacencyKind::Star, CellState::Vacant},
    {Orientation::TopDown, AdjacencyKind::Plus, CellState::Occupied},
    {Orientation::TopDown, AdjacencyKind::Plus, CellState::Vacant},
    {Orientation::TopDown, AdjacencyKind::Star, CellState::Occupied},
    {Orientation::TopDown, AdjacencyKind::Star, CellState::Vacant},
}};

inline std::size_t spec_index(const CrossingSpec& s) {
    for (std::size_t i = 0; i < kAllSpecs.size(); ++i)
        if (kAllSpecs[i] == s) return i;
    throw InternalError("unknown crossing spec");
}

/// Left-right crossings run from column 0 to column m-1; top-down ones from row n-1 to row 0.
inline bool touches_start(const Rect& r, Orientation o, Cell c) {
    return o == Orientation::LeftRight ? c.col == 0 : c.row == r.n - 1;
}
inline bool touches_end(const Rect& r, Orientation o, Cell c) {
    return o == Orientation::LeftRight ? c.col == r.m - 1 : c.row == 0;
}

struct CrossingWitness {
    std::vector<Cell> cells;
    CrossingSpec spec;
};

/// Raised by the constructions when the occupied crossing they exclude is present.
class CrossingPresent : public PreconditionError {
public:
    CrossingPresent(const std::string& what, CrossingWitness w) : PreconditionError(what), witness_(std::move(w)) {}
    const CrossingWitness& witness() const noexcept { return witness_; }

private:
    CrossingWitness witness_;
};

inline void check_rect_fits(const Configuration& cfg, const Rect& r) {
    if (r.m <= 0 || r.n <= 0) throw PreconditionError("rectangle dimensions must be positive");
    if (r.m > cfg.width() || r.n > cfg.height()) throw PreconditionError("rectangle does not fit the configuration");
}

/// Checks every witness invariant: in-bounds, state, adjacency, distinctness and single side contact.
inline bool validate_witness(const Rect& r, const CrossingWitness& w, const Configuration& cfg) {
    const auto& cells = w.cells;
    if (cells.empty()) return false;
    if (CellSet(cells).size() != cells.size()) return false;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        const Cell c = cells[i];
        if (!r.contains(c) || cfg.state(c) != w.spec.state) return false;
        if (i + 1 < cells.size() && !adjacent(c, cells[i + 1], w.spec.kind)) return false;
        if (i > 0 && touches_start(r, w.spec.orientation, c)) return false;
        if (i + 1 < cells.size() && touches_end(r, w.spec.orientation, c)) return false;
    }
    return touches_start(r, w.spec.orientation, cells.front()) && touches_end(r, w.spec.orientation, cells.back());
}

/// Shortest crossing by multi-source breadth-first search, or nullopt.
///
/// Sources are enqueued in row-major order along the start side and
/// neighbors in the canonical order, so the witness is deterministic.
inline std::optional<CrossingWitness> find_crossing(const Configuration& cfg, const Rect& r, const CrossingSpec& spec) {
    check_rect_fits(cfg, r);
    const auto w = static_cast<std::size_t>(r.m);
    auto idx = [w](Cell c) { return static_cast<std::size_t>(c.row) * w + static_cast<std::size_t>(c.col); };
    constexpr int kUnseen = -2;
    std::vector<int> parent(w * static_cast<std::size_t>(r.n), kUnseen);
    std::queue<Cell> frontier;
    for (int row = 0; row < r.n; ++row)
        for (int col = 0; col < r.m; ++col) {
            const Cell c{col, row};
            if (touches_start(r, spec.orientation, c) && cfg.state(c) == spec.state) {
                parent[idx(c)] = -1;
                frontier.push(c);
            }
        }
    while (!frontier.empty()) {
        const Cell c = frontier.front();
        frontier.pop();
        if (touches_end(r, spec.orientation, c)) {
            std::vector<Cell> path;
            for (int at = static_cast<int>(idx(c)); at >= 0; at = parent[static_cast<std::size_t>(at)])
                path.push_back({at % r.m, at / r.m});
            std::reverse(path.begin(), path.end());
            // Cut at the last start-side cell and the first end-side cell.
            std::size_t first = 0;
            for (std::size_t i = 0; i < path.size(); ++i)
                if (touches_start(r, spec.orientation, path[i])) first = i;
            std::size_t last = first;
            while (!touches_end(r, spec.orientation, path[last])) ++last;
            return CrossingWitness{{path.begin() + static_cast<std::ptrdiff_t>(first),
                                    path.begin() + static_cast<std::ptrdiff_t>(last) + 1},
                                   spec};
        }
        for (const Offset o : neighbor_offsets(spec.kind)) {
            const Cell nb = c.shifted(o.dc, o.dr);
            if (!r.contains(nb) || parent[idx(nb)] != kUnseen || cfg.state(nb) != spec.state) continue;
            parent[idx(nb)] = static_cast<int>(idx(c));
            frontier.push(nb);
        }
    }
    return std::nullopt;
}

enum class Label : std::uint8_t { Unlabeled, Zero, One };

/// Labels over the rectangle plus its halo: columns -2..m, rows -1..n.
class LabelField {
public:
    explicit LabelField(const Rect& r)
        : rect_(r), box_{-2, -1, r.m, r.n},
          labels_(static_cast<std::size_t>(box_.width() * box_.height()), Label::Unlabeled) {}

    Label get(Cell c) const { return box_.contains(c) ? labels_[index(c)] : Label::Unlabeled; }
    void set(Cell c, Label l) {
        if (!box_.contains(c)) throw InternalError("label outside the halo");
        labels_[index(c)] = l;
    }

    CellSet cells_with(Label l) const {
        std::vector<Cell> out;
        for (int row = box_.min_row; row <= box_.max_row; ++row)
            for (int col = box_.min_col; col <= box_.max_col; ++col)
                if (labels_[index({col, row})] == l) out.push_back({col, row});
        return CellSet(std::move(out));
    }

    const Rect& rect() const { return rect_; }
    const Box& box() const { return box_; }

private:
    std::size_t index(Cell c) const {
        return static_cast<std::size_t>(c.row - box_.min_row) * static_cast<std::size_t>(box_.width()) +
               static_cast<std::size_t>(c.col - box_.min_col);
    }

    Rect rect_;
    Box box_;
    std::vector<Label> labels_;
};

/// Halo column J_1..J_n (column -1) and the occupied cells of R connected to it are One;
/// unlabeled cells `kind`-adjacent to a One cell are Zero.
inline LabelField label_from_left(const Configuration& cfg, const Rect& r, AdjacencyKind kind) {
    check_rect_fits(cfg, r);
    LabelField f(r);
    std::vector<Cell> stack;
    for (int row = r.n - 1; row >= 0; --row) {
        f.set({-1, row}, Label::One);
        stack.push_back({-1, row});
    }
    std::vector<Cell> ones = stack;
    while (!stack.empty()) {
        const Cell c = stack.back();
        stack.pop_back();
        for (const Offset o : neighbor_offsets(kind)) {
            const Cell nb = c.shifted(o.dc, o.dr);
            if (!r.contains(nb) || !cfg.occupied(nb) || f.get(nb) == Label::One) continue;
            f.set(nb, Label::One);
            ones.push_back(nb);
            stack.push_back(nb);
        }
    }
    for (Cell c : ones)
        for (const Offset o : neighbor_offsets(kind)) {
            const Cell nb = c.shifted(o.dc, o.dr);
            if (f.get(nb) == Label::Unlabeled) f.set(nb, Label::Zero);
        }
    return f;
}

namespace detail {

inline std::vector<Cell> erase_loops(const std::vector<Cell>& seq) {
    std::vector<Cell> out;
    std::unordered_map<Cell, std::size_t> at;
    for (Cell c : seq) {
        auto it = at.find(c);
        if (it != at.end()) {
            for (std::size_t i = it->second + 1; i < out.size(); ++i) at.erase(out[i]);
            out.resize(it->second + 1);
            continue;
        }
        at.emplace(c, out.size());
        out.push_back(c);
    }
    return out;
}

// Index range [first, last] of `seq`: last element meeting the top line y = n,
// then the first element at or after it meeting the bottom line y = 0.
inline std::pair<std::size_t, std::size_t> top_down_span(const std::vector<Cell>& seq, const Rect& r) {
    std::optional<std::size_t> first;
    for (std::size_t k = 0; k < seq.size(); ++k)
        if (seq[k].row >= r.n - 1) first = k;
    if (!first) throw InternalError("no cell meets the top line");
    for (std::size_t k = *first; k < seq.size(); ++k)
        if (seq[k].row <= 0) return {*first, k};
    throw InternalError("no cell meets the bottom line after the last top contact");
}

inline std::string describe(const std::vector<Cell>& cells) {
    std::string s;
    for (Cell c : cells) s += to_string(c);
    return s;
}

} // namespace detail

/// Vacant plus-connected top-down crossing, built from the envelope of the
/// star-labelled left component. Requires that no occupied star left-right
/// crossing exists.
inline CrossingWitness construct_vacant_plus_td(const Configuration& cfg, const Rect& r) {
    check_rect_fits(cfg, r);
    if (auto w = find_crossing(cfg, r, {Orientation::LeftRight, AdjacencyKind::Star, CellState::Occupied}))
        throw CrossingPresent("an occupied star left-right crossing exists", *w);

    const LabelField labels = label_from_left(cfg, r, AdjacencyKind::Star);
    const CellSet left = labels.cells_with(Label::One);

    // Label One plays "occupied" in a window wide enough for the envelope margin.
    constexpr int dc = 1 + kEnvelopeMargin;
    constexpr int dr = kEnvelopeMargin;
    Configuration window(r.m + dc + kEnvelopeMargin, r.n + 2 * kEnvelopeMargin);
    for (Cell c : left) window = window.with_state(c.shifted(dc, dr), CellState::Occupied);
    const EnvelopeResult env = surrounding_vacant_scycle(window, left.translated(dc, dr));
    if (!env.report.ok()) throw InternalError("envelope of the left component failed verification");

    std::vector<Cell> ring;
    ring.reserve(env.g_out.cells.size());
    for (Cell c : env.g_out.cells) ring.push_back(c.shifted(-dc, -dr));

    // The cells left of x = 0 form one consecutive run, from (-1, n) down to (-1, -1).
    const std::size_t len = ring.size();
    auto halo = [&](std::size_t i) { return ring[i % len].col < 0; };
    std::optional<std::size_t> run_begin, run_end;
    int runs = 0;
    for (std::size_t i = 0; i < len; ++i) {
        if (halo(i) && !halo(i + len - 1)) {
            run_begin = i;
            ++runs;
        }
        if (halo(i) && !halo(i + 1)) run_end = i;
    }
    if (runs != 1) throw InternalError("envelope cells left of the rectangle are not one consecutive run");

    std::vector<Cell> rest;
    for (std::size_t k = (*run_end + 1) % len; k != *run_begin; k = (k + 1) % len) rest.push_back(ring[k]);
    const Cell top_end{-1, r.n};
    const Cell bottom_end{-1, -1};
    const Cell a = ring[*run_end];
    const Cell b = ring[*run_begin];
    if (a == bottom_end && b == top_end)
        std::reverse(rest.begin(), rest.end());
    else if (!(a == top_end && b == bottom_end))
        throw InternalError("left run of the envelope does not end at (-1,n) and (-1,-1)");

    const auto [j1, j2] = detail::top_down_span(rest, r);
    CrossingWitness w{{rest.begin() + static_cast<std::ptrdiff_t>(j1), rest.begin() + static_cast<std::ptrdiff_t>(j2) + 1},
                      {Orientation::TopDown, AdjacencyKind::Plus, CellState::Vacant}};
    if (!validate_witness(r, w, cfg))
        throw InternalError("constructed plus top-down path is not a valid crossing: " + detail::describe(w.cells));
    return w;
}

namespace detail {

// Vertex path of `cyc` from `from` to `to` that avoids `avoid` as its second vertex.
inline std::vector<CornerPoint> arc_between(const Cycle& cyc, CornerPoint from, CornerPoint to, CornerPoint avoid) {
    const auto& v = cyc.vertices();
    const std::size_t n = v.size();
    const auto it_from = std::find(v.begin(), v.end(), from);
    const auto it_to = std::find(v.begin(), v.end(), to);
    if (it_from == v.end() || it_to == v.end()) throw InternalError("arc endpoint not on cycle");
    const auto i = static_cast<std::size_t>(it_from - v.begin());
    const auto j = static_cast<std::size_t>(it_to - v.begin());
    std::vector<CornerPoint> fwd, bwd;
    for (std::size_t k = i;; k = (k + 1) % n) {
        fwd.push_back(v[k]);
        if (k == j) break;
    }
    for (std::size_t k = i;; k = (k + n - 1) % n) {
        bwd.push_back(v[k]);
        if (k == j) break;
    }
    if (fwd.size() > 1 && fwd[1] == avoid) return bwd;
    if (bwd.size() > 1 && bwd[1] == avoid) return fwd;
    throw InternalError("neither arc starts towards the avoided vertex");
}

// Halo path (h_1..h_{n+2}) from (0, n) around the outside of the halo column to (0, 0).
inline std::vector<CornerPoint> halo_path(const Rect& r) {
    std::vector<CornerPoint> q{{0, 2 * r.n}};
    for (int y = 2 * r.n; y >= 0; y -= 2) q.push_back({-2, y});
    q.push_back({0, 0});
    return q;
}

// Checks that the halo path is a subpath of `cyc` and returns the complementary arc.
inline std::vector<CornerPoint> arc_off_halo(const Cycle& cyc, const Rect& r) {
    const auto q = halo_path(r);
    const auto other = arc_between(cyc, q.front(), q.back(), q[1]);
    // The halo arc itself must match exactly.
    const auto& v = cyc.vertices();
    const auto it = std::find(v.begin(), v.end(), q.front());
    const auto i = static_cast<std::size_t>(it - v.begin());
    const std::size_t n = v.size();
    const bool forward = v[(i + 1) % n] == q[1];
    for (std::size_t k = 0; k < q.size(); ++k) {
        const std::size_t at = forward ? (i + k) % n : (i + n - k % n) % n;
        if (v[at] != q[k]) throw InternalError("halo path is not a subpath of the cycle");
    }
    return other;
}

} // namespace detail

/// Vacant star-connected top-down crossing, built by merging the Zero squares
/// along the plus-labelled left component's boundary. Requires that no
/// occupied plus left-right crossing exists.
inline CrossingWitness construct_vacant_star_td(const Configuration& cfg, const Rect& r) {
    check_rect_fits(cfg, r);
    if (auto w = find_crossing(cfg, r, {Orientation::LeftRight, AdjacencyKind::Plus, CellState::Occupied}))
        throw CrossingPresent("an occupied plus left-right crossing exists", *w);

    const LabelField labels = label_from_left(cfg, r, AdjacencyKind::Plus);
    const CellSet left = labels.cells_with(Label::One);
    const OutermostBoundary boundary = outermost_boundary(left, AdjacencyKind::Plus);
    if (boundary.cycles.size() != 1) throw InternalError("plus component with a split outer boundary");

    // Q_I = (g_1..g_b) from (0, n) to (0, 0); A_j is the Zero square across g_j.
    const std::vector<CornerPoint> qi = detail::arc_off_halo(boundary.cycles.front(), r);
    std::vector<GridEdge> g;
    std::vector<Cell> attached;
    for (std::size_t k = 0; k + 1 < qi.size(); ++k) {
        const GridEdge e = GridEdge::make(qi[k], qi[k + 1]);
        const auto [c1, c2] = cells_of_edge(e);
        const bool in1 = left.contains(c1);
        if (in1 == left.contains(c2)) throw InternalError("boundary edge not between the component and its exterior");
        const Cell a = in1 ? c2 : c1;
        if (labels.get(a) != Label::Zero) throw InternalError("square across the boundary is not labelled 0");
        g.push_back(e);
        attached.push_back(a);
    }
    const CellSet attached_set(attached);

    Cycle d = boundary.cycles.front();
    for (std::size_t step = 0;; ++step) {
        if (step > g.size()) throw InternalError("merge iteration did not terminate");
        const EdgeSet on_cycle = d.edge_set();
        std::optional<std::size_t> next;
        for (std::size_t j = 0; j < g.size() && !next; ++j)
            if (on_cycle.contains(g[j])) next = j;
        if (!next) break;
        d = merge_cycle_square(d, attached[*next]);
    }

    const std::vector<CornerPoint> qii = detail::arc_off_halo(d, r);
    std::vector<Cell> z;
    for (std::size_t k = 0; k + 1 < qii.size(); ++k) {
        const auto [c1, c2] = cells_of_edge(GridEdge::make(qii[k], qii[k + 1]));
        const Cell inner = cell_in_interior(d, c1) ? c1 : c2;
        if (!attached_set.contains(inner)) throw InternalError("edge of the final cycle not owned by a merged square");
        z.push_back(inner);
    }

    const auto [k1, k2] = detail::top_down_span(z, r);
    std::vector<Cell> span(z.begin() + static_cast<std::ptrdiff_t>(k1), z.begin() + static_cast<std::ptrdiff_t>(k2) + 1);
    CrossingWitness w{detail::erase_loops(span), {Orientation::TopDown, AdjacencyKind::Star, CellState::Vacant}};
    if (!validate_witness(r, w, cfg))
        throw InternalError("constructed star top-down path is not a valid crossing: " + detail::describe(w.cells));
    return w;
}

struct DualityReport {
    std::array<bool, 8> present{};
    bool plus_occupied_vs_star_vacant = false; ///< exactly one of LR+(O), TD*(V)
    bool star_occupied_vs_plus_vacant = false; ///< exactly one of LR*(O), TD+(V)

    bool event(const CrossingSpec& s) const { return present[spec_index(s)]; }
    bool verdicts_hold() const { return plus_occupied_vs_star_vacant && star_occupied_vs_plus_vacant; }
};

inline DualityReport duality_report(const Configuration& cfg, const Rect& r) {
    check_rect_fits(cfg, r);
    DualityReport rep;
    for (std::size_t i = 0; i < kAllSpecs.size(); ++i) rep.present[i] = find_crossing(cfg, r, kAllSpecs[i]).has_value();
    const auto at = [&](Orientation o, AdjacencyKind k, CellState s) { return rep.event({o, k, s}); };
    rep.plus_occupied_vs_star_vacant = at(Orientation::LeftRight, AdjacencyKind::Plus, CellState::Occupied) !=
                                       at(Orientation::TopDown, AdjacencyKind::Star, CellState::Vacant);
    rep.star_occupied_vs_plus_vacant = at(Orientation::LeftRight, AdjacencyKind::Star, CellState::Occupied) !=
                                       at(Orientation::TopDown, AdjacencyKind::Plus, CellState::Vacant);
    return rep;
}

} // namespace perco

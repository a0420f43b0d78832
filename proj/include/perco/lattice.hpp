#pragma once

// Grid model: cells, doubled coordinates, star/plus adjacency, configurations
// and connected components.
//
// Geometry lives on a single integer lattice of "doubled" coordinates. Cell
// (col, row) covers the corner rectangle [2col, 2col+2] x [2row, 2row+2], so
// cell corners are even-even points and cell centers are odd-odd points.

#include <algorithm>
#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <queue>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "error.hpp"

namespace perco {

/// A point of the doubled-coordinate lattice. Ordered row-major (y, then x).
struct CornerPoint {
    int x = 0;
    int y = 0;

    friend constexpr bool operator==(const CornerPoint&, const CornerPoint&) = default;
    friend constexpr std::strong_ordering operator<=>(const CornerPoint& a, const CornerPoint& b) {
        if (auto c = a.y <=> b.y; c != 0) return c;
        return a.x <=> b.x;
    }

    constexpr bool is_corner() const { return (x & 1) == 0 && (y & 1) == 0; }
    constexpr bool is_center() const { return (x & 1) == 1 && (y & 1) == 1; }
};

/// Two corners are grid-adjacent iff they differ by exactly 2 in exactly one coordinate.
constexpr bool grid_adjacent(CornerPoint a, CornerPoint b) {
    const int dx = a.x > b.x ? a.x - b.x : b.x - a.x;
    const int dy = a.y > b.y ? a.y - b.y : b.y - a.y;
    return (dx == 2 && dy == 0) || (dx == 0 && dy == 2);
}

/// A unit square of the tiling. Ordered row-major.
struct Cell {
    int col = 0;
    int row = 0;

    friend constexpr bool operator==(const Cell&, const Cell&) = default;
    friend constexpr std::strong_ordering operator<=>(const Cell& a, const Cell& b) {
        if (auto c = a.row <=> b.row; c != 0) return c;
        return a.col <=> b.col;
    }

    constexpr CornerPoint center() const { return {2 * col + 1, 2 * row + 1}; }
    constexpr CornerPoint lower_left() const { return {2 * col, 2 * row}; }
    constexpr Cell shifted(int dc, int dr) const { return {col + dc, row + dr}; }

    /// The four corners, counter-clockwise from the lower-left one.
    constexpr std::array<CornerPoint, 4> corners() const {
        return {CornerPoint{2 * col, 2 * row}, CornerPoint{2 * col + 2, 2 * row},
                CornerPoint{2 * col + 2, 2 * row + 2}, CornerPoint{2 * col, 2 * row + 2}};
    }
};

/// Cell whose center is the odd-odd point `p`.
constexpr Cell cell_at_center(CornerPoint p) { return {(p.x - 1) / 2, (p.y - 1) / 2}; }

enum class CellState : std::uint8_t { Vacant = 0, Occupied = 1 };

constexpr CellState flip(CellState s) {
    return s == CellState::Occupied ? CellState::Vacant : CellState::Occupied;
}

enum class AdjacencyKind : std::uint8_t { Star, Plus };

struct Offset {
    int dc;
    int dr;
};

namespace detail {
// E, N, W, S, then NE, NW, SW, SE.
inline constexpr std::array<Offset, 8> kNeighborOffsets{{
    {1, 0}, {0, 1}, {-1, 0}, {0, -1}, {1, 1}, {-1, 1}, {-1, -1}, {1, -1},
}};
} // namespace detail

/// Neighbor offsets in the canonical tie-breaking order.
constexpr std::span<const Offset> neighbor_offsets(AdjacencyKind kind) {
    return kind == AdjacencyKind::Plus ? std::span<const Offset>(detail::kNeighborOffsets.data(), 4)
                                       : std::span<const Offset>(detail::kNeighborOffsets.data(), 8);
}

inline std::vector<Cell> neighbors(Cell c, AdjacencyKind kind) {
    std::vector<Cell> out;
    for (const Offset o : neighbor_offsets(kind)) out.push_back(c.shifted(o.dc, o.dr));
    return out;
}

constexpr bool adjacent(Cell a, Cell b, AdjacencyKind kind) {
    const int dc = a.col > b.col ? a.col - b.col : b.col - a.col;
    const int dr = a.row > b.row ? a.row - b.row : b.row - a.row;
    if (kind == AdjacencyKind::Plus) return dc + dr == 1;
    return std::max(dc, dr) == 1;
}

/// Inclusive cell-index rectangle.
struct Box {
    int min_col = 0;
    int min_row = 0;
    int max_col = -1;
    int max_row = -1;

    constexpr bool contains(Cell c) const {
        return c.col >= min_col && c.col <= max_col && c.row >= min_row && c.row <= max_row;
    }
    constexpr int width() const { return max_col - min_col + 1; }
    constexpr int height() const { return max_row - min_row + 1; }
    constexpr Box expanded(int k) const { return {min_col - k, min_row - k, max_col + k, max_row + k}; }
    constexpr bool empty() const { return max_col < min_col || max_row < min_row; }
};

/// Duplicate-free set of cells kept in row-major order.
class CellSet {
public:
    CellSet() = default;
    explicit CellSet(std::vector<Cell> cells) : cells_(std::move(cells)) {
        std::sort(cells_.begin(), cells_.end());
        cells_.erase(std::unique(cells_.begin(), cells_.end()), cells_.end());
    }
    CellSet(std::initializer_list<Cell> cells) : CellSet(std::vector<Cell>(cells)) {}

    bool contains(Cell c) const { return std::binary_search(cells_.begin(), cells_.end(), c); }

    bool insert(Cell c) {
        auto it = std::lower_bound(cells_.begin(), cells_.end(), c);
        if (it != cells_.end() && *it == c) return false;
        cells_.insert(it, c);
        return true;
    }

    CellSet united(const CellSet& other) const {
        std::vector<Cell> out;
        out.reserve(cells_.size() + other.cells_.size());
        std::set_union(cells_.begin(), cells_.end(), other.cells_.begin(), other.cells_.end(),
                       std::back_inserter(out));
        CellSet s;
        s.cells_ = std::move(out);
        return s;
    }

    CellSet translated(int dc, int dr) const {
        CellSet s;
        s.cells_.reserve(cells_.size());
        for (Cell c : cells_) s.cells_.push_back(c.shifted(dc, dr));
        return s; // translation preserves row-major order
    }

    std::size_t size() const { return cells_.size(); }
    bool empty() const { return cells_.empty(); }
    const Cell& front() const { return cells_.front(); }
    auto begin() const { return cells_.begin(); }
    auto end() const { return cells_.end(); }
    const std::vector<Cell>& cells() const { return cells_; }

    Box bounding_box() const {
        if (cells_.empty()) return {};
        Box b{cells_.front().col, cells_.front().row, cells_.front().col, cells_.back().row};
        for (Cell c : cells_) {
            b.min_col = std::min(b.min_col, c.col);
            b.max_col = std::max(b.max_col, c.col);
        }
        return b;
    }

    friend bool operator==(const CellSet&, const CellSet&) = default;

private:
    std::vector<Cell> cells_;
};

/// Finite m x n window of cell states; everything outside it is Vacant.
class Configuration {
public:
    Configuration(int width, int height, CellState fill = CellState::Vacant)
        : width_(width), height_(height) {
        if (width <= 0 || height <= 0) throw PreconditionError("configuration dimensions must be positive");
        states_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height),
                       static_cast<std::uint8_t>(fill));
    }

    /// `states` is row-major with row 0 first.
    Configuration(int width, int height, std::vector<CellState> states) : Configuration(width, height) {
        if (states.size() != states_.size()) throw PreconditionError("state vector size does not match dimensions");
        for (std::size_t i = 0; i < states.size(); ++i) states_[i] = static_cast<std::uint8_t>(states[i]);
    }

    /// Occupancy from the low `width*height` bits of `bits`; bit i is cell (i % width, i / width).
    static Configuration from_bits(int width, int height, std::uint64_t bits) {
        Configuration cfg(width, height);
        for (std::size_t i = 0; i < cfg.states_.size(); ++i) cfg.states_[i] = static_cast<std::uint8_t>((bits >> i) & 1U);
        return cfg;
    }

    int width() const { return width_; }
    int height() const { return height_; }
    Box window() const { return {0, 0, width_ - 1, height_ - 1}; }

    bool in_bounds(Cell c) const { return c.col >= 0 && c.col < width_ && c.row >= 0 && c.row < height_; }

    CellState state(Cell c) const {
        if (!in_bounds(c)) return CellState::Vacant;
        return static_cast<CellState>(states_[index(c)]);
    }
    bool occupied(Cell c) const { return state(c) == CellState::Occupied; }

    Configuration with_state(Cell c, CellState s) const {
        if (!in_bounds(c)) throw PreconditionError("cell outside the configuration window");
        Configuration out = *this;
        out.states_[index(c)] = static_cast<std::uint8_t>(s);
        return out;
    }

    CellSet occupied_cells() const {
        std::vector<Cell> out;
        for (int r = 0; r < height_; ++r)
            for (int c = 0; c < width_; ++c)
                if (states_[index({c, r})] != 0) out.push_back({c, r});
        return CellSet(std::move(out));
    }

    friend bool operator==(const Configuration&, const Configuration&) = default;

private:
    std::size_t index(Cell c) const {
        return static_cast<std::size_t>(c.row) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(c.col);
    }

    int width_;
    int height_;
    std::vector<std::uint8_t> states_;
};

/// Parses '#' (occupied) / '.' (vacant) rows. The last text line is row 0.
inline Configuration parse_configuration(std::string_view text) {
    std::vector<std::string_view> lines;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t nl = text.find('\n', pos);
        if (nl == std::string_view::npos) {
            if (pos < text.size()) lines.push_back(text.substr(pos));
            break;
        }
        lines.push_back(text.substr(pos, nl - pos));
        pos = nl + 1;
    }
    for (auto& l : lines)
        if (!l.empty() && l.back() == '\r') l.remove_suffix(1);
    if (lines.empty() || lines.front().empty()) throw ParseError(1, "empty grid");

    const std::size_t width = lines.front().size();
    const int height = static_cast<int>(lines.size());
    std::vector<CellState> states(width * lines.size());
    for (int i = 0; i < height; ++i) {
        const auto line = lines[static_cast<std::size_t>(i)];
        if (line.size() != width)
            throw ParseError(i + 1, "ragged row: expected " + std::to_string(width) + " columns, got " +
                                        std::to_string(line.size()));
        const int row = height - 1 - i;
        for (std::size_t col = 0; col < width; ++col) {
            const char ch = line[col];
            if (ch != '#' && ch != '.')
                throw ParseError(i + 1, std::string("illegal character '") + ch + "' at column " +
                                            std::to_string(col + 1));
            states[static_cast<std::size_t>(row) * width + col] = ch == '#' ? CellState::Occupied : CellState::Vacant;
        }
    }
    return Configuration(static_cast<int>(width), height, std::move(states));
}

/// Inverse of parse_configuration; every row is newline-terminated.
inline std::string serialize_configuration(const Configuration& cfg) {
    std::string out;
    out.reserve(static_cast<std::size_t>((cfg.width() + 1) * cfg.height()));
    for (int row = cfg.height() - 1; row >= 0; --row) {
        for (int col = 0; col < cfg.width(); ++col) out.push_back(cfg.occupied({col, row}) ? '#' : '.');
        out.push_back('\n');
    }
    return out;
}

inline Configuration complement(const Configuration& cfg) {
    std::vector<CellState> states;
    states.reserve(static_cast<std::size_t>(cfg.width() * cfg.height()));
    for (int r = 0; r < cfg.height(); ++r)
        for (int c = 0; c < cfg.width(); ++c) states.push_back(flip(cfg.state({c, r})));
    return Configuration(cfg.width(), cfg.height(), std::move(states));
}

/// Quarter turn counter-clockwise: cell (c, r) moves to (height-1-r, c).
inline Configuration rotate_quarter_turn(const Configuration& cfg) {
    const int w = cfg.height();
    std::vector<CellState> states(static_cast<std::size_t>(cfg.width() * cfg.height()));
    for (int r = 0; r < cfg.height(); ++r)
        for (int c = 0; c < cfg.width(); ++c) {
            const Cell to{cfg.height() - 1 - r, c};
            states[static_cast<std::size_t>(to.row * w + to.col)] = cfg.state({c, r});
        }
    return Configuration(w, cfg.width(), std::move(states));
}

constexpr Cell rotate_quarter_turn(Cell c, int height) { return {height - 1 - c.row, c.col}; }

/// Copies `cfg` into a larger width x height window shifted by (dc, dr).
inline Configuration embed(const Configuration& cfg, int width, int height, int dc, int dr) {
    std::vector<CellState> states(static_cast<std::size_t>(width) * static_cast<std::size_t>(height),
                                  CellState::Vacant);
    for (int r = 0; r < cfg.height(); ++r)
        for (int c = 0; c < cfg.width(); ++c) {
            const Cell to{c + dc, r + dr};
            if (to.col < 0 || to.col >= width || to.row < 0 || to.row >= height) {
                if (cfg.occupied({c, r})) throw PreconditionError("embedding drops an occupied cell");
                continue;
            }
            states[static_cast<std::size_t>(to.row) * static_cast<std::size_t>(width) +
                   static_cast<std::size_t>(to.col)] = cfg.state({c, r});
        }
    return Configuration(width, height, std::move(states));
}

/// Maximal set of `state` cells reachable from `seed` through `state` cells.
///
/// Traversal is confined to `limit`, which defaults to the window grown by one
/// cell; that ring is enough for a vacant component to reach the implicit
/// exterior.
inline CellSet connected_component(const Configuration& cfg, Cell seed, AdjacencyKind kind, CellState state,
                                   std::optional<Box> limit = std::nullopt) {
    if (cfg.state(seed) != state) throw PreconditionError("seed cell does not have the requested state");
    const Box box = limit.value_or(cfg.window().expanded(1));
    if (!box.contains(seed)) throw PreconditionError("seed cell outside the traversal box");

    const auto w = static_cast<std::size_t>(box.width());
    std::vector<std::uint8_t> seen(w * static_cast<std::size_t>(box.height()), 0);
    auto slot = [&](Cell c) -> std::uint8_t& {
        return seen[static_cast<std::size_t>(c.row - box.min_row) * w + static_cast<std::size_t>(c.col - box.min_col)];
    };

    std::vector<Cell> out;
    std::queue<Cell> frontier;
    slot(seed) = 1;
    frontier.push(seed);
    while (!frontier.empty()) {
        const Cell c = frontier.front();
        frontier.pop();
        out.push_back(c);
        for (const Offset o : neighbor_offsets(kind)) {
            const Cell nb = c.shifted(o.dc, o.dr);
            if (!box.contains(nb) || slot(nb) || cfg.state(nb) != state) continue;
            slot(nb) = 1;
            frontier.push(nb);
        }
    }
    return CellSet(std::move(out));
}

/// True iff `cells` is non-empty and connected under `kind` adjacency.
inline bool is_connected(const CellSet& cells, AdjacencyKind kind) {
    if (cells.empty()) return false;
    std::vector<std::uint8_t> seen(cells.size(), 0);
    std::vector<std::size_t> stack{0};
    seen[0] = 1;
    std::size_t reached = 1;
    const auto& v = cells.cells();
    while (!stack.empty()) {
        const Cell c = v[stack.back()];
        stack.pop_back();
        for (const Offset o : neighbor_offsets(kind)) {
            const Cell nb = c.shifted(o.dc, o.dr);
            auto it = std::lower_bound(v.begin(), v.end(), nb);
            if (it == v.end() || *it != nb) continue;
            const auto i = static_cast<std::size_t>(it - v.begin());
            if (seen[i]) continue;
            seen[i] = 1;
            ++reached;
            stack.push_back(i);
        }
    }
    return reached == cells.size();
}

} // namespace perco

template <>
struct std::hash<perco::CornerPoint> {
    std::size_t operator()(const perco::CornerPoint& p) const noexcept {
        return std::hash<std::uint64_t>{}((static_cast<std::uint64_t>(static_cast<std::uint32_t>(p.x)) << 32) |
                                          static_cast<std::uint32_t>(p.y));
    }
};

template <>
struct std::hash<perco::Cell> {
    std::size_t operator()(const perco::Cell& c) const noexcept {
        return std::hash<std::uint64_t>{}((static_cast<std::uint64_t>(static_cast<std::uint32_t>(c.col)) << 32) |
                                          static_cast<std::uint32_t>(c.row));
    }
};

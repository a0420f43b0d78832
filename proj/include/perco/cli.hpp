#pragma once

// perco-dual command implementations. Everything writes to the given streams
// so the commands can be driven in-process.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <iterator>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "crossings.hpp"
#include "dualization.hpp"
#include "error.hpp"
#include "lattice.hpp"
#include "oracle.hpp"
#include "topology.hpp"

namespace perco::cli {

using json = nlohmann::ordered_json;

enum ExitCode : int { kOk = 0, kInputError = 1, kPropertyViolation = 2, kWitnessAbsent = 3 };

struct RenderSpec {
    int cell_px = 24;
    bool cells = true;    ///< envelope cells, dotted
    bool boundary = true; ///< outer boundary of the envelope
    bool skeleton = true; ///< envelope skeleton, dashed
    bool witness = false; ///< crossing witness, hatched
};

struct Scene {
    Configuration cfg;
    std::optional<EnvelopeResult> envelope;
    std::optional<CrossingWitness> witness;
};

inline json cell_json(Cell c) { return json::array({c.col, c.row}); }

inline json cells_json(const std::vector<Cell>& cells) {
    json a = json::array();
    for (Cell c : cells) a.push_back(cell_json(c));
    return a;
}

inline json doubled_json(const Cycle& cyc) {
    json v = json::array();
    for (CornerPoint p : cyc.vertices()) v.push_back(json::array({p.x, p.y}));
    return json{{"coordinate_system", "doubled"}, {"vertices", v}};
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read " + path);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    out << text;
    if (!out) throw Error("write failed: " + path);
}

inline Rect parse_rect(const std::string& s) {
    const auto x = s.find('x');
    try {
        std::size_t used_m = 0, used_n = 0;
        if (x == std::string::npos) throw std::invalid_argument("no x");
        const int m = std::stoi(s.substr(0, x), &used_m);
        const int n = std::stoi(s.substr(x + 1), &used_n);
        if (used_m != x || used_n != s.size() - x - 1 || m <= 0 || n <= 0) throw std::invalid_argument("range");
        return {m, n};
    } catch (const std::logic_error&) {
        throw PreconditionError("--rect expects MxN with positive integers, got '" + s + "'");
    }
}

inline Cell parse_cell(const std::string& s) {
    const auto comma = s.find(',');
    try {
        std::size_t used_c = 0, used_r = 0;
        if (comma == std::string::npos) throw std::invalid_argument("no comma");
        const int c = std::stoi(s.substr(0, comma), &used_c);
        const int r = std::stoi(s.substr(comma + 1), &used_r);
        if (used_c != comma || used_r != s.size() - comma - 1) throw std::invalid_argument("junk");
        return {c, r};
    } catch (const std::logic_error&) {
        throw PreconditionError("--cell expects C,R, got '" + s + "'");
    }
}

inline RenderSpec parse_layers(const std::string& s) {
    RenderSpec spec;
    spec.cells = spec.boundary = spec.skeleton = spec.witness = false;
    std::stringstream in(s);
    std::string tok;
    while (std::getline(in, tok, ',')) {
        if (tok.empty()) continue;
        if (tok == "cells")
            spec.cells = true;
        else if (tok == "boundary")
            spec.boundary = true;
        else if (tok == "skeleton")
            spec.skeleton = true;
        else if (tok == "witness")
            spec.witness = true;
        else
            throw PreconditionError("unknown layer '" + tok + "' (expected cells, boundary, skeleton, witness)");
    }
    return spec;
}

/// Deterministic SVG: integer pixel coordinates, y axis pointing up.
inline std::string render_svg(const Scene& scene, const RenderSpec& spec) {
    if (spec.cell_px <= 0 || spec.cell_px % 2 != 0) throw PreconditionError("cell pixel size must be positive and even");
    const int half = spec.cell_px / 2;
    const int pad = spec.cell_px;
    const int m = scene.cfg.width();
    const int n = scene.cfg.height();
    const int w = m * spec.cell_px + 2 * pad;
    const int h = n * spec.cell_px + 2 * pad;
    auto px = [&](int x) { return pad + x * half; };
    auto py = [&](int y) { return pad + (2 * n - y) * half; };
    auto rect = [&](std::ostringstream& o, Cell c, int inset, const std::string& style) {
        o << "  <rect x=\"" << px(2 * c.col) + inset << "\" y=\"" << py(2 * c.row + 2) + inset << "\" width=\""
          << spec.cell_px - 2 * inset << "\" height=\"" << spec.cell_px - 2 * inset << "\" " << style << "/>\n";
    };
    auto polygon = [&](std::ostringstream& o, const Cycle& cyc, const std::string& style) {
        o << "  <polygon points=\"";
        bool first = true;
        for (CornerPoint p : cyc.vertices()) {
            o << (first ? "" : " ") << px(p.x) << "," << py(p.y);
            first = false;
        }
        o << "\" " << style << "/>\n";
    };

    std::ostringstream o;
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h << "\" viewBox=\"0 0 " << w
      << " " << h << "\">\n";
    o << "  <defs>\n"
         "    <pattern id=\"hatch\" patternUnits=\"userSpaceOnUse\" width=\"6\" height=\"6\">\n"
         "      <path d=\"M0,6 L6,0\" stroke=\"#b03a2e\" stroke-width=\"1\"/>\n"
         "    </pattern>\n"
         "  </defs>\n";
    o << "  <rect x=\"0\" y=\"0\" width=\"" << w << "\" height=\"" << h << "\" fill=\"#ffffff\"/>\n";
    o << "  <g id=\"cells\">\n";
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < m; ++c)
            rect(o, {c, r}, 0,
                 scene.cfg.occupied({c, r}) ? "fill=\"#555555\" stroke=\"#cccccc\" stroke-width=\"1\""
                                            : "fill=\"#ffffff\" stroke=\"#cccccc\" stroke-width=\"1\"");
    o << "  </g>\n";
    if (scene.envelope && spec.cells) {
        o << "  <g id=\"envelope\">\n";
        for (Cell c : scene.envelope->g_out.cells)
            rect(o, c, 2, "fill=\"none\" stroke=\"#000000\" stroke-width=\"1\" stroke-dasharray=\"2,2\"");
        o << "  </g>\n";
    }
    if (scene.envelope && spec.boundary) {
        o << "  <g id=\"boundary\">\n";
        polygon(o, scene.envelope->outer_boundary, "fill=\"none\" stroke=\"#000000\" stroke-width=\"2\"");
        o << "  </g>\n";
    }
    if (scene.envelope && spec.skeleton) {
        o << "  <g id=\"skeleton\">\n";
        polygon(o, scene.envelope->skeleton.skeleton,
                "fill=\"none\" stroke=\"#1f4e9c\" stroke-width=\"2\" stroke-dasharray=\"6,4\"");
        o << "  </g>\n";
    }
    if (scene.witness && spec.witness) {
        o << "  <g id=\"witness\">\n";
        for (Cell c : scene.witness->cells) rect(o, c, 0, "fill=\"url(#hatch)\" stroke=\"#b03a2e\" stroke-width=\"1\"");
        o << "  </g>\n";
    }
    o << "</svg>\n";
    return o.str();
}

inline json envelope_json(const EnvelopeResult& env, Cell seed, const CellSet& comp) {
    json checks = json::array();
    for (const auto& c : env.report.checks) checks.push_back({{"name", c.name}, {"passed", c.passed}, {"details", c.details}});
    return json{{"command", "envelope"},
                {"seed", cell_json(seed)},
                {"component", cells_json(comp.cells())},
                {"g_out", cells_json(env.g_out.cells)},
                {"skeleton", doubled_json(env.skeleton.skeleton)},
                {"outer_boundary", doubled_json(env.outer_boundary)},
                {"lambda0", cells_json(env.lambda0.cells())},
                {"report", {{"ok", env.report.ok()}, {"checks", checks}}}};
}

namespace detail {

struct SpecFlags {
    bool lr = false, td = false, plus = false, star = false, occupied = false, vacant = false;

    void attach(CLI::App* cmd) {
        cmd->add_flag("--lr", lr, "left-right crossing");
        cmd->add_flag("--td", td, "top-down crossing");
        cmd->add_flag("--plus", plus, "plus (edge) adjacency");
        cmd->add_flag("--star", star, "star (edge or corner) adjacency");
        cmd->add_flag("--occupied", occupied, "occupied cells");
        cmd->add_flag("--vacant", vacant, "vacant cells");
    }

    bool any() const { return lr || td || plus || star || occupied || vacant; }

    CrossingSpec resolve() const {
        if (lr == td) throw PreconditionError("choose exactly one of --lr, --td");
        if (plus == star) throw PreconditionError("choose exactly one of --plus, --star");
        if (occupied == vacant) throw PreconditionError("choose exactly one of --occupied, --vacant");
        return {lr ? Orientation::LeftRight : Orientation::TopDown, plus ? AdjacencyKind::Plus : AdjacencyKind::Star,
                occupied ? CellState::Occupied : CellState::Vacant};
    }
};

struct Options {
    std::string grid;
    std::string rect;
    std::string cell;
    std::string svg;
    std::string layers = "cells,boundary,skeleton";
    double p = 0.5;
    long long trials = 1000;
    unsigned long long seed = 1;
    int workers = 1;
    SpecFlags spec;
};

inline Rect rect_for(const Options& o, const Configuration& cfg) {
    if (o.rect.empty()) return {cfg.width(), cfg.height()};
    const Rect r = parse_rect(o.rect);
    check_rect_fits(cfg, r);
    return r;
}

inline void emit(std::ostream& out, const json& j) { out << j.dump(2) << "\n"; }

inline json event_flags(const DualityReport& rep) {
    json j = json::object();
    for (std::size_t k = 0; k < kAllSpecs.size(); ++k) j[kAllSpecs[k].name()] = rep.present[k];
    return j;
}

inline int cmd_check(const Options& o, std::ostream& out) {
    const Configuration cfg = parse_configuration(read_file(o.grid));
    const Rect r = rect_for(o, cfg);
    const DualityReport rep = duality_report(cfg, r);
    json j{{"command", "check"}, {"rect", json::array({r.m, r.n})}};
    const json flags = event_flags(rep);
    for (const auto& [k, v] : flags.items()) j[k] = v;
    j["verdicts"] = {{"lr_plus_occupied_xor_td_star_vacant", rep.plus_occupied_vs_star_vacant},
                     {"lr_star_occupied_xor_td_plus_vacant", rep.star_occupied_vs_plus_vacant}};
    j["ok"] = rep.verdicts_hold();
    emit(out, j);
    return rep.verdicts_hold() ? kOk : kPropertyViolation;
}

// Constructive procedure when it applies, else the detector.
inline std::pair<std::optional<CrossingWitness>, std::string> witness_for(const Configuration& cfg, const Rect& r,
                                                                         const CrossingSpec& spec) {
    const CrossingSpec plus_td{Orientation::TopDown, AdjacencyKind::Plus, CellState::Vacant};
    const CrossingSpec star_td{Orientation::TopDown, AdjacencyKind::Star, CellState::Vacant};
    if (spec == plus_td && !find_crossing(cfg, r, plus_td.dual()))
        return {construct_vacant_plus_td(cfg, r), "construct_vacant_plus_td"};
    if (spec == star_td && !find_crossing(cfg, r, star_td.dual()))
        return {construct_vacant_star_td(cfg, r), "construct_vacant_star_td"};
    return {find_crossing(cfg, r, spec), "find_crossing"};
}

inline int cmd_witness(const Options& o, std::ostream& out) {
    const Configuration cfg = parse_configuration(read_file(o.grid));
    const Rect r = rect_for(o, cfg);
    const CrossingSpec spec = o.spec.resolve();
    const auto [w, method] = witness_for(cfg, r, spec);
    json j{{"command", "witness"}, {"rect", json::array({r.m, r.n})}, {"spec", spec.name()}, {"method", method}};
    j["witness"] = w ? cells_json(w->cells) : json(nullptr);
    emit(out, j);
    return w ? kOk : kWitnessAbsent;
}

inline Cell seed_cell(const Options& o, const Configuration& cfg) {
    if (!o.cell.empty()) {
        const Cell c = parse_cell(o.cell);
        if (!cfg.in_bounds(c)) throw PreconditionError("seed cell " + to_string(c) + " lies outside the grid");
        if (!cfg.occupied(c)) throw PreconditionError("seed cell " + to_string(c) + " is vacant");
        return c;
    }
    const CellSet occ = cfg.occupied_cells();
    if (occ.empty()) throw PreconditionError("grid has no occupied cell to seed the envelope");
    return occ.front();
}

inline EnvelopeResult envelope_for(const Configuration& cfg, Cell seed) {
    const CellSet comp = connected_component(cfg, seed, AdjacencyKind::Star, CellState::Occupied);
    return surrounding_vacant_scycle(cfg, comp);
}

inline int cmd_envelope(const Options& o, std::ostream& out) {
    const Configuration cfg = parse_configuration(read_file(o.grid));
    const Cell seed = seed_cell(o, cfg);
    const CellSet comp = connected_component(cfg, seed, AdjacencyKind::Star, CellState::Occupied);
    const EnvelopeResult env = surrounding_vacant_scycle(cfg, comp);
    emit(out, envelope_json(env, seed, comp));
    if (!o.svg.empty()) write_file(o.svg, render_svg({cfg, env, std::nullopt}, RenderSpec{}));
    return env.report.ok() ? kOk : kPropertyViolation;
}

inline int cmd_enumerate(const Options& o, std::ostream& out) {
    if (o.rect.empty()) throw PreconditionError("enumerate needs --rect MxN");
    const Rect r = parse_rect(o.rect);
    const EventTally t = tally_events(r.m, r.n, o.workers);
    json counts = json::object();
    for (std::size_t k = 0; k < kAllSpecs.size(); ++k) counts[kAllSpecs[k].name()] = t.counts[k];
    json pairs = json::array();
    for (std::size_t k = 0; k < 4; ++k) {
        const CrossingSpec& a = kAllSpecs[k];
        pairs.push_back({{"event", a.name()},
                         {"dual", a.dual().name()},
                         {"sum", t.counts[k] + t.counts[spec_index(a.dual())]}});
    }
    json examples = json::array();
    for (std::size_t i = 0; i < t.violations.size() && i < 10; ++i)
        examples.push_back({{"index", t.violations[i].index}, {"description", t.violations[i].description}});
    emit(out, json{{"command", "enumerate"},
                   {"rect", json::array({r.m, r.n})},
                   {"configurations", t.configurations},
                   {"counts", counts},
                   {"pairs", pairs},
                   {"violations", t.violations.size()},
                   {"violation_examples", examples}});
    return t.violations.empty() ? kOk : kPropertyViolation;
}

inline int cmd_mc(const Options& o, std::ostream& out) {
    if (o.rect.empty()) throw PreconditionError("mc needs --rect MxN");
    const Rect r = parse_rect(o.rect);
    if (o.trials < 1) throw PreconditionError("--trials must be at least 1");
    if (!(o.p >= 0.0 && o.p <= 1.0)) throw PreconditionError("--p must lie in [0, 1]");
    const auto trials = static_cast<std::uint64_t>(o.trials);
    std::vector<std::array<std::uint64_t, 8>> parts(static_cast<std::size_t>(std::max(1, o.workers)));
    std::vector<std::uint64_t> xor_failures(parts.size(), 0);
    perco::detail::run_sharded(trials, o.workers, [&](std::uint64_t b, std::uint64_t e, std::size_t s) {
        for (std::uint64_t t = b; t < e; ++t) {
            const Configuration cfg = random_config(r.m, r.n, o.p, derive_seed(o.seed, t));
            const DualityReport rep = duality_report(cfg, r);
            for (std::size_t k = 0; k < 8; ++k) parts[s][k] += rep.present[k] ? 1 : 0;
            if (!rep.verdicts_hold()) ++xor_failures[s];
        }
    });
    std::array<std::uint64_t, 8> counts{};
    std::uint64_t failures = 0;
    for (std::size_t s = 0; s < parts.size(); ++s) {
        for (std::size_t k = 0; k < 8; ++k) counts[k] += parts[s][k];
        failures += xor_failures[s];
    }
    const double denom = static_cast<double>(trials);
    json jc = json::object(), je = json::object();
    for (std::size_t k = 0; k < 8; ++k) {
        jc[kAllSpecs[k].name()] = counts[k];
        je[kAllSpecs[k].name()] = static_cast<double>(counts[k]) / denom;
    }
    json pairs = json::array();
    for (std::size_t k = 0; k < 4; ++k) {
        const CrossingSpec& a = kAllSpecs[k];
        const std::size_t d = spec_index(a.dual());
        pairs.push_back({{"event", a.name()}, {"dual", a.dual().name()}, {"sum", static_cast<double>(counts[k] + counts[d]) / denom}});
    }
    emit(out, json{{"command", "mc"},
                   {"rect", json::array({r.m, r.n})},
                   {"p", o.p},
                   {"trials", trials},
                   {"seed", o.seed},
                   {"generator", "mt19937_64, per-trial seed splitmix64(splitmix64(seed) ^ trial)"},
                   {"counts", jc},
                   {"estimates", je},
                   {"pairs", pairs},
                   {"exclusivity_failures", failures}});
    return failures == 0 ? kOk : kPropertyViolation;
}

inline int cmd_render(const Options& o, std::ostream& out) {
    const Configuration cfg = parse_configuration(read_file(o.grid));
    RenderSpec rs = parse_layers(o.layers);
    Scene scene{cfg, std::nullopt, std::nullopt};
    if ((rs.cells || rs.boundary || rs.skeleton) && !cfg.occupied_cells().empty())
        scene.envelope = envelope_for(cfg, seed_cell(o, cfg));
    if (rs.witness) {
        const CrossingSpec spec =
            o.spec.any() ? o.spec.resolve() : CrossingSpec{Orientation::TopDown, AdjacencyKind::Plus, CellState::Vacant};
        scene.witness = witness_for(cfg, rect_for(o, cfg), spec).first;
    }
    const std::string svg = render_svg(scene, rs);
    if (o.svg.empty())
        out << svg;
    else
        write_file(o.svg, svg);
    return kOk;
}

} // namespace detail

/// Runs one perco-dual invocation; `args` excludes the program name.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Site percolation duality on the square tiling."};
    app.name("perco-dual");
    app.require_subcommand(1);
    app.footer("Grid files: one text line per row, '#' occupied, '.' vacant, last line is row 0.\n"
               "Enumeration cap: m*n <= " + std::to_string(kEnumerationCap) +
               " cells (PERCO_ENUM_CAP overrides). Exhaustive library checks cap m*n at " +
               std::to_string(kExhaustiveCap) + ".\n"
               "Exit codes: 0 ok, 1 input error, 2 property violation, 3 witness absent.");

    detail::Options o;
    auto grid_opt = [&](CLI::App* c) { c->add_option("--grid", o.grid, "grid file")->required(); };
    auto rect_opt = [&](CLI::App* c, bool required) {
        auto* opt = c->add_option("--rect", o.rect, "rectangle MxN (default: whole grid)");
        if (required) opt->required();
    };
    auto workers_opt = [&](CLI::App* c) { c->add_option("--workers", o.workers, "worker threads")->check(CLI::Range(1, 256)); };

    auto* check = app.add_subcommand("check", "evaluate all eight crossing events and both duality verdicts");
    grid_opt(check);
    rect_opt(check, false);

    auto* witness = app.add_subcommand("witness", "print a crossing witness for one event");
    grid_opt(witness);
    rect_opt(witness, false);
    o.spec.attach(witness);

    auto* envelope = app.add_subcommand("envelope", "surrounding vacant plus S-cycle of an occupied star component");
    grid_opt(envelope);
    envelope->add_option("--cell", o.cell, "seed cell C,R (default: first occupied cell in row-major order)");
    envelope->add_option("--svg", o.svg, "also write an SVG drawing");

    auto* enumerate = app.add_subcommand("enumerate", "count every event over all MxN configurations");
    rect_opt(enumerate, true);
    workers_opt(enumerate);

    auto* mc = app.add_subcommand("mc", "Monte Carlo estimates of the eight event probabilities");
    rect_opt(mc, true);
    mc->add_option("--p", o.p, "occupation probability")->check(CLI::Range(0.0, 1.0));
    mc->add_option("--trials", o.trials, "number of samples")->check(CLI::PositiveNumber);
    mc->add_option("--seed", o.seed, "64-bit seed");
    workers_opt(mc);

    auto* render = app.add_subcommand("render", "draw a grid with its envelope and/or a witness as SVG");
    grid_opt(render);
    rect_opt(render, false);
    render->add_option("--cell", o.cell, "envelope seed cell C,R");
    render->add_option("--layers", o.layers, "comma list of cells,boundary,skeleton,witness");
    render->add_option("--svg", o.svg, "output path (default: stdout)");
    o.spec.attach(render);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kInputError;
    }

    try {
        if (*check) return detail::cmd_check(o, out);
        if (*witness) return detail::cmd_witness(o, out);
        if (*envelope) return detail::cmd_envelope(o, out);
        if (*enumerate) return detail::cmd_enumerate(o, out);
        if (*mc) return detail::cmd_mc(o, out);
        if (*render) return detail::cmd_render(o, out);
    } catch (const InternalError& e) {
        err << "perco-dual: internal error: " << e.what() << "\n";
        return kPropertyViolation;
    } catch (const Error& e) {
        err << "perco-dual: " << e.what() << "\n";
        return kInputError;
    }
    return kInputError;
}

} // namespace perco::cli

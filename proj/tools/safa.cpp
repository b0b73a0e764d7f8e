// safa: the command-line surface of the toolkit.
//
// Subcommands compose the pipeline
//   reduce-pcp -> build-automaton -> check / compile-gifs -> render / stats
// and demo-undecidability runs the whole chain, tying a correspondence
// question about word pairs to a topological verdict about the compiled
// attractor.
//
// Exit codes: 0 = Yes, 1 = No, 3 = Unknown for verdict-producing commands;
// 2 = usage or I/O errors; file-only commands exit 0 on success.

#include "safa/gifs.hpp"
#include "safa/json_io.hpp"
#include "safa/mta.hpp"
#include "safa/pcp.hpp"
#include "safa/raster.hpp"
#include "safa/reductions.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace safa;

namespace {

int exit_code(Verdict3::Truth t) {
    switch (t) {
        case Verdict3::Truth::Yes: return 0;
        case Verdict3::Truth::No: return 1;
        default: return 3;
    }
}

struct Stage {
    std::string name;
    std::string output;
    double wall_ms = 0.0;
};

struct VerdictRecord {
    std::string query;
    std::string state;
    Verdict3 verdict;
    std::string claim;
};

struct PipelineReport {
    std::vector<Stage> stages;
    std::vector<VerdictRecord> verdicts;
    std::vector<std::string> notes;
    Bounds bounds;

    json to_json() const {
        json j;
        j["bounds"] = {{"max_prefix_len", bounds.max_prefix_len},
                       {"max_ext_len", bounds.max_ext_len},
                       {"overhang_cap", bounds.overhang_cap},
                       {"belief_budget", bounds.belief_budget}};
        json st = json::array();
        for (const auto& s : stages) {
            json e;
            e["name"] = s.name;
            if (!s.output.empty()) e["output"] = s.output;
            e["wall_ms"] = s.wall_ms;
            st.push_back(e);
        }
        j["stages"] = st;
        json vs = json::array();
        for (const auto& v : verdicts) {
            json e;
            e["query"] = v.query;
            e["state"] = v.state;
            e["value"] = to_string(v.verdict.value);
            if (v.verdict.witness) e["witness"] = v.verdict.witness->str();
            if (v.verdict.certificate) e["certificate"] = *v.verdict.certificate;
            if (!v.claim.empty()) e["claim"] = v.claim;
            vs.push_back(e);
        }
        j["verdicts"] = vs;
        j["notes"] = notes;
        return j;
    }

    void print(std::ostream& os) const {
        for (const auto& s : stages) {
            os << "stage " << s.name;
            if (!s.output.empty()) os << " -> " << s.output;
            os << "  (" << s.wall_ms << " ms)\n";
        }
        for (const auto& v : verdicts) {
            os << v.query << " @ " << v.state << ": " << to_string(v.verdict.value);
            if (v.verdict.witness) os << "  witness " << v.verdict.witness->str();
            if (v.verdict.certificate) os << "  certificate " << *v.verdict.certificate;
            os << "\n";
            if (!v.claim.empty()) os << "  claim: " << v.claim << "\n";
        }
        for (const auto& n : notes) os << "note: " << n << "\n";
    }
};

class Timer {
public:
    Timer() : start_(std::chrono::steady_clock::now()) {}
    double ms() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_)
            .count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

Word parse_word(const AlphabetPtr& alphabet, const std::string& text) {
    bool single = true;
    for (const auto& t : alphabet->tokens()) single = single && t.size() == 1;
    if (single && text.find(',') == std::string::npos)
        return Word::from_chars(alphabet, text);
    std::vector<std::string> tokens;
    std::string current;
    for (char c : text) {
        if (c == ',') {
            tokens.push_back(current);
            current.clear();
        } else {
            current += c;
        }
    }
    if (!current.empty()) tokens.push_back(current);
    return Word::from_tokens(alphabet, tokens);
}

std::vector<std::string> split_tapes(const std::string& text) {
    std::vector<std::string> parts;
    std::string current;
    for (char c : text) {
        if (c == '|') {
            parts.push_back(current);
            current.clear();
        } else {
            current += c;
        }
    }
    parts.push_back(current);
    return parts;
}

/// "pre:period|pre:period", one part per tape.
Config parse_config(const MultiTapeAutomaton& M, const std::string& text) {
    std::vector<std::string> parts = split_tapes(text);
    if (parts.size() != M.num_tapes())
        throw std::invalid_argument("configuration must have one pre:period part per tape");
    Config c;
    for (std::size_t k = 0; k < parts.size(); ++k) {
        auto colon = parts[k].find(':');
        if (colon == std::string::npos)
            throw std::invalid_argument("configuration parts use the form pre:period");
        Word pre = parse_word(M.tape_alphabets[k], parts[k].substr(0, colon));
        Word per = parse_word(M.tape_alphabets[k], parts[k].substr(colon + 1));
        c.emplace_back(pre, per);
    }
    return c;
}

ConfigPrefix parse_prefix(const MultiTapeAutomaton& M, const std::string& text) {
    std::vector<std::string> parts = split_tapes(text);
    if (parts.size() != M.num_tapes())
        throw std::invalid_argument("prefix must have one word per tape");
    std::vector<Word> words;
    for (std::size_t k = 0; k < parts.size(); ++k)
        words.push_back(parse_word(M.tape_alphabets[k], parts[k]));
    return ConfigPrefix(std::move(words));
}

Box parse_viewport(std::size_t dim, const std::string& text) {
    std::vector<std::string> parts;
    std::string current;
    for (char c : text) {
        if (c == ',') {
            parts.push_back(current);
            current.clear();
        } else {
            current += c;
        }
    }
    parts.push_back(current);
    if (parts.size() != 2 * dim)
        throw std::invalid_argument("viewport needs lo,hi per dimension");
    Box b;
    for (std::size_t i = 0; i < dim; ++i) {
        b.lo.push_back(rat_from_string(parts[2 * i]));
        b.hi.push_back(rat_from_string(parts[2 * i + 1]));
    }
    return b;
}

std::uint32_t require_state(const MultiTapeAutomaton& M, const std::string& name) {
    auto q = M.state_index(name);
    if (!q) throw std::invalid_argument("unknown state '" + name + "'");
    return *q;
}

void maybe_write_report(const PipelineReport& report, const std::string& path) {
    if (path.empty()) return;
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
    os << report.to_json().dump(2) << "\n";
}

std::string box_str(const Box& b) {
    std::string s;
    for (std::size_t i = 0; i < b.dim(); ++i) {
        if (i) s += " x ";
        s += "[" + rat_to_string(b.lo[i]) + ", " + rat_to_string(b.hi[i]) + "]";
    }
    return s;
}

void print_stats(std::ostream& os, const std::vector<StatsRow>& rows) {
    os << "  k          N_k     density      dim\n";
    for (const auto& r : rows) {
        os << "  " << r.depth << "  " << r.count << "  " << rat_to_string(r.density) << "  ("
           << static_cast<double>(r.density.convert_to<double>()) << ")  " << r.dim_estimate
           << "\n";
    }
}

// ---------------------------------------------------------------------------

int cmd_reduce_pcp(const std::string& in, const std::string& out) {
    PcpInstance inst = load_pcp(in);
    PcpInstance red = reduce_pcp_to_prefix(inst);
    save_pcp(red, out);
    std::cout << "reduced " << inst.size() << "-pair instance to " << red.size() << " pairs -> "
              << out << "\n";
    return 0;
}

int cmd_build_automaton(const std::string& in, const std::string& variant, const std::string& out,
                        std::size_t max_word_len, bool pad) {
    PcpInstance inst = load_pcp(in);
    ReductionOutput ro;
    if (variant == "universality")
        ro = build_universality_automaton(inst, max_word_len);
    else if (variant == "universal-prefix")
        ro = build_universal_prefix_automaton(inst, max_word_len);
    else
        throw CLI::ValidationError("--variant must be universality or universal-prefix");
    if (pad) {
        MultiTapeAutomaton padded = pad_pow2(ro.automaton);
        save_automaton(padded, out);
        std::cout << "built " << variant << " automaton, padded alphabets to powers of two: "
                  << padded.transitions.size() << " transitions -> " << out << "\n";
    } else {
        save_automaton(ro.automaton, out, &ro.items);
        std::cout << "built " << variant << " automaton: " << ro.automaton.transitions.size()
                  << " transitions -> " << out << "\n";
    }
    return 0;
}

int cmd_check(const std::string& in, const std::string& state, const std::string& query,
              const std::string& config_text, const std::string& prefix_text,
              const std::string& state2, const Bounds& bounds, const std::string& report_path) {
    MultiTapeAutomaton M = load_automaton(in).automaton;
    std::uint32_t q = require_state(M, state);
    PipelineReport report;
    report.bounds = bounds;
    Verdict3 verdict;
    verdict.bounds = bounds;

    Timer timer;
    if (query == "accepts") {
        if (config_text.empty())
            throw CLI::ValidationError("--query accepts requires --config");
        Config c = parse_config(M, config_text);
        bool ok = accepts_up(M, q, c);
        verdict.value = ok ? Verdict3::Truth::Yes : Verdict3::Truth::No;
        verdict.certificate = "exact lasso decision";
        report.verdicts.push_back({"accepts " + config_text, state, verdict, ""});
    } else if (query == "universal") {
        verdict = check_universal(M, q, bounds);
        std::string claim = verdict.yes()   ? "state is universal"
                            : verdict.no() ? "state is not universal"
                                           : "undetermined at these bounds";
        report.verdicts.push_back({"universal", state, verdict, claim});
    } else if (query == "universal-prefix") {
        if (!prefix_text.empty()) {
            ConfigPrefix x = parse_prefix(M, prefix_text);
            verdict = check_universal_prefix(M, q, x, bounds);
            report.verdicts.push_back({"universal-prefix " + prefix_text, state, verdict, ""});
        } else {
            auto [prefix, v] = search_universal_prefix(M, q, bounds);
            verdict = v;
            std::string claim =
                prefix ? "universal prefix found: " + prefix->str() : "no certificate found";
            report.verdicts.push_back({"universal-prefix search", state, verdict, claim});
        }
    } else if (query == "common-universal-prefix") {
        if (state2.empty())
            throw CLI::ValidationError("--query common-universal-prefix requires --state2");
        std::uint32_t r = require_state(M, state2);
        auto [prefix, v] = check_common_universal_prefix(M, q, r, bounds);
        verdict = v;
        std::string claim =
            prefix ? "common universal prefix: " + prefix->str() : "no certificate found";
        report.verdicts.push_back({"common-universal-prefix", state + "," + state2, verdict, claim});
    } else {
        throw CLI::ValidationError(
            "--query must be universal, universal-prefix, accepts or common-universal-prefix");
    }
    report.stages.push_back({"check", "", timer.ms()});
    report.print(std::cout);
    maybe_write_report(report, report_path);
    return exit_code(verdict.value);
}

int cmd_compile_gifs(const std::string& in, const std::string& out) {
    MultiTapeAutomaton M = load_automaton(in).automaton;
    GifsGraph G = compile_gifs(M);
    save_gifs(G, out);
    std::cout << "compiled " << G.edges.size() << " edges over " << G.vertices.size()
              << " vertices -> " << out << "\n";
    return 0;
}

int cmd_render(const std::string& in, const std::string& vertex, std::uint32_t depth,
               std::uint32_t res, const std::string& viewport_text, const std::string& out,
               const std::string& intersect_with) {
    GifsGraph G = load_gifs(in);
    std::uint32_t v = 0;
    if (auto idx = G.vertex_index(vertex))
        v = *idx;
    else
        throw std::invalid_argument("unknown vertex '" + vertex + "'");
    ImageGrid img;
    if (!intersect_with.empty()) {
        auto r = G.vertex_index(intersect_with);
        if (!r) throw std::invalid_argument("unknown vertex '" + intersect_with + "'");
        img = intersection_raster(G, v, *r, depth, res);
    } else {
        BoxCover cover = outer_cover(G, depth);
        Box viewport =
            viewport_text.empty() ? cover.bounding : parse_viewport(G.dimension, viewport_text);
        img = rasterize(cover, v, viewport, res);
    }
    write_pgm(img, out);
    std::cout << "rendered " << img.width << "x" << img.height << " (" << img.popcount()
              << " pixels set) -> " << out << "\n";
    return 0;
}

int cmd_stats(const std::string& in, const std::string& vertex, std::uint32_t depth) {
    GifsGraph G = load_gifs(in);
    auto v = G.vertex_index(vertex);
    if (!v) throw std::invalid_argument("unknown vertex '" + vertex + "'");
    auto rows = cover_statistics(G, *v, depth);
    print_stats(std::cout, rows);
    return 0;
}

int cmd_demo(const std::string& in, const std::string& target, const std::string& outdir,
             const Bounds& bounds, std::uint32_t depth, std::uint32_t res, bool pad,
             const std::string& report_path) {
    if (target != "equals-square" && target != "empty-interior")
        throw CLI::ValidationError("--target must be equals-square or empty-interior");
    fs::create_directories(outdir);
    PipelineReport report;
    report.bounds = bounds;
    PcpInstance inst = load_pcp(in);

    Timer t_reduce;
    PcpInstance red = reduce_pcp_to_prefix(inst);
    std::string red_path = (fs::path(outdir) / "prefixpcp.json").string();
    save_pcp(red, red_path);
    report.stages.push_back({"reduce-pcp", red_path, t_reduce.ms()});

    Timer t_build;
    ReductionOutput ro = target == "equals-square" ? build_universality_automaton(red)
                                                   : build_universal_prefix_automaton(red);
    MultiTapeAutomaton M = ro.automaton;
    if (pad) {
        M = pad_pow2(M);
        report.notes.push_back(
            "alphabets padded with dummy duplicate symbols to power-of-two sizes; every "
            "contraction ratio of the compiled system is a negative power of two");
    }
    std::string aut_path = (fs::path(outdir) / "automaton.json").string();
    if (pad)
        save_automaton(M, aut_path);
    else
        save_automaton(M, aut_path, &ro.items);
    report.stages.push_back({"build-automaton", aut_path, t_build.ms()});

    Timer t_compile;
    GifsGraph G = compile_gifs(M);
    std::string gifs_path = (fs::path(outdir) / "gifs.json").string();
    save_gifs(G, gifs_path);
    report.stages.push_back({"compile-gifs", gifs_path, t_compile.ms()});

    Timer t_check;
    Verdict3 verdict;
    verdict.bounds = bounds;
    std::uint32_t x = ro.state_x;
    if (target == "equals-square") {
        Verdict3 uni = check_universal(M, x, bounds);
        std::string claim = uni.yes()   ? "X_X = [0,1]^2"
                            : uni.no() ? "X_X != [0,1]^2 (a configuration prefix is dead)"
                                       : "undetermined at these bounds";
        report.verdicts.push_back({"universal", "X", uni, claim});
        verdict = uni;
    } else {
        auto [prefix, v] = search_universal_prefix(M, x, bounds);
        if (v.yes() && prefix) {
            Box cyl = cylinder_box(*prefix);
            verdict = v;
            verdict.value = Verdict3::Truth::No; // the interior is nonempty
            report.verdicts.push_back(
                {"empty-interior", "X", verdict,
                 "X_X has nonempty interior: it contains " + box_str(cyl) +
                     " (cylinder of the universal prefix " + prefix->str() + ")"});
        } else {
            verdict = v; // Unknown: emptiness is never certified from outer covers
            report.verdicts.push_back({"empty-interior", "X", verdict,
                                       "undetermined at these bounds (outer covers cannot "
                                       "certify empty interior)"});
        }
    }
    report.stages.push_back({"check", "", t_check.ms()});

    Timer t_render;
    constexpr std::size_t kDemoBoxLimit = 500000;
    std::vector<StatsRow> density;
    std::uint32_t rendered_depth = 0;
    // crude pre-dedup estimate: depth-d covers hold at most edges^d boxes
    std::uint32_t start_depth = 0;
    for (std::size_t boxes = 1; start_depth < depth; ++start_depth) {
        if (boxes > kDemoBoxLimit / std::max<std::size_t>(G.edges.size(), 2)) break;
        boxes *= std::max<std::size_t>(G.edges.size(), 2);
    }
    for (std::uint32_t d = std::max(start_depth, 1u); d + 1 > 0; --d) {
        try {
            BoxCover cover = outer_cover(G, d, kDemoBoxLimit);
            std::string img_path = (fs::path(outdir) / "attractor.pgm").string();
            write_pgm(rasterize(cover, x, cover.bounding, res), img_path);
            report.stages.push_back({"render", img_path, t_render.ms()});
            rendered_depth = d;
            density.push_back(box_stats(cover, x));
            break;
        } catch (const std::runtime_error&) {
            // reduction automata have hundreds of edges; back off until the
            // cover fits
        }
    }
    if (rendered_depth == 0) {
        report.notes.push_back("render skipped: even the depth-1 cover exceeds the box limit");
    } else {
        if (rendered_depth < depth)
            report.notes.push_back("render cover depth " + std::to_string(rendered_depth) +
                                   " (deeper covers of this " + std::to_string(G.edges.size()) +
                                   "-edge system exceed " + std::to_string(kDemoBoxLimit) +
                                   " boxes)");
        std::cout << "density table (vertex X):\n";
        for (std::uint32_t d = 0; d < rendered_depth; ++d)
            density.insert(density.end() - 1, box_stats(outer_cover(G, d, kDemoBoxLimit), x));
        print_stats(std::cout, density);
    }

    report.print(std::cout);
    maybe_write_report(report, report_path);
    return exit_code(verdict.value);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"multi-tape automata, their self-affine attractors, and the PCP pipeline"};
    app.require_subcommand(1);

    Bounds bounds;
    std::string in, out, state = "X", state2, query = "universal";
    std::string config_text, prefix_text, viewport_text, report_path, intersect_with;
    std::string variant = "universality", target = "equals-square", vertex = "X",
                outdir = "demo-out";
    std::size_t max_word_len = 8;
    std::uint32_t depth = 8, res = 512;
    bool pad = false;

    auto add_bounds = [&](CLI::App* cmd) {
        cmd->add_option("--max-prefix-len", bounds.max_prefix_len, "dead-prefix search depth");
        cmd->add_option("--max-ext-len", bounds.max_ext_len, "dead-extension search depth");
        cmd->add_option("--overhang-cap", bounds.overhang_cap, "belief overhang cap");
        cmd->add_option("--belief-budget", bounds.belief_budget, "belief exploration budget");
    };

    auto* reduce = app.add_subcommand("reduce-pcp", "reduce a PCP instance to prefix-PCP");
    reduce->add_option("input", in, "PCP instance JSON")->required();
    reduce->add_option("-o,--out", out, "output instance path")->required();

    auto* build = app.add_subcommand("build-automaton",
                                     "compile a prefix-PCP instance into a 2-tape 3-state automaton");
    build->add_option("input", in, "prefix-PCP instance JSON")->required();
    build->add_option("--variant", variant, "universality | universal-prefix");
    build->add_option("-o,--out", out, "output automaton path")->required();
    build->add_option("--max-word-len", max_word_len, "refuse longer instance words");
    build->add_flag("--pad-pow2", pad, "pad alphabets to powers of two");

    auto* check = app.add_subcommand("check", "three-valued queries against an automaton");
    check->add_option("input", in, "automaton JSON")->required();
    check->add_option("--state", state, "start state");
    check->add_option("--state2", state2, "second state for common-universal-prefix");
    check->add_option("--query", query,
                      "universal | universal-prefix | accepts | common-universal-prefix");
    check->add_option("--config", config_text, "eventually periodic input, pre:period per tape");
    check->add_option("--prefix", prefix_text, "check this specific prefix, one word per tape");
    check->add_option("--report-json", report_path, "write the machine-readable report here");
    add_bounds(check);

    auto* compile = app.add_subcommand("compile-gifs", "compile an automaton into its GIFS");
    compile->add_option("input", in, "automaton JSON")->required();
    compile->add_option("-o,--out", out, "output GIFS path")->required();

    auto* render = app.add_subcommand("render", "rasterize an outer cover to a PGM image");
    render->add_option("input", in, "GIFS JSON")->required();
    render->add_option("--vertex", vertex, "vertex to render");
    render->add_option("--depth", depth, "cover refinement depth");
    render->add_option("--res", res, "pixels per side (max 16384)");
    render->add_option("--viewport", viewport_text, "lo,hi per dimension (default: bounding box)");
    render->add_option("--intersect-with", intersect_with, "AND with this vertex's raster");
    render->add_option("-o,--out", out, "output PGM path")->required();

    auto* stats = app.add_subcommand("stats", "box counts, density and dimension estimates");
    stats->add_option("input", in, "GIFS JSON")->required();
    stats->add_option("--vertex", vertex, "vertex");
    stats->add_option("--depth", depth, "maximum refinement depth");

    std::uint32_t demo_depth = 4; // reduction automata have hundreds of edges;
                                  // deep covers of those explode combinatorially
    auto* demo = app.add_subcommand("demo-undecidability",
                                    "run the full chain from a PCP instance to a topological verdict");
    demo->add_option("input", in, "PCP instance JSON")->required();
    demo->add_option("--target", target, "equals-square | empty-interior");
    demo->add_option("--outdir", outdir, "artifact directory");
    demo->add_option("--depth", demo_depth, "render cover depth");
    demo->add_option("--res", res, "render resolution");
    demo->add_flag("--pad-pow2", pad, "pad alphabets to powers of two");
    demo->add_option("--report-json", report_path, "write the machine-readable report here");
    add_bounds(demo);

    try {
        app.parse(argc, argv);
        if (reduce->parsed()) return cmd_reduce_pcp(in, out);
        if (build->parsed()) return cmd_build_automaton(in, variant, out, max_word_len, pad);
        if (check->parsed())
            return cmd_check(in, state, query, config_text, prefix_text, state2, bounds,
                             report_path);
        if (compile->parsed()) return cmd_compile_gifs(in, out);
        if (render->parsed())
            return cmd_render(in, vertex, depth, res, viewport_text, out, intersect_with);
        if (stats->parsed()) return cmd_stats(in, vertex, depth);
        if (demo->parsed())
            return cmd_demo(in, target, outdir, bounds, demo_depth, res, pad, report_path);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}

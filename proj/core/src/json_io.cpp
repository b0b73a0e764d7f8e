#include "safa/json_io.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>
#include <stdexcept>

using nlohmann::json;

namespace safa {

namespace {

json read_json(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open '" + path + "'");
    json j;
    try {
        is >> j;
    } catch (const json::exception& e) {
        throw std::runtime_error("invalid JSON in '" + path + "': " + e.what());
    }
    return j;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
    os << text;
    if (!os) throw std::runtime_error("failed writing '" + path + "'");
}

AlphabetPtr alphabet_from_json(const json& j) {
    if (!j.is_array() || j.empty()) throw std::runtime_error("alphabet must be a nonempty array");
    std::vector<std::string> tokens;
    for (const auto& t : j) tokens.push_back(t.get<std::string>());
    return std::make_shared<TapeAlphabet>(tokens);
}

bool single_char_tokens(const TapeAlphabet& a) {
    for (const auto& t : a.tokens())
        if (t.size() != 1) return false;
    return true;
}

Word word_from_json(const AlphabetPtr& a, const json& j) {
    if (j.is_string()) return Word::from_chars(a, j.get<std::string>());
    if (j.is_array()) {
        std::vector<std::string> tokens;
        for (const auto& t : j) tokens.push_back(t.get<std::string>());
        return Word::from_tokens(a, tokens);
    }
    throw std::runtime_error("a word must be a string or an array of tokens");
}

json word_to_json(const Word& w) {
    if (single_char_tokens(*w.alphabet())) {
        std::string s;
        for (std::size_t i = 0; i < w.size(); ++i) s += w.alphabet()->token(w.at(i));
        return json(s);
    }
    json arr = json::array();
    for (std::size_t i = 0; i < w.size(); ++i) arr.push_back(w.alphabet()->token(w.at(i)));
    return arr;
}

PcpInstance pcp_from_json(const json& j) {
    AlphabetPtr alphabet = alphabet_from_json(j.at("alphabet"));
    std::vector<std::pair<Word, Word>> pairs;
    for (const auto& p : j.at("pairs")) {
        if (!p.is_array() || p.size() != 2)
            throw std::runtime_error("each pair must be a two-element array");
        pairs.emplace_back(word_from_json(alphabet, p[0]), word_from_json(alphabet, p[1]));
    }
    return PcpInstance(alphabet, std::move(pairs));
}

json pcp_to_json(const PcpInstance& inst) {
    json j;
    j["alphabet"] = inst.alphabet->tokens();
    json pairs = json::array();
    for (const auto& [u, v] : inst.pairs) pairs.push_back(json::array({word_to_json(u), word_to_json(v)}));
    j["pairs"] = pairs;
    return j;
}

AutomatonFile automaton_from_json(const json& j) {
    AutomatonFile file;
    MultiTapeAutomaton& M = file.automaton;
    const std::size_t tapes = j.at("tapes").get<std::size_t>();
    for (const auto& a : j.at("alphabets")) M.tape_alphabets.push_back(alphabet_from_json(a));
    if (M.tape_alphabets.size() != tapes)
        throw std::runtime_error("tape count does not match the alphabet list");
    for (const auto& s : j.at("states")) M.states.push_back(s.get<std::string>());
    for (const auto& t : j.at("transitions")) {
        MultiTapeAutomaton::Transition tr;
        auto from = M.state_index(t.at("from").get<std::string>());
        auto to = M.state_index(t.at("to").get<std::string>());
        if (!from || !to)
            throw ValidationError(ValidationError::Kind::UnknownState,
                                  "transition references an unknown state");
        tr.from = *from;
        tr.to = *to;
        const auto& words = t.at("words");
        if (words.size() != tapes) throw std::runtime_error("transition word arity mismatch");
        for (std::size_t k = 0; k < tapes; ++k)
            tr.words.push_back(word_from_json(M.tape_alphabets[k], words[k]));
        M.transitions.push_back(std::move(tr));
    }
    if (j.contains("provenance")) {
        std::vector<std::vector<int>> prov;
        for (const auto& items : j.at("provenance")) prov.push_back(items.get<std::vector<int>>());
        if (prov.size() != M.transitions.size())
            throw std::runtime_error("provenance table size mismatch");
        file.provenance = std::move(prov);
    }
    validate(M);
    return file;
}

json automaton_to_json(const MultiTapeAutomaton& M, const std::vector<std::vector<int>>* prov) {
    json j;
    j["tapes"] = M.num_tapes();
    json alphabets = json::array();
    for (const auto& a : M.tape_alphabets) alphabets.push_back(a->tokens());
    j["alphabets"] = alphabets;
    j["states"] = M.states;
    json transitions = json::array();
    for (const auto& tr : M.transitions) {
        json t;
        t["from"] = M.states.at(tr.from);
        t["to"] = M.states.at(tr.to);
        json words = json::array();
        for (const Word& w : tr.words) words.push_back(word_to_json(w));
        t["words"] = words;
        transitions.push_back(t);
    }
    j["transitions"] = transitions;
    if (prov) {
        if (prov->size() != M.transitions.size())
            throw std::invalid_argument("provenance table size mismatch");
        j["provenance"] = *prov;
    }
    return j;
}

RatVec ratvec_from_json(const json& j) {
    RatVec v;
    for (const auto& x : j) v.push_back(rat_from_string(x.get<std::string>()));
    return v;
}

json ratvec_to_json(const RatVec& v) {
    json arr = json::array();
    for (const Rat& x : v) arr.push_back(rat_to_string(x));
    return arr;
}

GifsGraph gifs_from_json(const json& j) {
    GifsGraph G;
    G.dimension = j.at("dim").get<std::size_t>();
    for (const auto& v : j.at("vertices")) G.vertices.push_back(v.get<std::string>());
    for (const auto& e : j.at("edges")) {
        GifsEdge edge;
        auto from = G.vertex_index(e.at("from").get<std::string>());
        auto to = G.vertex_index(e.at("to").get<std::string>());
        if (!from || !to) throw std::runtime_error("edge references an unknown vertex");
        edge.from = *from;
        edge.to = *to;
        std::vector<RatVec> matrix;
        for (const auto& row : e.at("matrix")) matrix.push_back(ratvec_from_json(row));
        edge.map = AffineMapR::make(std::move(matrix), ratvec_from_json(e.at("translation")));
        G.edges.push_back(std::move(edge));
    }
    if (j.contains("bounding_box")) {
        Box b;
        for (const auto& side : j.at("bounding_box")) {
            if (!side.is_array() || side.size() != 2)
                throw std::runtime_error("bounding_box entries must be [lo, hi] pairs");
            b.lo.push_back(rat_from_string(side[0].get<std::string>()));
            b.hi.push_back(rat_from_string(side[1].get<std::string>()));
        }
        G.domain = b;
    }
    validate(G);
    return G;
}

json gifs_to_json(const GifsGraph& G) {
    json j;
    j["dim"] = G.dimension;
    j["vertices"] = G.vertices;
    json edges = json::array();
    for (const auto& e : G.edges) {
        json edge;
        edge["from"] = G.vertices.at(e.from);
        edge["to"] = G.vertices.at(e.to);
        json matrix = json::array();
        for (const auto& row : e.map.matrix) matrix.push_back(ratvec_to_json(row));
        edge["matrix"] = matrix;
        edge["translation"] = ratvec_to_json(e.map.translation);
        edges.push_back(edge);
    }
    j["edges"] = edges;
    if (G.domain) {
        json box = json::array();
        for (std::size_t i = 0; i < G.domain->dim(); ++i)
            box.push_back(json::array(
                {rat_to_string(G.domain->lo[i]), rat_to_string(G.domain->hi[i])}));
        j["bounding_box"] = box;
    }
    return j;
}

json parse_text(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw std::runtime_error(std::string("invalid JSON: ") + e.what());
    }
}

} // namespace

PcpInstance pcp_from_string(const std::string& text) { return pcp_from_json(parse_text(text)); }
std::string pcp_to_string(const PcpInstance& inst) { return pcp_to_json(inst).dump(2) + "\n"; }
PcpInstance load_pcp(const std::string& path) { return pcp_from_json(read_json(path)); }
void save_pcp(const PcpInstance& inst, const std::string& path) {
    write_text(path, pcp_to_string(inst));
}

AutomatonFile automaton_from_string(const std::string& text) {
    return automaton_from_json(parse_text(text));
}
std::string automaton_to_string(const MultiTapeAutomaton& M,
                                const std::vector<std::vector<int>>* provenance) {
    return automaton_to_json(M, provenance).dump(2) + "\n";
}
AutomatonFile load_automaton(const std::string& path) {
    return automaton_from_json(read_json(path));
}
void save_automaton(const MultiTapeAutomaton& M, const std::string& path,
                    const std::vector<std::vector<int>>* provenance) {
    write_text(path, automaton_to_string(M, provenance));
}

GifsGraph gifs_from_string(const std::string& text) { return gifs_from_json(parse_text(text)); }
std::string gifs_to_string(const GifsGraph& G) { return gifs_to_json(G).dump(2) + "\n"; }
GifsGraph load_gifs(const std::string& path) { return gifs_from_json(read_json(path)); }
void save_gifs(const GifsGraph& G, const std::string& path) {
    write_text(path, gifs_to_string(G));
}

} // namespace safa

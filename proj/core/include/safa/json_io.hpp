// JSON schemas of the three artifact file formats.
//
// PCP instance:  {"alphabet": ["a","b"], "pairs": [["a","abb"],["bb","aa"]]}
// Automaton:     {"tapes": 2, "alphabets": [["0","1"],["0","1","2"]],
//                 "states": ["X","Y"],
//                 "transitions": [{"from":"X","to":"X","words":["0","22"]}, ...]}
// GIFS:          {"dim": 2, "vertices": ["q"],
//                 "edges": [{"from":"q","to":"q",
//                            "matrix": [["1/2","0"],["0","1/2"]],
//                            "translation": ["0","0"]}]}
//
// Words serialize as plain strings when every alphabet token is a single
// character and as token arrays otherwise. Automaton files may carry an
// optional "provenance" table (construction item numbers per transition);
// GIFS files may carry an optional "bounding_box" preserving the domain of
// automaton-compiled systems across save/load.

#pragma once

#include "safa/gifs.hpp"
#include "safa/mta.hpp"
#include "safa/pcp.hpp"

#include <optional>
#include <string>
#include <vector>

namespace safa {

PcpInstance pcp_from_string(const std::string& text);
std::string pcp_to_string(const PcpInstance& inst);
PcpInstance load_pcp(const std::string& path);
void save_pcp(const PcpInstance& inst, const std::string& path);

struct AutomatonFile {
    MultiTapeAutomaton automaton;
    std::optional<std::vector<std::vector<int>>> provenance;
};

AutomatonFile automaton_from_string(const std::string& text);
std::string automaton_to_string(const MultiTapeAutomaton& M,
                                const std::vector<std::vector<int>>* provenance = nullptr);
AutomatonFile load_automaton(const std::string& path);
void save_automaton(const MultiTapeAutomaton& M, const std::string& path,
                    const std::vector<std::vector<int>>* provenance = nullptr);

GifsGraph gifs_from_string(const std::string& text);
std::string gifs_to_string(const GifsGraph& G);
GifsGraph load_gifs(const std::string& path);
void save_gifs(const GifsGraph& G, const std::string& path);

} // namespace safa

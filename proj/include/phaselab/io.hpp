#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "phaselab/cut.hpp"
#include "phaselab/dlp.hpp"
#include "phaselab/graph.hpp"
#include "phaselab/hom.hpp"
#include "phaselab/tournament.hpp"

namespace phaselab {

// Edge list: "n m" then m lines "u v", 0-based, u < v.
void write_edge_list(std::ostream& out, const SparseGraph& g);
SparseGraph read_edge_list(std::istream& in);

// Tournament: "n b" then b lines "i j", 1-based, i < j, meaning j -> i.
void write_tournament(std::ostream& out, const Tournament& t);
Tournament read_tournament(std::istream& in);

// Edge list followed by "kernel N E" and E lines "u v length id...".
void write_expanded_core(std::ostream& out, const ExpandedCore& core);
ExpandedCore read_expanded_core(std::istream& in);

nlohmann::json to_json(const CutResult& cut);

// One "v position" line per vertex.
void write_witness(std::ostream& out, const HomWitness& w);

SparseGraph load_edge_list(const std::string& path);
Tournament load_tournament(const std::string& path);

} // namespace phaselab

#pragma once

#include <string>
#include <utility>

#include "ym2d/fat_graph.hpp"

namespace ym2d {

/**
 * Graph file format (JSON):
 *   { "dart_count": 2a, "sigma": [...], "alpha": [...],
 *     "areas": { "<face representative dart>": positive number, ... } }
 * The representative of a face is the lowest dart on its boundary. Loading
 * enforces every fat-graph invariant; serialization is canonical (sorted
 * keys, shortest round-trip floats) so golden files compare bytewise.
 */
std::pair<FatGraph, AreaMap> parse_graph_json(const std::string& text);
std::pair<FatGraph, AreaMap> load_graph(const std::string& path);

std::string serialize_graph(const FatGraph& graph, const AreaMap& areas);
void save_graph(const std::string& path, const FatGraph& graph, const AreaMap& areas);

} // namespace ym2d

#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "ym2d/group.hpp"
#include "ym2d/lattice.hpp"

namespace ym2d {

/**
 * One structured config file per run. Unknown keys are rejected anywhere in
 * the document; every command validates the whole file before computing.
 *
 *   {
 *     "group":      { "kind": "u1" | "su2" | "so3", "m": <u1 rank> },
 *     "graph":      "path/to/graph.json",            (required by graph tasks)
 *     "measure":    { "T": 1.0, "z": [0,...] | +-1 },
 *     "task":       { command-specific scalars },
 *     "seed":       12345,
 *     "tolerances": { "series_tol": 1e-10, "exact_tol": 1e-8 },
 *     "output":     { "report": path, "csv": path, "graph": path, "moves": path }
 *   }
 */
struct RunConfig {
	GroupKind kind = GroupKind::u1;
	int m = 1;
	double series_tol = 1e-10;
	double exact_tol = 1e-8;

	std::string graph_path; // may be empty for graph-free tasks
	double temperature = 1.0;
	std::vector<long long> z_winding; // u1
	int z_sign = 1;                   // so3

	// task scalars (command-specific; validated per command)
	std::string suite;      // check
	std::string sample_kind = "config"; // sample: config | loop
	long effort = 10000;
	int trials = 50;
	int count = 10;
	int grid = 1024;
	int burn_in = 1000;
	int thinning = 20;
	int genus = 1;        // loop-process tasks
	double total_area = 1.0;

	std::uint64_t seed = 1;

	std::string out_report;
	std::string out_csv;
	std::string out_graph;
	std::string out_moves;

	GroupContext context() const;
	CenterElement bundle_class() const;
};

/** parse + schema-validate; throws std::invalid_argument with a message */
RunConfig parse_run_config(const std::string& text, const std::string& command);
RunConfig load_run_config(const std::string& path, const std::string& command);

} // namespace ym2d

#include "ym2d/run_config.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace ym2d {

using nlohmann::json;

namespace {

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where)
{
	for (auto it = obj.begin(); it != obj.end(); ++it)
		if (!allowed.count(it.key()))
			throw std::invalid_argument("config: unknown key '" + it.key() + "' in " + where);
}

const json& need(const json& obj, const char* key, const std::string& where)
{
	if (!obj.contains(key))
		throw std::invalid_argument("config: missing key '" + std::string(key) + "' in " + where);
	return obj.at(key);
}

} // namespace

GroupContext RunConfig::context() const
{
	switch (kind)
	{
	case GroupKind::u1:
		return GroupContext::u1(m, series_tol);
	case GroupKind::su2:
		return GroupContext::su2(series_tol);
	case GroupKind::so3:
		return GroupContext::so3(series_tol);
	}
	throw std::invalid_argument("config: bad group kind");
}

CenterElement RunConfig::bundle_class() const
{
	CenterElement z;
	if (kind == GroupKind::u1)
		z.winding = z_winding;
	else if (kind == GroupKind::so3)
		z.sign = z_sign;
	return z;
}

RunConfig parse_run_config(const std::string& text, const std::string& command)
{
	json j;
	try
	{
		j = json::parse(text);
	}
	catch (const json::parse_error& e)
	{
		throw std::invalid_argument(std::string("config: invalid JSON: ") + e.what());
	}
	if (!j.is_object())
		throw std::invalid_argument("config: top level must be an object");
	reject_unknown(j, {"group", "graph", "measure", "task", "seed", "tolerances", "output"},
	               "the top level");

	RunConfig cfg;

	{
		const json& g = need(j, "group", "the top level");
		reject_unknown(g, {"kind", "m"}, "group");
		const std::string kind = need(g, "kind", "group").get<std::string>();
		if (kind == "u1")
			cfg.kind = GroupKind::u1;
		else if (kind == "su2")
			cfg.kind = GroupKind::su2;
		else if (kind == "so3")
			cfg.kind = GroupKind::so3;
		else
			throw std::invalid_argument("config: group.kind must be u1, su2 or so3");
		if (cfg.kind == GroupKind::u1)
			cfg.m = need(g, "m", "group").get<int>();
		else if (g.contains("m"))
			throw std::invalid_argument("config: group.m only applies to u1");
		if (cfg.m < 1)
			throw std::invalid_argument("config: group.m must be positive");
	}

	if (j.contains("graph"))
		cfg.graph_path = j.at("graph").get<std::string>();

	if (j.contains("measure"))
	{
		const json& msr = j.at("measure");
		reject_unknown(msr, {"T", "z"}, "measure");
		if (msr.contains("T"))
			cfg.temperature = msr.at("T").get<double>();
		if (!(cfg.temperature > 0.0))
			throw std::invalid_argument("config: measure.T must be positive");
		if (msr.contains("z"))
		{
			const json& z = msr.at("z");
			if (cfg.kind == GroupKind::u1)
			{
				if (!z.is_array())
					throw std::invalid_argument("config: u1 measure.z must be an integer array");
				cfg.z_winding = z.get<std::vector<long long>>();
			}
			else
			{
				const int s = z.get<int>();
				if (s != 1 && s != -1)
					throw std::invalid_argument("config: measure.z must be +1 or -1");
				if (cfg.kind == GroupKind::su2 && s != 1)
					throw std::invalid_argument("config: su2 admits only the trivial class");
				cfg.z_sign = s;
			}
		}
	}
	if (cfg.kind == GroupKind::u1)
	{
		if (cfg.z_winding.empty())
			cfg.z_winding.assign(cfg.m, 0);
		if (static_cast<int>(cfg.z_winding.size()) != cfg.m)
			throw std::invalid_argument("config: measure.z length must equal group.m");
	}

	if (j.contains("tolerances"))
	{
		const json& tol = j.at("tolerances");
		reject_unknown(tol, {"series_tol", "exact_tol"}, "tolerances");
		if (tol.contains("series_tol"))
			cfg.series_tol = tol.at("series_tol").get<double>();
		if (tol.contains("exact_tol"))
			cfg.exact_tol = tol.at("exact_tol").get<double>();
		if (!(cfg.series_tol > 0.0) || !(cfg.exact_tol > 0.0))
			throw std::invalid_argument("config: tolerances must be positive");
	}

	if (j.contains("seed"))
		cfg.seed = j.at("seed").get<std::uint64_t>();

	if (j.contains("output"))
	{
		const json& out = j.at("output");
		reject_unknown(out, {"report", "csv", "graph", "moves"}, "output");
		if (out.contains("report"))
			cfg.out_report = out.at("report").get<std::string>();
		if (out.contains("csv"))
			cfg.out_csv = out.at("csv").get<std::string>();
		if (out.contains("graph"))
			cfg.out_graph = out.at("graph").get<std::string>();
		if (out.contains("moves"))
			cfg.out_moves = out.at("moves").get<std::string>();
	}

	const json task = j.contains("task") ? j.at("task") : json::object();
	if (command == "partition")
	{
		reject_unknown(task, {"effort"}, "task");
		if (task.contains("effort"))
			cfg.effort = task.at("effort").get<long>();
	}
	else if (command == "check")
	{
		reject_unknown(task, {"suite", "trials", "effort"}, "task");
		cfg.suite = need(task, "suite", "task").get<std::string>();
		const std::set<std::string> suites = {"heat", "gauge", "moves", "subdivision", "abelian",
		                                      "sectors"};
		if (!suites.count(cfg.suite))
			throw std::invalid_argument("config: unknown check suite '" + cfg.suite + "'");
		if (task.contains("trials"))
			cfg.trials = task.at("trials").get<int>();
		if (task.contains("effort"))
			cfg.effort = task.at("effort").get<long>();
		if (cfg.trials < 0)
			throw std::invalid_argument("config: task.trials must be non-negative");
	}
	else if (command == "sample")
	{
		reject_unknown(task, {"kind", "count", "burn_in", "thinning", "grid", "genus", "total_area"},
		               "task");
		if (task.contains("kind"))
			cfg.sample_kind = task.at("kind").get<std::string>();
		if (cfg.sample_kind != "config" && cfg.sample_kind != "loop")
			throw std::invalid_argument("config: task.kind must be config or loop");
		if (task.contains("count"))
			cfg.count = task.at("count").get<int>();
		if (task.contains("burn_in"))
			cfg.burn_in = task.at("burn_in").get<int>();
		if (task.contains("thinning"))
			cfg.thinning = task.at("thinning").get<int>();
		if (task.contains("grid"))
			cfg.grid = task.at("grid").get<int>();
		if (task.contains("genus"))
			cfg.genus = task.at("genus").get<int>();
		if (task.contains("total_area"))
			cfg.total_area = task.at("total_area").get<double>();
		if (cfg.count < 1)
			throw std::invalid_argument("config: task.count must be positive");
	}
	else if (command == "reduce")
	{
		reject_unknown(task, {}, "task");
	}
	else if (command == "sectors")
	{
		reject_unknown(task, {"samples", "grid", "genus", "total_area"}, "task");
		if (task.contains("samples"))
			cfg.count = task.at("samples").get<int>();
		if (task.contains("grid"))
			cfg.grid = task.at("grid").get<int>();
		if (task.contains("genus"))
			cfg.genus = task.at("genus").get<int>();
		if (task.contains("total_area"))
			cfg.total_area = task.at("total_area").get<double>();
		if (cfg.count < 1 || cfg.grid < 2)
			throw std::invalid_argument("config: sectors needs positive samples and grid >= 2");
	}
	else
		throw std::invalid_argument("config: unknown command '" + command + "'");

	return cfg;
}

RunConfig load_run_config(const std::string& path, const std::string& command)
{
	std::ifstream in(path);
	if (!in)
		throw std::invalid_argument("cannot open config file: " + path);
	std::stringstream ss;
	ss << in.rdbuf();
	return parse_run_config(ss.str(), command);
}

} // namespace ym2d

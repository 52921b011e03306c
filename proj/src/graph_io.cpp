#include "ym2d/graph_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace ym2d {

using nlohmann::json;

namespace {

std::string shortest_double(double v)
{
	// shortest representation that round-trips
	char buf[64];
	for (int prec = 1; prec <= 17; ++prec)
	{
		std::snprintf(buf, sizeof buf, "%.*g", prec, v);
		if (std::strtod(buf, nullptr) == v)
			break;
	}
	return buf;
}

} // namespace

std::pair<FatGraph, AreaMap> parse_graph_json(const std::string& text)
{
	json j;
	try
	{
		j = json::parse(text);
	}
	catch (const json::parse_error& e)
	{
		throw std::invalid_argument(std::string("graph file: invalid JSON: ") + e.what());
	}
	if (!j.is_object())
		throw std::invalid_argument("graph file: top level must be an object");
	const std::set<std::string> allowed = {"dart_count", "sigma", "alpha", "areas"};
	for (auto it = j.begin(); it != j.end(); ++it)
		if (!allowed.count(it.key()))
			throw std::invalid_argument("graph file: unknown key '" + it.key() + "'");
	for (const auto& key : allowed)
		if (!j.contains(key))
			throw std::invalid_argument("graph file: missing key '" + key + "'");

	const int n = j.at("dart_count").get<int>();
	if (n < 0)
		throw std::invalid_argument("graph file: negative dart_count");
	auto sigma = j.at("sigma").get<std::vector<Dart>>();
	auto alpha = j.at("alpha").get<std::vector<Dart>>();
	if (static_cast<int>(sigma.size()) != n || static_cast<int>(alpha.size()) != n)
		throw std::invalid_argument("graph file: sigma/alpha length differs from dart_count");

	FatGraph graph(std::move(sigma), std::move(alpha));

	const json& areas_obj = j.at("areas");
	if (!areas_obj.is_object())
		throw std::invalid_argument("graph file: areas must be an object");
	std::vector<double> by_face(graph.face_count(), -1.0);
	for (auto it = areas_obj.begin(); it != areas_obj.end(); ++it)
	{
		std::size_t pos = 0;
		int dart = -1;
		try
		{
			dart = std::stoi(it.key(), &pos);
		}
		catch (...)
		{
			pos = 0;
		}
		if (pos != it.key().size() || dart < 0 || dart >= std::max(graph.dart_count(), 1))
			throw std::invalid_argument("graph file: bad area key '" + it.key() + "'");
		const int face = graph.dart_count() == 0 ? 0 : graph.face_of(dart);
		if (graph.face_representative(face) != dart && graph.dart_count() != 0)
			throw std::invalid_argument("graph file: area key '" + it.key() +
			                            "' is not the lowest dart of its face");
		if (by_face[face] >= 0.0)
			throw std::invalid_argument("graph file: duplicate area for a face");
		by_face[face] = it.value().get<double>();
	}
	for (double a : by_face)
		if (a < 0.0)
			throw std::invalid_argument("graph file: missing area for a face");
	return {graph, AreaMap(graph, std::move(by_face))};
}

std::pair<FatGraph, AreaMap> load_graph(const std::string& path)
{
	std::ifstream in(path);
	if (!in)
		throw std::invalid_argument("cannot open graph file: " + path);
	std::stringstream ss;
	ss << in.rdbuf();
	return parse_graph_json(ss.str());
}

std::string serialize_graph(const FatGraph& graph, const AreaMap& areas)
{
	// canonical layout, fixed key order
	std::ostringstream out;
	out << "{\n  \"dart_count\": " << graph.dart_count() << ",\n  \"sigma\": [";
	for (Dart d = 0; d < graph.dart_count(); ++d)
		out << (d ? ", " : "") << graph.sigma(d);
	out << "],\n  \"alpha\": [";
	for (Dart d = 0; d < graph.dart_count(); ++d)
		out << (d ? ", " : "") << graph.alpha(d);
	out << "],\n  \"areas\": {";
	for (int f = 0; f < graph.face_count(); ++f)
	{
		const Dart rep = graph.dart_count() == 0 ? 0 : graph.face_representative(f);
		out << (f ? ", " : "") << "\"" << rep << "\": " << shortest_double(areas.area(f));
	}
	out << "}\n}\n";
	return out.str();
}

void save_graph(const std::string& path, const FatGraph& graph, const AreaMap& areas)
{
	std::ofstream out(path, std::ios::binary);
	if (!out)
		throw std::runtime_error("cannot write graph file: " + path);
	out << serialize_graph(graph, areas);
}

} // namespace ym2d

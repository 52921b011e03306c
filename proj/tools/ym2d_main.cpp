#include <string>
#include <vector>

#include "ym2d/cli.hpp"

int main(int argc, char** argv)
{
	std::vector<std::string> args(argv + 1, argv + argc);
	return ym2d::cli::run(args);
}

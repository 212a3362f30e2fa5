#include "woldlab/cli.hpp"

int main(int argc, char** argv)
{
    return woldlab::cli::run_cli(std::vector<std::string>(argv + 1, argv + argc));
}

#include "randapprox/cli.hpp"

int main(int argc, char** argv) {
    return randapprox::cli_main(std::vector<std::string>(argv + 1, argv + argc));
}

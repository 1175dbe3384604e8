#include <iostream>
#include <string>
#include <vector>

#include "expframe/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    expframe::CommandResult r = expframe::runCommand(args);
    std::cout << r.reportJson << std::endl;
    return r.exitCode;
}

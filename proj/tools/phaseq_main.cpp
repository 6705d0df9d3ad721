#include <string>
#include <vector>

#include <phaseq/runner.hpp>

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return phaseq::dispatch(args);
}

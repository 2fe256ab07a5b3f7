// Cross-engine validation runner: one pass/fail line per criterion.

#include <cstring>
#include <iostream>
#include <string>

#include "fblnet/validation.hpp"

int main(int argc, char** argv) {
    fblnet::AcceptanceOptions opt;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--criterion" && i + 1 < argc) {
            opt.only.push_back(std::stoi(argv[++i]));
        } else if (arg == "--threads" && i + 1 < argc) {
            opt.threads = std::stoi(argv[++i]);
        } else if (arg == "--seed" && i + 1 < argc) {
            opt.seed = std::stoull(argv[++i]);
        } else {
            std::cerr << "usage: fblnet_acceptance [--criterion N] [--threads N]"
                         " [--seed S]\n";
            return 2;
        }
    }
    const auto results = fblnet::run_acceptance(opt, std::cout);
    bool all = !results.empty();
    for (const auto& r : results) all = all && r.pass;
    return all ? 0 : 1;
}

// xyotto.cpp - Command-line entry point

#include "xyotto/config.hpp"
#include "xyotto/errors.hpp"
#include "xyotto/report.hpp"

#include <iostream>
#include <string>
#include <vector>

int main(int argc, char** argv) {
    const std::vector<std::string> args(argv + 1, argv + argc);
    xyotto::RunConfig cfg;
    try {
        cfg = xyotto::parse_config(args);
    } catch (const xyotto::HelpRequested& h) {
        std::cout << h.text;
        return xyotto::kExitOk;
    } catch (const xyotto::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return xyotto::kExitConfig;
    }
    return xyotto::execute(cfg, std::cout, std::cerr);
}

/*
 * Copyright 2026 The FermiFisher Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "fermifisher/cli.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <sstream>

namespace {

std::vector<double> parse_point(const std::string &text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        const double v = std::stod(item, &used);
        if (used != item.size()) throw std::invalid_argument("bad number '" + item + "'");
        out.push_back(v);
    }
    return out;
}

}  // namespace

int main(int argc, char **argv) {
    namespace cli = fermifisher::cli;
    CLI::App app{"Quantum Fisher information of fermionic Gaussian states"};
    app.require_subcommand(1);

    std::string config_path;
    std::string output;
    unsigned threads = 0;
    auto *run = app.add_subcommand("run", "Sweep a parameter grid and write a report");
    run->add_option("config", config_path, "Run configuration (JSON)")->required();
    run->add_option("-o,--output", output, "Override output_path from the config");
    run->add_option("-j,--threads", threads, "Worker threads (overrides FERMIFISHER_THREADS; 0 = auto)");

    int modes = 0;
    int trials = 0;
    std::uint64_t seed = 1;
    auto *check = app.add_subcommand("check", "Cross-validate closed forms against the dense oracle");
    check->add_option("--modes", modes, "Number of fermionic modes")->required();
    check->add_option("--trials", trials, "Random instances")->required();
    check->add_option("--seed", seed, "Base seed");

    std::string point_text;
    bool dense = false;
    auto *dump = app.add_subcommand("sld-dump", "Write K, eta and the SLD eigenbasis at one point");
    dump->add_option("config", config_path, "Run configuration (JSON)")->required();
    dump->add_option("--point", point_text, "Comma-separated parameter values")->required();
    dump->add_option("-o,--output", output, "Output file (default: <output_path>.sld.json)");
    dump->add_flag("--dense", dense, "Include the dense SLD spectrum and eigenbasis");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? cli::kOk : cli::kUsageError;
    }

    if (*run) {
        cli::RunOptions options;
        if (run->count("--threads") > 0) options.threads = threads;
        if (!output.empty()) options.output_path = output;
        return cli::run(config_path, options, std::cerr);
    }
    if (*check) return cli::check(modes, trials, seed, std::cout);

    std::vector<double> point;
    try {
        point = parse_point(point_text);
    } catch (const std::exception &e) {
        std::cerr << "error: --point: " << e.what() << "\n";
        return cli::kUsageError;
    }
    return cli::sld_dump_command(config_path, point,
                                 output.empty() ? std::nullopt : std::optional<std::string>(output), dense,
                                 std::cerr);
}

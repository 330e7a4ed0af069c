// SPDX-License-Identifier: Apache-2.0
//
// fasamp - CSI acquisition simulator for fluid antenna systems
// Copyright (C) 2026 fasamp contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "fas/experiment_io.hpp"
#include "fas/selftest.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
    CLI::App app{"fasamp - fluid antenna CSI acquisition simulator"};
    app.require_subcommand(1);

    fas::cli::RunManifest manifest;
    auto* run = app.add_subcommand("run", "run one experiment and write CSV (and SVG) outputs");
    run->add_option("--config", manifest.config_path, "configuration file (defaults when omitted)");
    run->add_option("--experiment", manifest.experiment, "convergence | vs_snr | vs_ports")
        ->required();
    run->add_option("--seeds", manifest.seed_count, "number of Monte-Carlo seeds")->required();
    run->add_option("--seed-base", manifest.seed_base, "first seed (default 1)");
    run->add_option("--out", manifest.output_dir, "output directory")->required();
    run->add_option("--set", manifest.overrides, "config override, section.key=value (repeatable)");
    run->add_flag("--plots", manifest.emit_plots, "also render SVG figures from the CSV");
    run->add_flag("--timings", manifest.emit_timings,
                  "record wall-clock times in the CSV (breaks byte-identical reruns)");
    run->add_option("--threads", manifest.threads, "worker threads (0 = hardware)");

    fas::cli::SelftestOptions selftest_options;
    auto* selftest = app.add_subcommand("selftest", "run the built-in oracle suites");
    selftest
        ->add_option("--inject-fault", selftest_options.inject_fault,
                     "bias the first suite's values (testing hook)")
        ->group(""); // hidden

    std::string dump_config;
    std::vector<std::string> dump_overrides;
    std::uint64_t dump_seed = 1;
    std::string dump_out;
    auto* dump = app.add_subcommand("dump-scene", "write one seeded scene as CSV matrices");
    dump->add_option("--config", dump_config, "configuration file (defaults when omitted)");
    dump->add_option("--set", dump_overrides, "config override, section.key=value (repeatable)");
    dump->add_option("--seed", dump_seed, "scene seed")->required();
    dump->add_option("--out", dump_out, "output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    if (run->parsed())
        return fas::cli::cmd_run(manifest);
    if (selftest->parsed())
        return fas::cli::cmd_selftest(selftest_options, std::cout);
    if (dump->parsed())
        return fas::cli::cmd_dump_scene(dump_config, dump_overrides, dump_seed, dump_out);
    return 1;
}

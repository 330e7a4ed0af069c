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

#ifndef FAS_SELFTEST_HPP
#define FAS_SELFTEST_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace fas::cli {

struct SelftestOptions {
    // Test hook: adds a bias to the first suite's computed moments so the
    // failure path of the runner itself can be exercised.
    double inject_fault = 0.0;
};

struct SuiteResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

std::vector<SuiteResult> run_selftest_suites(const SelftestOptions& options = {});

// Prints one pass/fail line per suite; returns 0 on success, 3 on failure.
int cmd_selftest(const SelftestOptions& options, std::ostream& out);

} // namespace fas::cli

#endif

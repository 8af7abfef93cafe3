// Copyright 2026 The qmeas Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QMEAS_SRC_SCENARIO_INTERNAL_HPP
#define QMEAS_SRC_SCENARIO_INTERNAL_HPP

#include <string_view>
#include <utility>
#include <vector>

#include "qmeas/premeasurement.hpp"
#include "qmeas/scenario.hpp"

namespace qmeas::scenario::detail {

bcl::BclSpec make_spec(const BclConfig& config);

/// (name, text) pairs generated from scenarios/*.json at configure time.
const std::vector<std::pair<std::string_view, std::string_view>>& bundled_scenarios();

}  // namespace qmeas::scenario::detail

#endif  // QMEAS_SRC_SCENARIO_INTERNAL_HPP

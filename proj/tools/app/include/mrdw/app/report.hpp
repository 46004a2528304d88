// Copyright 2026 The mrdw Authors.
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

#pragma once

#include <string>
#include <vector>

#include "mrdw/controller.hpp"
#include "mrdw/stats.hpp"

namespace mrdw::app {

struct BoxSeries {
  std::string label;
  Summary summary;
  /// Raw values, drawn as dots next to the box.
  std::vector<double> values;
};

/// Box plot (whiskers at min and max) of one config, one box per series.
std::string box_plot_svg(const std::string& title, const std::vector<BoxSeries>& series);

enum class Field { kEscapability, kSafety };

/// Skeleton field of a room as colored grid squares over the room outline.
/// Times are for a 1 m/s walker.
std::string heatmap_svg(const std::string& title, const Room& room, Field field);

}  // namespace mrdw::app

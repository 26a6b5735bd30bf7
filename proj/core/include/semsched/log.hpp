// Copyright 2026 The semsched Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <string_view>

namespace semsched {

using WarningSink = std::function<void(std::string_view)>;

// Replaces the warning sink (default: stderr) and returns the previous one.
// An empty sink silences warnings.
WarningSink set_warning_sink(WarningSink sink);

void warn(std::string_view message);

}  // namespace semsched

#pragma once

#include <functional>
#include <string_view>

namespace sigcon {

using WarningHandler = std::function<void(std::string_view)>;

/// Routes library warnings (non-fatal diagnostics) to `handler`. The default
/// handler writes to stderr. Returns the previous handler.
WarningHandler set_warning_handler(WarningHandler handler);

void warn(std::string_view message);

} // namespace sigcon

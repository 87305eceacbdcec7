#pragma once

#include <string_view>

namespace heterosolve {

/// Library version, e.g. "0.3.0".
std::string_view version() noexcept;

}  // namespace heterosolve

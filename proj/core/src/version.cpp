#include "heterosolve/version.hpp"

namespace heterosolve {

std::string_view version() noexcept { return HETEROSOLVE_VERSION; }

}  // namespace heterosolve

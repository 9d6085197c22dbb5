#pragma once

namespace cavity_ising {

inline constexpr const char* kVersion = "1.0.0";

}  // namespace cavity_ising

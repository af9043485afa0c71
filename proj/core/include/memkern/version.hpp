#pragma once

namespace memkern {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace memkern

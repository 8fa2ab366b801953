#pragma once

namespace restframe {

inline constexpr const char* version_string = "restframe 0.1.0";

}  // namespace restframe

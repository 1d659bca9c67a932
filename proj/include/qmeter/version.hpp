#pragma once

namespace qmeter {

inline constexpr const char* kVersion = "0.1.0";

}

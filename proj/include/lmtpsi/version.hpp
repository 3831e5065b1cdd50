#pragma once

namespace lmtpsi {
inline constexpr const char* version = "0.1.0";
}  // namespace lmtpsi

// SPDX-License-Identifier: Apache-2.0
#pragma once

namespace uqx {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kReportSchema = "uqx-report/1";

}  // namespace uqx

#pragma once

namespace casmp {

inline constexpr const char* version = "1.0.0";

/// CODATA elementary charge, used to convert eV/nm to newtons:
/// 1 eV/nm = e * 1e9 J/m = 1.602176634e-10 N.
inline constexpr double ev_per_nm_in_newton = 1.602176634e-10;

} // namespace casmp

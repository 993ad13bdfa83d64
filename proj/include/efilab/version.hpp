#pragma once

namespace efilab {

inline constexpr const char* kVersion = "0.1.0";

// Dimension caps.  Density matrices are dense 2^n x 2^n arrays, so the cap is
// small; pure states are vectors and can go much wider.
inline constexpr int kDefaultDmCap = 10;
inline constexpr int kPureStateQubitCap = 20;

}  // namespace efilab

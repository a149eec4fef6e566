#pragma once

#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

namespace jacmap {

// Machine-checkable verdict and the result it rests on.  Hypotheses are split
// into those the library verified and those the caller asserted.
struct Certificate {
  std::string kind;       // "automorphism", "rabier-witness"
  std::string criterion;  // name of the result that was applied
  std::vector<std::string> verified;
  std::vector<std::string> asserted;
  std::string evidence;

  // FNV-1a over the evidence text, as 16 hex digits.
  std::string digest() const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : evidence) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
  }
};

namespace criteria {
// A nonsingular polynomial map with empty nonproperness set is an automorphism.
inline constexpr const char* kNonsingularProper = "nonsingular-and-proper";
// A nonsingular map whose nonproperness set misses a hypersurface Z = h^-1(0)
// with h nonsingular and Z biregular to C^(n-1) is an automorphism.
inline constexpr const char* kHypersurfaceClearance = "hypersurface-clearance";
// Laurent path with |x(t)| -> oo, g(x(t)) -> limit, nu(Jac g(x(t))) -> 0.
inline constexpr const char* kRabierPath = "rabier-path-witness";
}  // namespace criteria

}  // namespace jacmap

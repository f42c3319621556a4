#pragma once

#include <stdexcept>
#include <string>

namespace loopcurv {

/// Which loop space an operator lives on. Free loops use the multiplier
/// (1+n^2)^s, based loops use n^{2s} on the harmonics of fields vanishing
/// at theta = 0.
enum class Space { free, based };

inline const char* space_name(Space sp) {
  return sp == Space::free ? "free" : "based";
}

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidAlgebra : Error { using Error::Error; };
struct InvalidInput : Error { using Error::Error; };
struct KernelViolation : Error { using Error::Error; };
struct SobolevRange : Error { using Error::Error; };
struct InsufficientDepth : Error { using Error::Error; };
struct BelowCutoff : Error { using Error::Error; };
struct InvalidTruncation : Error { using Error::Error; };
struct RankDeficient : Error { using Error::Error; };
struct InputError : Error { using Error::Error; };

}  // namespace loopcurv

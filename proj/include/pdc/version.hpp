#ifndef PDC_VERSION_HPP
#define PDC_VERSION_HPP

namespace pdc {
inline constexpr const char* kVersion = "0.3.0";
}

#endif  // PDC_VERSION_HPP

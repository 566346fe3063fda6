#ifndef FOAMSWELL_VERSION_HPP
#define FOAMSWELL_VERSION_HPP

namespace foamswell {
inline constexpr const char* kVersion = "0.1.0";
}

#endif

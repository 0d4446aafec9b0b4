#ifndef COASTPCA_VERSION_HPP
#define COASTPCA_VERSION_HPP

namespace coastpca {

inline constexpr const char* kToolName = "coastpca";
inline constexpr const char* kVersion = "0.1.0";

}  // namespace coastpca

#endif

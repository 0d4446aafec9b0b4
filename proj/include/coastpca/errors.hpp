#ifndef COASTPCA_ERRORS_HPP
#define COASTPCA_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace coastpca {

/// Base class for all errors raised by this library.
class error : public std::runtime_error {
 public:
  explicit error(const std::string& what) : std::runtime_error(what) {}
};

/// Bad argument or input value (maps to CLI exit code 2).
class invalid_argument_error : public error {
 public:
  explicit invalid_argument_error(const std::string& what) : error(what) {}
};

/// Value outside the representable range (e.g. latitude too near a pole).
class range_error : public error {
 public:
  explicit range_error(const std::string& what) : error(what) {}
};

/// Contour or raster has fewer points than one partition.
class too_small_error : public error {
 public:
  explicit too_small_error(const std::string& what) : error(what) {}
};

/// A nodata cell lies inside the partitioned area.
class nodata_error : public error {
 public:
  explicit nodata_error(const std::string& what) : error(what) {}
};

/// An open boundary line cannot be stitched into a closed loop.
class unclosable_domain_error : public error {
 public:
  explicit unclosable_domain_error(const std::string& what) : error(what) {}
};

/// Malformed input file.
class parse_error : public error {
 public:
  explicit parse_error(const std::string& what) : error(what) {}
};

/// Iterative numerics failed to converge (maps to CLI exit code 3).
class numerical_error : public error {
 public:
  numerical_error(const std::string& what, double residual)
      : error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

}  // namespace coastpca

#endif

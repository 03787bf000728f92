#include "folia/types.hpp"

#include <cmath>

namespace folia {

void require_finite(const Vec& x, const char* what) {
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i])) {
      throw input_error(std::string(what) + ": coordinate " + std::to_string(i) +
                        " is not finite");
    }
  }
}

void require_dim(const Vec& x, Eigen::Index d, const char* what) {
  if (x.size() != d) {
    throw input_error(std::string(what) + ": dimension mismatch (got " +
                      std::to_string(x.size()) + ", expected " +
                      std::to_string(d) + ")");
  }
}

}  // namespace folia

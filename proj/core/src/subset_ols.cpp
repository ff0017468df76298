#include "optsel/selectors.hpp"

namespace optsel {

Vector subset_ols(const DesignMatrix& x, const Selection& sel, const Vector& y) {
  if (y.size() != sel.total_count()) {
    throw Error(ErrorCode::InvalidArgument,
                "subset_ols: need one response per selected measurement");
  }
  const DesignMatrix rows = expand_rows(x, sel);
  SpdMatrix g(gram(rows));
  return g.factor().solve(rows.transpose() * y);
}

}  // namespace optsel

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include "optsel/bench.hpp"

namespace optsel {
namespace {

std::string format_alpha(double alpha) {
  std::ostringstream os;
  os << alpha;
  return os.str();
}

double parse_double(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorCode::InvalidArgument, "cannot parse " + what + " from '" + s + "'");
  }
}

int parse_int(const std::string& s, const std::string& what) {
  int v = 0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw Error(ErrorCode::InvalidArgument, "cannot parse " + what + " from '" + s + "'");
  }
  return v;
}

// Student-t with integer df as Z / sqrt(chi2_df / df).
double student_t(Rng& rng, int df) {
  const double z = standard_normal(rng);
  double chi2 = 0.0;
  for (int i = 0; i < df; ++i) {
    const double g = standard_normal(rng);
    chi2 += g * g;
  }
  return z / std::sqrt(chi2 / df);
}

}  // namespace

std::string DesignSpec::label() const {
  switch (kind) {
    case DesignKind::SkewedGaussian: return "skewed:" + format_alpha(alpha);
    case DesignKind::HeavyTailT: return "t:" + std::to_string(df);
    case DesignKind::Fixture: return fixture;
  }
  return {};
}

DesignSpec DesignSpec::parse(const std::string& text) {
  DesignSpec spec;
  const auto colon = text.find(':');
  const std::string head = text.substr(0, colon);
  const std::string tail = colon == std::string::npos ? "" : text.substr(colon + 1);
  if (head == "skewed") {
    spec.kind = DesignKind::SkewedGaussian;
    spec.alpha = parse_double(tail, "alpha");
    if (!(spec.alpha >= 0.0)) throw Error(ErrorCode::InvalidArgument, "alpha must be >= 0");
  } else if (head == "t") {
    spec.kind = DesignKind::HeavyTailT;
    spec.df = parse_int(tail, "degrees of freedom");
    if (spec.df < 1) throw Error(ErrorCode::InvalidArgument, "df must be >= 1");
  } else if (head == "cpu" && colon == std::string::npos) {
    spec.kind = DesignKind::Fixture;
    spec.fixture = "cpu";
  } else {
    throw Error(ErrorCode::InvalidArgument,
                "unknown design spec '" + text + "' (expected skewed:<alpha>, t:<df> or cpu)");
  }
  return spec;
}

Matrix haar_orthogonal(Index p, Rng& rng) {
  Matrix g(p, p);
  for (Index j = 0; j < p; ++j) {
    for (Index i = 0; i < p; ++i) g(i, j) = standard_normal(rng);
  }
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(p, p);
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index j = 0; j < p; ++j) {
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);
  }
  return q;
}

DesignMatrix generate_design(const DesignSpec& spec) {
  if (spec.kind == DesignKind::Fixture) {
    if (spec.fixture == "cpu") return cpu_fixture().x;
    throw Error(ErrorCode::InvalidArgument, "unknown fixture '" + spec.fixture + "'");
  }
  if (spec.n <= 0 || spec.p <= 0 || spec.n < spec.p) {
    throw Error(ErrorCode::InvalidArgument, "generate_design: need n >= p > 0");
  }
  Rng rng(spec.seed);
  DesignMatrix x(spec.n, spec.p);
  if (spec.kind == DesignKind::SkewedGaussian) {
    if (!(spec.alpha >= 0.0)) throw Error(ErrorCode::InvalidArgument, "alpha must be >= 0");
    const Matrix u = haar_orthogonal(spec.p, rng);
    Vector scale(spec.p);
    for (Index j = 0; j < spec.p; ++j) {
      scale(j) = std::sqrt(std::pow(static_cast<double>(j + 1), -spec.alpha));
    }
    // rows z^T diag(sqrt(lambda)) U^T have covariance U Lambda U^T
    const Matrix map = scale.asDiagonal() * u.transpose();
    Eigen::RowVectorXd z(spec.p);
    for (Index i = 0; i < spec.n; ++i) {
      for (Index j = 0; j < spec.p; ++j) z(j) = standard_normal(rng);
      x.row(i) = z * map;
    }
  } else {
    if (spec.df < 1) throw Error(ErrorCode::InvalidArgument, "df must be >= 1");
    for (Index i = 0; i < spec.n; ++i) {
      for (Index j = 0; j < spec.p; ++j) x(i, j) = student_t(rng, spec.df);
    }
  }
  return x;
}

std::vector<int> parse_budgets(const std::string& text) {
  std::vector<int> out;
  if (text.find(':') != std::string::npos) {
    std::vector<int> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(parse_int(item, "budget range"));
    if (parts.size() != 3 || parts[2] <= 0 || parts[0] > parts[1]) {
      throw Error(ErrorCode::InvalidArgument, "budget range must be start:stop:step");
    }
    for (int k = parts[0]; k <= parts[1]; k += parts[2]) out.push_back(k);
  } else {
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
      out.push_back(parse_int(item, "budget"));
    }
  }
  if (out.empty()) throw Error(ErrorCode::InvalidArgument, "no budgets given");
  for (const int k : out) {
    if (k <= 0) throw Error(ErrorCode::InvalidArgument, "budgets must be positive");
  }
  return out;
}

}  // namespace optsel

#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace daogini {

struct TransformSpec {
  enum class Kind { ln, ln1p, identity };
  Kind kind = Kind::ln;
  // With kind == ln and a positive floor, values are clamped to the floor
  // before logging. Exists to run published tables whose rounded cells
  // contain 0.00; full-precision pipelines leave it at 0 (disabled).
  double epsilon_floor = 0.0;
};

enum class SeFlavor { hc0, hc1 };

struct ModelSpec {
  std::string name;  // report column header, e.g. "OLS (1)"
  std::string dependent;
  std::vector<std::string> regressors;  // ordered; intercept is implicit and last
  bool intercept = true;
  SeFlavor se_flavor = SeFlavor::hc1;

  void validate() const;
};

struct FitResult {
  std::string model_name;
  std::string dependent;
  std::vector<std::string> terms;  // regressors in spec order, then "Constant"
  Eigen::VectorXd beta;            // intercept last, matching terms
  Eigen::VectorXd residuals;
  Eigen::MatrixXd robust_cov;  // k x k
  Eigen::VectorXd se;
  Eigen::VectorXd t;
  Eigen::VectorXd p;  // two-sided, Student-t with df = n - k
  std::vector<std::string> stars;
  int n = 0;
  int k = 0;
  SeFlavor se_flavor = SeFlavor::hc1;
  // Provenance: set when the dependent and every regressor entered in
  // natural logs; elasticity interpretation is only valid then.
  bool log_log = false;

  int df() const { return n - k; }
};

// The regression panel: one row per company, named numeric columns in a
// fixed recorded order. Cells may be absent; absence only matters when a
// column is actually selected into a model.
class ObservationTable {
 public:
  explicit ObservationTable(std::vector<std::string> columns);

  void add_row(std::string company, std::string token,
               std::vector<std::optional<double>> cells);

  std::size_t rows() const { return companies_.size(); }
  const std::vector<std::string>& columns() const { return columns_; }
  const std::vector<std::string>& companies() const { return companies_; }
  const std::vector<std::string>& tokens() const { return tokens_; }

  bool has_column(std::string_view name) const;
  const std::optional<double>& cell(std::size_t row, std::string_view column) const;

  // Dense column; any missing cell is an error naming the company row.
  std::vector<double> column(std::string_view name) const;

  // Adds or replaces a column (used for log-transformed variables).
  void set_column(const std::string& name, std::vector<double> values);

  // Panel CSV: first column `company`, optional `token`, remaining columns
  // numeric (dot decimal separator, empty cell = absent).
  static ObservationTable from_csv(const std::filesystem::path& path);
  void to_csv(const std::filesystem::path& path) const;

 private:
  int index_of(std::string_view name) const;

  std::vector<std::string> columns_;
  std::vector<std::string> companies_;
  std::vector<std::string> tokens_;
  std::vector<std::vector<std::optional<double>>> cells_;  // row-major
};

// Applies the transform elementwise. Row indices of failures are carried on
// the thrown TransformError so callers can name the offending company.
std::vector<double> transform_column(std::span<const double> values, const TransformSpec& spec);

// OLS by column-pivoted Householder QR (relative rank threshold 1e-10).
// Throws RankError naming collinear columns, ConfigError when n <= k.
// Robust covariance, SEs, t, p and stars are filled in before returning.
FitResult fit_ols(const ObservationTable& table, const ModelSpec& spec, bool log_log = false);

// Heteroskedasticity-consistent covariance of OLS coefficients:
//   HC0 = (X'X)^-1 X' diag(e^2) X (X'X)^-1,   HC1 = n/(n-k) * HC0
Eigen::MatrixXd robust_covariance(const Eigen::MatrixXd& X, const Eigen::VectorXd& residuals,
                                  SeFlavor flavor);

// Fills se/t/p/stars from beta and robust_cov. Requires df >= 1 and
// strictly positive SEs.
void fill_t_and_p(FitResult& fit);

std::string significance_stars(double p);

// Predicted percent change of the dependent for a pct_change move in the
// named regressor. Only valid on log-log fits.
double elasticity(const FitResult& fit, std::string_view term, double pct_change);

struct NoiseSpec {
  enum class Kind { homoskedastic, heteroskedastic };
  Kind kind = Kind::homoskedastic;
  // Homoskedastic: sd of the error. Heteroskedastic: sd_i = sigma * |x_i1|.
  double sigma = 1.0;
};

// Deterministic synthetic panel for round-trip tests: columns y, x1..xm with
// y = X beta + eps, beta given with the intercept last. Requires
// n > beta.size().
ObservationTable synth_generate(std::uint64_t seed, int n, const std::vector<double>& beta,
                                const NoiseSpec& noise);

}  // namespace daogini

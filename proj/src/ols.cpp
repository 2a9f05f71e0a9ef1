#include "daogini/ols.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <set>

#include "daogini/csv.hpp"
#include "daogini/errors.hpp"
#include "daogini/numfmt.hpp"
#include "daogini/tdist.hpp"

namespace daogini {

void ModelSpec::validate() const {
  if (regressors.empty()) throw ConfigError("model \"" + name + "\": no regressors");
  std::set<std::string> seen;
  for (const auto& r : regressors) {
    if (r == dependent)
      throw ConfigError("model \"" + name + "\": dependent " + dependent +
                        " cannot also be a regressor");
    if (!seen.insert(r).second)
      throw ConfigError("model \"" + name + "\": regressor " + r + " listed twice");
  }
}

ObservationTable::ObservationTable(std::vector<std::string> columns)
    : columns_(std::move(columns)) {
  std::set<std::string> seen;
  for (const auto& c : columns_)
    if (!seen.insert(c).second) throw ConfigError("duplicate column name " + c);
}

void ObservationTable::add_row(std::string company, std::string token,
                               std::vector<std::optional<double>> cells) {
  if (cells.size() != columns_.size())
    throw ConfigError("row " + company + ": expected " + std::to_string(columns_.size()) +
                      " cells, got " + std::to_string(cells.size()));
  for (const auto& existing : companies_)
    if (existing == company) throw ValidationError("duplicate company_id " + company);
  companies_.push_back(std::move(company));
  tokens_.push_back(std::move(token));
  cells_.push_back(std::move(cells));
}

int ObservationTable::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < columns_.size(); ++i)
    if (columns_[i] == name) return static_cast<int>(i);
  return -1;
}

bool ObservationTable::has_column(std::string_view name) const { return index_of(name) >= 0; }

const std::optional<double>& ObservationTable::cell(std::size_t row,
                                                    std::string_view column) const {
  int c = index_of(column);
  if (c < 0) throw ConfigError("no column named " + std::string(column));
  return cells_.at(row)[static_cast<std::size_t>(c)];
}

std::vector<double> ObservationTable::column(std::string_view name) const {
  int c = index_of(name);
  if (c < 0) throw ConfigError("column not found: " + std::string(name));
  std::vector<double> out;
  out.reserve(rows());
  for (std::size_t r = 0; r < rows(); ++r) {
    const auto& v = cells_[r][static_cast<std::size_t>(c)];
    if (!v)
      throw ValidationError("missing " + std::string(name) + " value for company " +
                            companies_[r]);
    out.push_back(*v);
  }
  return out;
}

void ObservationTable::set_column(const std::string& name, std::vector<double> values) {
  if (values.size() != rows())
    throw ConfigError("column " + name + ": " + std::to_string(values.size()) +
                      " values for " + std::to_string(rows()) + " rows");
  int c = index_of(name);
  if (c < 0) {
    columns_.push_back(name);
    for (auto& row : cells_) row.emplace_back();
    c = static_cast<int>(columns_.size()) - 1;
  }
  for (std::size_t r = 0; r < rows(); ++r)
    cells_[r][static_cast<std::size_t>(c)] = values[r];
}

ObservationTable ObservationTable::from_csv(const std::filesystem::path& path) {
  csv::Table raw = csv::read_file(path);
  if (raw.header.empty() || raw.header[0] != "company")
    throw ParseError(path.string() + ": first column must be company");
  bool has_token = raw.header.size() > 1 && raw.header[1] == "token";
  std::size_t first_numeric = has_token ? 2 : 1;

  std::vector<std::string> columns(raw.header.begin() + static_cast<std::ptrdiff_t>(first_numeric),
                                   raw.header.end());
  ObservationTable table(std::move(columns));
  for (std::size_t r = 0; r < raw.rows.size(); ++r) {
    const auto& row = raw.rows[r];
    std::vector<std::optional<double>> cells;
    cells.reserve(row.size() - first_numeric);
    for (std::size_t c = first_numeric; c < row.size(); ++c) {
      if (row[c].empty()) {
        cells.emplace_back();
        continue;
      }
      cells.emplace_back(parse_double_strict(
          row[c], path.string() + " row " + std::to_string(r + 2) + " column " + raw.header[c]));
    }
    table.add_row(row[0], has_token ? row[1] : "", std::move(cells));
  }
  return table;
}

void ObservationTable::to_csv(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  std::vector<std::string> header{"company", "token"};
  header.insert(header.end(), columns_.begin(), columns_.end());
  out << csv::format_row(header);
  for (std::size_t r = 0; r < rows(); ++r) {
    std::vector<std::string> fields{companies_[r], tokens_[r]};
    for (const auto& v : cells_[r])
      fields.push_back(v ? format_double_shortest(*v) : std::string{});
    out << csv::format_row(fields);
  }
  if (!out) throw Error("failed writing " + path.string());
}

std::vector<double> transform_column(std::span<const double> values, const TransformSpec& spec) {
  if (spec.epsilon_floor < 0) throw ConfigError("epsilon floor must be non-negative");
  if (spec.epsilon_floor > 0 && spec.kind != TransformSpec::Kind::ln)
    throw ConfigError("epsilon floor only applies to the ln transform");

  std::vector<double> out;
  out.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    double v = values[i];
    switch (spec.kind) {
      case TransformSpec::Kind::ln:
        if (spec.epsilon_floor > 0) {
          out.push_back(std::log(std::max(v, spec.epsilon_floor)));
        } else {
          if (!(v > 0))
            throw TransformError(
                "ln undefined for nonpositive value " + format_double_shortest(v) + " at row " +
                    std::to_string(i),
                i);
          out.push_back(std::log(v));
        }
        break;
      case TransformSpec::Kind::ln1p:
        if (!(v > -1))
          throw TransformError("ln1p undefined for value " + format_double_shortest(v) +
                                   " <= -1 at row " + std::to_string(i),
                               i);
        out.push_back(std::log1p(v));
        break;
      case TransformSpec::Kind::identity:
        out.push_back(v);
        break;
    }
  }
  return out;
}

namespace {

constexpr double kRankThreshold = 1e-10;

// Columns the pivoted QR pushed past the numerical rank.
std::vector<int> deficient_columns(const Eigen::ColPivHouseholderQR<Eigen::MatrixXd>& qr) {
  std::vector<int> out;
  const auto& perm = qr.colsPermutation().indices();
  for (Eigen::Index i = qr.rank(); i < perm.size(); ++i) out.push_back(perm[i]);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

Eigen::MatrixXd robust_covariance(const Eigen::MatrixXd& X, const Eigen::VectorXd& residuals,
                                  SeFlavor flavor) {
  const Eigen::Index n = X.rows();
  const Eigen::Index k = X.cols();
  if (residuals.size() != n) throw ConfigError("residual length does not match X rows");

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
  qr.setThreshold(kRankThreshold);
  if (qr.rank() < k) throw RankError("X'X is singular", {});

  // X P = Q R  =>  (X'X)^-1 = P R^-1 R^-T P'
  Eigen::MatrixXd r = qr.matrixR().topLeftCorner(k, k).template triangularView<Eigen::Upper>();
  Eigen::MatrixXd r_inv =
      r.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(k, k));
  Eigen::MatrixXd bread = qr.colsPermutation() * (r_inv * r_inv.transpose()) *
                          qr.colsPermutation().transpose();

  Eigen::MatrixXd meat = X.transpose() * residuals.array().square().matrix().asDiagonal() * X;
  Eigen::MatrixXd hc0 = bread * meat * bread;
  if (flavor == SeFlavor::hc0) return hc0;
  if (n <= k) throw ConfigError("HC1 needs n > k");
  return hc0 * (static_cast<double>(n) / static_cast<double>(n - k));
}

void fill_t_and_p(FitResult& fit) {
  if (fit.df() < 1) throw ConfigError("degrees of freedom must be at least 1");
  const Eigen::Index k = fit.beta.size();
  fit.se.resize(k);
  fit.t.resize(k);
  fit.p.resize(k);
  fit.stars.assign(static_cast<std::size_t>(k), "");
  for (Eigen::Index i = 0; i < k; ++i) {
    double var = fit.robust_cov(i, i);
    double se = std::sqrt(var);
    if (!(se > 0) || !std::isfinite(se))
      throw Error("standard error for " + fit.terms[static_cast<std::size_t>(i)] +
                  " is zero or not finite");
    fit.se[i] = se;
    fit.t[i] = fit.beta[i] / se;
    fit.p[i] = student_t_two_sided_p(fit.t[i], fit.df());
    fit.stars[static_cast<std::size_t>(i)] = significance_stars(fit.p[i]);
  }
}

std::string significance_stars(double p) {
  if (p <= 0.001) return "***";
  if (p <= 0.01) return "**";
  if (p <= 0.05) return "*";
  return "";
}

FitResult fit_ols(const ObservationTable& table, const ModelSpec& spec, bool log_log) {
  spec.validate();
  const std::size_t n = table.rows();
  const std::size_t k = spec.regressors.size() + (spec.intercept ? 1 : 0);
  if (n <= k)
    throw ConfigError("model \"" + spec.name + "\": " + std::to_string(n) +
                      " observations cannot identify " + std::to_string(k) + " parameters");

  auto y_values = table.column(spec.dependent);
  Eigen::VectorXd y =
      Eigen::Map<const Eigen::VectorXd>(y_values.data(), static_cast<Eigen::Index>(n));
  Eigen::MatrixXd x(n, k);
  for (std::size_t j = 0; j < spec.regressors.size(); ++j) {
    auto col = table.column(spec.regressors[j]);
    x.col(static_cast<Eigen::Index>(j)) =
        Eigen::Map<const Eigen::VectorXd>(col.data(), static_cast<Eigen::Index>(n));
  }
  if (spec.intercept) x.col(static_cast<Eigen::Index>(k - 1)).setOnes();

  std::vector<std::string> terms = spec.regressors;
  if (spec.intercept) terms.emplace_back("Constant");

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
  qr.setThreshold(kRankThreshold);
  if (qr.rank() < static_cast<Eigen::Index>(k)) {
    std::vector<std::string> names;
    std::string msg = "model \"" + spec.name + "\": design matrix is rank deficient;";
    for (int idx : deficient_columns(qr)) {
      names.push_back(terms[static_cast<std::size_t>(idx)]);
      msg += " " + names.back();
    }
    throw RankError(msg, std::move(names));
  }

  FitResult fit;
  fit.model_name = spec.name;
  fit.dependent = spec.dependent;
  fit.terms = std::move(terms);
  fit.beta = qr.solve(y);
  fit.residuals = y - x * fit.beta;
  fit.n = static_cast<int>(n);
  fit.k = static_cast<int>(k);
  fit.se_flavor = spec.se_flavor;
  fit.log_log = log_log;
  fit.robust_cov = robust_covariance(x, fit.residuals, spec.se_flavor);
  fill_t_and_p(fit);
  return fit;
}

double elasticity(const FitResult& fit, std::string_view term, double pct_change) {
  if (!fit.log_log)
    throw ConfigError(
        "elasticity interpretation requires a log-log fit (dependent and regressors in "
        "natural logs)");
  for (std::size_t i = 0; i < fit.terms.size(); ++i) {
    if (fit.terms[i] == term) return fit.beta[static_cast<Eigen::Index>(i)] * pct_change;
  }
  throw ConfigError("no term named " + std::string(term) + " in model " + fit.model_name);
}

ObservationTable synth_generate(std::uint64_t seed, int n, const std::vector<double>& beta,
                                const NoiseSpec& noise) {
  if (beta.empty()) throw ConfigError("synth_generate: beta must not be empty");
  if (n <= static_cast<int>(beta.size()))
    throw ConfigError("synth_generate: need n > number of parameters");

  const std::size_t m = beta.size() - 1;  // regressors; intercept is beta.back()
  std::vector<std::string> columns{"y"};
  for (std::size_t j = 0; j < m; ++j) columns.push_back("x" + std::to_string(j + 1));

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> xdist(0.5, 10.0);
  std::normal_distribution<double> ndist(0.0, 1.0);

  ObservationTable table(std::move(columns));
  for (int i = 0; i < n; ++i) {
    std::vector<double> xs(m);
    for (auto& v : xs) v = xdist(rng);
    double mean = beta.back();
    for (std::size_t j = 0; j < m; ++j) mean += beta[j] * xs[j];
    double sd = noise.sigma;
    if (noise.kind == NoiseSpec::Kind::heteroskedastic && m > 0) sd = noise.sigma * std::abs(xs[0]);
    double y = mean + (sd > 0 ? sd * ndist(rng) : 0.0);

    std::vector<std::optional<double>> cells;
    cells.emplace_back(y);
    for (double v : xs) cells.emplace_back(v);
    char id[32];
    std::snprintf(id, sizeof(id), "synth-%04d", i + 1);
    table.add_row(id, "", std::move(cells));
  }
  return table;
}

}  // namespace daogini

#pragma once

#include "lorpe/baselines.hpp"
#include "lorpe/distributions.hpp"
#include "lorpe/lorpe.hpp"
#include "lorpe/tuning.hpp"

#include <cstdint>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace lorpe {

enum class EstimatorKind
{
  lorpe,        //!< LOrPE at fixed (h, M)
  kde,          //!< KDE with the interior effective kernel of degree M
  kde_mirror,   //!< same, with data mirrored about the finite support end
  lorpe_plugin, //!< LOrPE tuned by the normal-reference plug-in
  lorpe_lscv,   //!< LOrPE tuned by LSCV on the default grids around the plug-in
  lorpe_rlcv,   //!< LOrPE tuned by RLCV on the default grids around the plug-in
  osde          //!< discrete-Legendre OSDE with automatic term count
};

//! lorpe | kde | kde_mirror | plugin | lscv | rlcv | osde
EstimatorKind estimator_kind_from_name(std::string_view name);
std::string to_string(EstimatorKind kind);

struct EstimatorSpec
{
  EstimatorKind kind = EstimatorKind::lorpe;
  double h = 1.0;
  double M = 0.0;
  KernelSpec kernel = KernelSpec::quadweight();
  BoundaryMode boundary_mode = BoundaryMode::clip_polys;
  double alpha = 0.5;
  DegreeRule degree_rule = DegreeRule::case_table;
  FitPoint fit_point = FitPoint::nearest_grid;
  CvScale cv_scale = CvScale::renormalized;
  int osde_j_max = 48;
  std::size_t grid_size = 1024;
};

//! An estimate together with the tuning parameters actually used
//! (M holds J for the OSDE).
struct Fit
{
  DensityEstimate estimate;
  double h = 0.0;
  double M = 0.0;
};

//! Runs one estimator on one sample. The support is treated as known.
Fit run_estimator(const EstimatorSpec& spec,
                  std::span<const double> sample,
                  const Support& support,
                  Execution exec = Execution::parallel);

//! ISE integration domain: finite support ends are kept, infinite ones are
//! replaced by the 0.0001 / 0.9999 quantiles moved out by one unit.
std::pair<double, double> ise_domain(const DistributionSpec& dist);

//! Trapezoid integral of (est(x) - pdf(x))^2 over the given increasing grid;
//! est is linearly interpolated and zero off its own grid.
double ise(const DensityEstimate& est, const DistributionSpec& dist, std::span<const double> grid);

//! ise on a uniform grid of `points` points over ise_domain(dist).
double ise(const DensityEstimate& est, const DistributionSpec& dist, std::size_t points = 4096);

//! Sample for replication `rep` under `seed`; every study draws through this
//! so that cells share common random numbers.
std::vector<double> replication_sample(const DistributionSpec& dist,
                                       std::size_t n,
                                       std::uint64_t seed,
                                       std::uint64_t rep);

//! Standard error of log10 MISE from the 15.87 / 84.13 percentiles of the
//! ISE values: (q84 - q16) / (2 sqrt(reps)) / (MISE ln 10).
double robust_log10_se(std::span<const double> ise_values);

struct MiseResult
{
  std::string distribution;
  std::size_t n = 0;
  EstimatorSpec config;
  std::size_t reps = 0;    //!< replications that produced an estimate
  std::size_t dropped = 0; //!< replications whose estimator failed
  std::vector<double> ise_values;
  double log10_mise = 0.0;
  double se = 0.0;
  std::uint64_t seed = 0;
  //! tuning parameters chosen in each replication
  std::vector<double> chosen_h;
  std::vector<double> chosen_M;
};

MiseResult mise_study(const DistributionSpec& dist,
                      const EstimatorSpec& spec,
                      std::size_t n,
                      std::size_t reps,
                      std::uint64_t seed);

//! Log10 MISE over an (h, M) grid with common random numbers across cells.
struct OracleSurface
{
  std::string distribution;
  std::size_t n = 0;
  EstimatorKind kind = EstimatorKind::lorpe;
  std::vector<double> h_grid;
  std::vector<double> M_grid;
  std::vector<double> log10_mise; //!< h-major
  std::vector<double> se;         //!< robust log10 standard errors, h-major
  std::size_t reps = 0;
  std::uint64_t seed = 0;
  double best_h = 0.0;
  double best_M = 0.0;
  double best_log10_mise = 0.0;

  double at(std::size_t ih, std::size_t im) const { return log10_mise[ih * M_grid.size() + im]; }
};

struct StudyOptions
{
  KernelSpec kernel = KernelSpec::quadweight();
  BoundaryMode boundary_mode = BoundaryMode::clip_polys;
  std::size_t grid_size = 1024;
  std::size_t ise_points = 4096;
  FitPoint fit_point = FitPoint::nearest_grid;
  CvScale cv_scale = CvScale::renormalized;
};

//! kind must be lorpe, kde or kde_mirror.
OracleSurface oracle_search(const DistributionSpec& dist,
                            std::size_t n,
                            std::span<const double> h_grid,
                            std::span<const double> M_grid,
                            std::size_t reps,
                            EstimatorKind kind,
                            std::uint64_t seed,
                            const StudyOptions& opts = {});

//! Oracle surface plus the MISE of the LSCV- and RLCV-selected cells of the
//! same grid, all from the same replications.
struct CvStudy
{
  OracleSurface oracle;
  MiseResult lscv;
  std::vector<double> alphas;
  std::vector<MiseResult> rlcv; //!< one per alpha
};

CvStudy cv_study(const DistributionSpec& dist,
                 std::size_t n,
                 std::span<const double> h_grid,
                 std::span<const double> M_grid,
                 std::span<const double> alphas,
                 std::size_t reps,
                 std::uint64_t seed,
                 const StudyOptions& opts = {});

struct AlphaPoint
{
  double alpha = 0.5;
  double log10_mise = 0.0;
  double se = 0.0;
};

std::vector<AlphaPoint> alpha_sweep(const DistributionSpec& dist,
                                    std::size_t n,
                                    std::span<const double> alphas,
                                    std::span<const double> h_grid,
                                    std::span<const double> M_grid,
                                    std::size_t reps,
                                    std::uint64_t seed,
                                    const StudyOptions& opts = {});

//! 30 log-spaced bandwidths spanning the known optimum range of each target
//! widened by a factor 8 on both sides.
std::vector<double> default_oracle_h_grid(const DistributionSpec& dist);

//! 0, 1, ..., 20.
std::vector<double> default_oracle_M_grid();

//! distribution,n,estimator,M,h,alpha,reps,log10_mise,se,seed
struct CsvRow
{
  std::string distribution;
  std::size_t n = 0;
  std::string estimator;
  double M = 0.0;
  double h = 0.0;
  double alpha = 0.0;
  std::size_t reps = 0;
  double log10_mise = 0.0;
  double se = 0.0;
  std::uint64_t seed = 0;
};

CsvRow to_row(const MiseResult& r);
std::vector<CsvRow> to_rows(const OracleSurface& s);
void write_csv(std::ostream& os, std::span<const CsvRow> rows);

} // namespace lorpe

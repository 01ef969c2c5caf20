#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fracflux/field.hpp"
#include "fracflux/residual.hpp"
#include "json.hpp"

namespace fracflux::cli {

/// One row of results.csv: a case at one resolution.
struct ResultRow {
    std::string experiment;
    std::string caseId;
    std::optional<double> alpha;
    std::optional<double> gammaSplit;
    std::size_t resolution = 0;
    double residualMax = 0.0;
    double residualL2 = 0.0;
    std::optional<double> fittedOrder;
    double threshold = 0.0;
    std::string status;
};

enum class Comparison { AtMost, AtLeast, Report };

/// One row of summary.csv: a gated (or reported) check.
struct CheckRow {
    std::string experiment;
    std::string caseId;
    std::string check;
    double value = 0.0;
    double threshold = 0.0;
    Comparison comparison = Comparison::AtMost;
    /// Acceptance criterion the check belongs to (0 when none).
    int criterion = 0;
    bool pass = true;
    std::string note;
};

struct FieldDump {
    std::string caseId;
    SampledField field;
};

struct ExperimentOutput {
    std::vector<ResultRow> rows;
    std::vector<CheckRow> checks;
    std::vector<FieldDump> dumps;
};

/// Settings for one experiment: the experiment's section of the config plus
/// the global seed and tolerance scale.
class Context {
  public:
    Context(std::string experiment, nlohmann::json settings, std::uint64_t seed, double toleranceScale);

    const std::string& experiment() const { return experiment_; }
    std::uint64_t seed() const { return seed_; }

    double number(const std::string& key, double fallback) const;
    std::vector<double> numbers(const std::string& key, std::vector<double> fallback) const;
    std::vector<std::size_t> sizes(const std::string& key, std::vector<std::size_t> fallback) const;
    std::string text(const std::string& key, const std::string& fallback) const;

    /// Gated upper bound on a residual (scaled by the tolerance scale).
    void atMost(ExperimentOutput& out, const std::string& caseId, const std::string& check, double value,
                double threshold, int criterion, const std::string& note = "") const;
    /// Gated lower bound (orders); not scaled, but a zero tolerance scale fails it.
    void atLeast(ExperimentOutput& out, const std::string& caseId, const std::string& check, double value,
                 double threshold, int criterion, const std::string& note = "") const;
    /// Reported, never gated.
    void report(ExperimentOutput& out, const std::string& caseId, const std::string& check, double value,
                const std::string& note = "") const;

    /// Rows for every resolution of a residual report; the status is the
    /// case status passed in.
    void addRows(ExperimentOutput& out, const std::string& caseId, const ResidualReport& r, double threshold,
                 bool pass, std::optional<double> alpha = std::nullopt,
                 std::optional<double> gammaSplit = std::nullopt) const;

    /// Gates a convergence study: finest max residual <= threshold (when
    /// positive) and order >= minOrder (when positive) or round-off; adds rows.
    bool gateReport(ExperimentOutput& out, const std::string& caseId, const ResidualReport& r, double threshold,
                    double minOrder, int criterion, std::optional<double> alpha = std::nullopt,
                    std::optional<double> gammaSplit = std::nullopt) const;

    /// Gates that the max residual strictly decreases under refinement: the
    /// largest ratio of successive norms must stay below 1 (0 at round-off).
    bool gateDecreasing(ExperimentOutput& out, const std::string& caseId, const ResidualReport& r,
                        int criterion) const;

  private:
    std::string experiment_;
    nlohmann::json settings_;
    std::uint64_t seed_;
    double toleranceScale_;
};

using ExperimentFn = std::function<ExperimentOutput(const Context&)>;

struct ExperimentInfo {
    std::string name;
    std::string anchor;
    ExperimentFn run;
};

const std::vector<ExperimentInfo>& experimentTable();

ExperimentOutput verifyOps(const Context&);
ExperimentOutput verifyLeibniz(const Context&);
ExperimentOutput mlAccuracy(const Context&);
ExperimentOutput diffusion1d(const Context&);
ExperimentOutput diffusionDd(const Context&);
ExperimentOutput currents(const Context&);
ExperimentOutput charges(const Context&);
ExperimentOutput generalOperator(const Context&);

struct RunOptions {
    std::string configPath;
    std::optional<std::string> outDir;
    std::optional<std::string> only;
    std::optional<std::uint64_t> seed;
};

struct RunResult {
    int exitCode = 0;
    std::string message;
    std::vector<CheckRow> checks;
};

/// Exit codes: 0 all gated checks pass, 1 a check failed, 2 config error,
/// 3 I/O error.
RunResult run(const RunOptions& options);

/// Rows "name<TAB>anchor" whose name or anchor contains `filter`.
std::string listExperiments(const std::string& filter = "");

}  // namespace fracflux::cli

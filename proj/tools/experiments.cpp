#include "experiments.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "fracflux/error.hpp"

namespace fracflux::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string num(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9e", v);
    return buf;
}

std::string opt(const std::optional<double>& v) { return v ? num(*v) : ""; }

std::string quoted(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string comparisonName(Comparison c) {
    switch (c) {
        case Comparison::AtMost: return "<=";
        case Comparison::AtLeast: return ">=";
        case Comparison::Report: return "report";
    }
    return "?";
}

std::string statusOf(const CheckRow& c) {
    if (c.comparison == Comparison::Report) return "INFO";
    return c.pass ? "PASS" : "FAIL";
}

std::string safeName(std::string s) {
    for (char& c : s)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '_' && c != '.' && c != '=') c = '_';
    return s;
}

void writeFile(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
    out.close();
    require(static_cast<bool>(out), ErrorCode::Io, "cannot write " + path.string());
}

std::string resultsCsv(std::vector<ResultRow> rows) {
    std::sort(rows.begin(), rows.end(), [](const ResultRow& a, const ResultRow& b) {
        return std::tie(a.experiment, a.caseId, a.resolution) < std::tie(b.experiment, b.caseId, b.resolution);
    });
    std::ostringstream s;
    s << "experiment,case_id,alpha,gamma_split,resolution,residual_max,residual_l2,fitted_order,threshold,status\n";
    for (const auto& r : rows)
        s << r.experiment << ',' << quoted(r.caseId) << ',' << opt(r.alpha) << ',' << opt(r.gammaSplit) << ','
          << r.resolution << ',' << num(r.residualMax) << ',' << num(r.residualL2) << ',' << opt(r.fittedOrder)
          << ',' << num(r.threshold) << ',' << r.status << '\n';
    return s.str();
}

std::string summaryCsv(std::vector<CheckRow> checks) {
    std::sort(checks.begin(), checks.end(), [](const CheckRow& a, const CheckRow& b) {
        return std::tie(a.experiment, a.caseId, a.check) < std::tie(b.experiment, b.caseId, b.check);
    });
    std::ostringstream s;
    s << "experiment,case_id,check,value,comparison,threshold,criterion,status,note\n";
    for (const auto& c : checks)
        s << c.experiment << ',' << quoted(c.caseId) << ',' << quoted(c.check) << ',' << num(c.value) << ','
          << comparisonName(c.comparison) << ',' << num(c.threshold) << ',' << c.criterion << ',' << statusOf(c)
          << ',' << quoted(c.note) << '\n';
    return s.str();
}

std::string fieldCsv(const SampledField& f) {
    const Grid& g = f.grid();
    std::ostringstream s;
    for (std::size_t a = 0; a < g.rank(); ++a) s << (g.axis(a).isFractional() ? "t" : "x") << a << ',';
    s << "component,re,im\n";
    for (std::size_t p = 0; p < g.size(); ++p) {
        for (std::size_t c = 0; c < f.components(); ++c) {
            for (std::size_t a = 0; a < g.rank(); ++a) s << num(g.coordinate(p, a)) << ',';
            const Complex v = f.value(p, c);
            s << c << ',' << num(v.real()) << ',' << num(v.imag()) << '\n';
        }
    }
    return s.str();
}

struct Config {
    fs::path outDir = "fracflux-out";
    std::uint64_t seed = 1;
    double toleranceScale = 1.0;
    std::vector<std::string> experiments;
    json sections = json::object();
};

Config parseConfig(const std::string& path) {
    std::ifstream in(path);
    require(static_cast<bool>(in), ErrorCode::Parse, "cannot read config file " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::Parse, std::string("config: ") + e.what());
    }
    require(j.is_object(), ErrorCode::Parse, "config must be a JSON object");
    Config c;
    try {
        c.outDir = j.value("output_dir", std::string("fracflux-out"));
        c.seed = j.value("seed", std::uint64_t{1});
        c.toleranceScale = j.value("tolerance_scale", 1.0);
        if (j.contains("experiments")) c.experiments = j.at("experiments").get<std::vector<std::string>>();
    } catch (const json::exception& e) {
        throw Error(ErrorCode::Parse, std::string("config: ") + e.what());
    }
    require(c.toleranceScale >= 0.0, ErrorCode::Parse, "tolerance_scale must be non-negative");
    for (const auto& info : experimentTable())
        if (j.contains(info.name)) {
            require(j.at(info.name).is_object(), ErrorCode::Parse, "section " + info.name + " must be an object");
            c.sections[info.name] = j.at(info.name);
        }
    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string& key = it.key();
        const bool known = key == "output_dir" || key == "seed" || key == "tolerance_scale" || key == "experiments" ||
                           std::any_of(experimentTable().begin(), experimentTable().end(),
                                       [&](const ExperimentInfo& e) { return e.name == key; });
        require(known, ErrorCode::Parse, "unknown config key " + key);
    }
    if (c.experiments.empty())
        for (const auto& info : experimentTable()) c.experiments.push_back(info.name);
    for (const auto& name : c.experiments)
        require(std::any_of(experimentTable().begin(), experimentTable().end(),
                            [&](const ExperimentInfo& e) { return e.name == name; }),
                ErrorCode::Parse, "unknown experiment " + name);
    return c;
}

}  // namespace

Context::Context(std::string experiment, json settings, std::uint64_t seed, double toleranceScale)
    : experiment_(std::move(experiment)), settings_(std::move(settings)), seed_(seed), toleranceScale_(toleranceScale) {
    if (settings_.is_null()) settings_ = json::object();
}

double Context::number(const std::string& key, double fallback) const {
    if (!settings_.contains(key)) return fallback;
    require(settings_.at(key).is_number(), ErrorCode::Parse, experiment_ + "." + key + " must be a number");
    return settings_.at(key).get<double>();
}

std::vector<double> Context::numbers(const std::string& key, std::vector<double> fallback) const {
    if (!settings_.contains(key)) return fallback;
    try {
        return settings_.at(key).get<std::vector<double>>();
    } catch (const json::exception&) {
        throw Error(ErrorCode::Parse, experiment_ + "." + key + " must be a list of numbers");
    }
}

std::vector<std::size_t> Context::sizes(const std::string& key, std::vector<std::size_t> fallback) const {
    std::vector<std::size_t> v = fallback;
    if (settings_.contains(key)) {
        try {
            v = settings_.at(key).get<std::vector<std::size_t>>();
        } catch (const json::exception&) {
            throw Error(ErrorCode::Parse, experiment_ + "." + key + " must be a list of positive integers");
        }
    }
    require(v.size() >= 2, ErrorCode::Parse, experiment_ + "." + key + " needs at least two refinement levels");
    require(std::is_sorted(v.begin(), v.end()) && std::adjacent_find(v.begin(), v.end()) == v.end(),
            ErrorCode::Parse, experiment_ + "." + key + " must increase strictly");
    return v;
}

std::string Context::text(const std::string& key, const std::string& fallback) const {
    if (!settings_.contains(key)) return fallback;
    require(settings_.at(key).is_string(), ErrorCode::Parse, experiment_ + "." + key + " must be a string");
    return settings_.at(key).get<std::string>();
}

void Context::atMost(ExperimentOutput& out, const std::string& caseId, const std::string& check, double value,
                     double threshold, int criterion, const std::string& note) const {
    const double t = threshold * toleranceScale_;
    out.checks.push_back({experiment_, caseId, check, value, t, Comparison::AtMost, criterion,
                          std::isfinite(value) && value <= t, note});
}

void Context::atLeast(ExperimentOutput& out, const std::string& caseId, const std::string& check, double value,
                      double threshold, int criterion, const std::string& note) const {
    out.checks.push_back({experiment_, caseId, check, value, threshold, Comparison::AtLeast, criterion,
                          toleranceScale_ > 0.0 && !std::isnan(value) && value >= threshold, note});
}

void Context::report(ExperimentOutput& out, const std::string& caseId, const std::string& check, double value,
                     const std::string& note) const {
    out.checks.push_back({experiment_, caseId, check, value, 0.0, Comparison::Report, 0, true, note});
}

void Context::addRows(ExperimentOutput& out, const std::string& caseId, const ResidualReport& r, double threshold,
                      bool pass, std::optional<double> alpha, std::optional<double> gammaSplit) const {
    for (std::size_t i = 0; i < r.resolutions.size(); ++i) {
        ResultRow row;
        row.experiment = experiment_;
        row.caseId = caseId;
        row.alpha = alpha;
        row.gammaSplit = gammaSplit;
        row.resolution = r.resolutions[i];
        row.residualMax = r.maxNorm[i];
        row.residualL2 = r.l2Norm[i];
        if (i > 0)
            row.fittedOrder = observedOrder(r.maxNorm[i - 1], r.maxNorm[i], static_cast<double>(r.resolutions[i - 1]),
                                            static_cast<double>(r.resolutions[i]));
        row.threshold = threshold * toleranceScale_;
        row.status = pass ? "PASS" : "FAIL";
        out.rows.push_back(row);
    }
}

bool Context::gateReport(ExperimentOutput& out, const std::string& caseId, const ResidualReport& r,
                         double threshold, double minOrder, int criterion, std::optional<double> alpha,
                         std::optional<double> gammaSplit) const {
    const std::size_t before = out.checks.size();
    if (threshold > 0.0) atMost(out, caseId, "finest residual", r.finestMax(), threshold, criterion);
    if (minOrder > 0.0) {
        const double order = r.atRoundoff ? std::numeric_limits<double>::infinity() : r.order;
        atLeast(out, caseId, "observed order", order, minOrder, criterion, r.atRoundoff ? "round-off" : "");
    }
    bool pass = true;
    for (std::size_t i = before; i < out.checks.size(); ++i) pass = pass && out.checks[i].pass;
    addRows(out, caseId, r, threshold, pass, alpha, gammaSplit);
    return pass;
}

bool Context::gateDecreasing(ExperimentOutput& out, const std::string& caseId, const ResidualReport& r,
                             int criterion) const {
    double ratio = 0.0;
    if (!r.atRoundoff)
        for (std::size_t i = 1; i < r.maxNorm.size(); ++i) ratio = std::max(ratio, r.maxNorm[i] / r.maxNorm[i - 1]);
    const bool pass = toleranceScale_ > 0.0 && std::isfinite(ratio) && ratio < 1.0;
    out.checks.push_back({experiment_, caseId, "largest refinement ratio", ratio, 1.0, Comparison::AtMost, criterion,
                          pass, r.atRoundoff ? "round-off" : ""});
    return pass;
}

const std::vector<ExperimentInfo>& experimentTable() {
    static const std::vector<ExperimentInfo> table = {
        {"verify-ops", "power rule, composition rules, Grunwald-Letnikov oracle", verifyOps},
        {"verify-leibniz", "convolution Leibniz rules, Lemma, shifted operators", verifyLeibniz},
        {"ml-accuracy", "Mittag-Leffler identities and crossover continuity", mlAccuracy},
        {"diffusion-1d", "fractional diffusion in 1+1: modes, Green's function, t^(-alpha/2)", diffusion1d},
        {"diffusion-dd", "fractional diffusion in d+1: mass, spectral vs Green, rotations", diffusionDd},
        {"currents", "Gamma operators, stationarity and conservation laws", currents},
        {"charges", "stationary and conserved charges", charges},
        {"general-operator", "telescoping identity for general and sequential operators", generalOperator},
    };
    return table;
}

std::string listExperiments(const std::string& filter) {
    std::ostringstream s;
    for (const auto& e : experimentTable())
        if (filter.empty() || e.name.find(filter) != std::string::npos || e.anchor.find(filter) != std::string::npos)
            s << e.name << '\t' << e.anchor << '\n';
    return s.str();
}

RunResult run(const RunOptions& options) {
    RunResult result;
    if (const char* threads = std::getenv("FRACFLUX_THREADS")) {
        const int n = std::atoi(threads);
        if (n > 0) omp_set_num_threads(n);
    }
    Config config;
    try {
        config = parseConfig(options.configPath);
        if (options.outDir) config.outDir = *options.outDir;
        if (options.seed) config.seed = *options.seed;
        if (options.only) {
            require(std::any_of(experimentTable().begin(), experimentTable().end(),
                                [&](const ExperimentInfo& e) { return e.name == *options.only; }),
                    ErrorCode::Parse, "unknown experiment " + *options.only);
            config.experiments = {*options.only};
        }
    } catch (const Error& e) {
        result.exitCode = e.code() == ErrorCode::Io ? 3 : 2;
        result.message = e.what();
        return result;
    }

    ExperimentOutput all;
    try {
        for (const auto& info : experimentTable()) {
            if (std::find(config.experiments.begin(), config.experiments.end(), info.name) == config.experiments.end())
                continue;
            const Context ctx(info.name, config.sections.value(info.name, json::object()), config.seed,
                              config.toleranceScale);
            ExperimentOutput out;
            try {
                out = info.run(ctx);
            } catch (const Error& e) {
                if (e.code() == ErrorCode::Parse || e.code() == ErrorCode::Io) throw;
                out.checks.push_back({info.name, "-", "error", 0.0, 0.0, Comparison::AtMost, 0, false, e.what()});
            }
            for (auto& d : out.dumps) {
                all.dumps.push_back({info.name + "/" + d.caseId, std::move(d.field)});
            }
            all.rows.insert(all.rows.end(), out.rows.begin(), out.rows.end());
            all.checks.insert(all.checks.end(), out.checks.begin(), out.checks.end());
        }
    } catch (const Error& e) {
        result.exitCode = e.code() == ErrorCode::Io ? 3 : 2;
        result.message = e.what();
        return result;
    }

    try {
        std::error_code ec;
        fs::create_directories(config.outDir, ec);
        require(!ec && fs::is_directory(config.outDir), ErrorCode::Io,
                "cannot create output directory " + config.outDir.string());
        writeFile(config.outDir / "results.csv", resultsCsv(all.rows));
        writeFile(config.outDir / "summary.csv", summaryCsv(all.checks));
        for (const auto& d : all.dumps) {
            const auto slash = d.caseId.find('/');
            const fs::path dir = config.outDir / d.caseId.substr(0, slash) / safeName(d.caseId.substr(slash + 1));
            fs::create_directories(dir, ec);
            require(!ec, ErrorCode::Io, "cannot create " + dir.string());
            writeFile(dir / "field.csv", fieldCsv(d.field));
        }
    } catch (const Error& e) {
        result.exitCode = 3;
        result.message = e.what();
        return result;
    }

    result.checks = all.checks;
    const bool ok = std::all_of(all.checks.begin(), all.checks.end(), [](const CheckRow& c) { return c.pass; });
    result.exitCode = ok ? 0 : 1;
    result.message = ok ? "all gated checks passed" : "some gated checks failed";
    return result;
}

}  // namespace fracflux::cli

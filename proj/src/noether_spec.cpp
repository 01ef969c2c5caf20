#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "fracflux/error.hpp"
#include "fracflux/noether.hpp"
#include "json.hpp"

namespace fracflux {

using nlohmann::json;

Coefficient Coefficient::scalar(double value) { return {1, {value}}; }

Coefficient Coefficient::matrix(std::size_t n, std::vector<double> rowMajor) {
    require(n >= 1 && rowMajor.size() == n * n, ErrorCode::ShapeMismatch, "matrix coefficient needs n*n entries");
    return {n, std::move(rowMajor)};
}

bool Coefficient::isZero() const {
    return std::all_of(entries.begin(), entries.end(), [](double v) { return v == 0.0; });
}

double Coefficient::at(std::size_t a, std::size_t b) const {
    if (isScalar()) return a == b ? entries[0] : 0.0;
    return entries[a * size + b];
}

Coefficient Coefficient::operator*(double factor) const {
    Coefficient c = *this;
    for (auto& v : c.entries) v *= factor;
    return c;
}

namespace {

Coefficient sum(const Coefficient& a, const Coefficient& b) {
    if (a.size == b.size) {
        Coefficient c = a;
        for (std::size_t i = 0; i < c.entries.size(); ++i) c.entries[i] += b.entries[i];
        return c;
    }
    const std::size_t n = std::max(a.size, b.size);
    Coefficient c = Coefficient::matrix(n, std::vector<double>(n * n, 0.0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) c.entries[i * n + j] = a.at(i, j) + b.at(i, j);
    return c;
}

struct WordTerm {
    Word word;
    Coefficient coeff;
};

// Coefficients per exact ordering, then spread evenly over every distinct
// ordering of the same atoms. Orderings given with different coefficients are
// rejected.
std::vector<WordTerm> symmetrize(const std::vector<WordTerm>& terms) {
    std::map<Word, Coefficient> given;
    for (const auto& t : terms) {
        auto it = given.find(t.word);
        if (it == given.end()) given.emplace(t.word, t.coeff);
        else it->second = sum(it->second, t.coeff);
    }
    std::map<Word, const Coefficient*> groupCoeff;
    for (const auto& [word, coeff] : given) {
        Word key = word;
        std::sort(key.begin(), key.end());
        auto it = groupCoeff.find(key);
        if (it == groupCoeff.end()) {
            groupCoeff.emplace(key, &coeff);
            continue;
        }
        require(*it->second == coeff, ErrorCode::Precondition,
                "coefficients of " + toString(word) + " are not symmetric under permutation of the word");
    }
    std::map<Word, Coefficient> out;
    for (const auto& [word, coeff] : given) {
        Word perm = word;
        std::sort(perm.begin(), perm.end());
        std::vector<Word> perms;
        do perms.push_back(perm);
        while (std::next_permutation(perm.begin(), perm.end()));
        const Coefficient share = coeff * (1.0 / static_cast<double>(perms.size()));
        for (auto& p : perms) {
            auto it = out.find(p);
            if (it == out.end()) out.emplace(std::move(p), share);
            else it->second = sum(it->second, share);
        }
    }
    std::vector<WordTerm> result;
    for (auto& [word, coeff] : out) result.push_back({word, coeff});
    return result;
}

std::vector<WordTerm> fractionalWords(const OperatorSpec& spec) {
    std::vector<WordTerm> w;
    for (const auto& t : spec.fractionalTerms) w.push_back({t.word, t.coeff});
    return w;
}

std::vector<WordTerm> classicalWords(const OperatorSpec& spec) {
    std::vector<WordTerm> w;
    for (const auto& t : spec.classicalTerms) {
        Word word;
        for (std::size_t a : t.mu) word.push_back(Atom::classical(a));
        w.push_back({word, t.coeff});
    }
    return w;
}

std::vector<GammaComponent> split(const std::vector<WordTerm>& terms) {
    std::map<Atom, std::map<std::pair<Word, Word>, Coefficient>> acc;
    for (const auto& t : symmetrize(terms)) {
        const Word& w = t.word;
        for (std::size_t i = 0; i < w.size(); ++i) {
            Word left(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(i));
            std::reverse(left.begin(), left.end());
            Word right(w.begin() + static_cast<std::ptrdiff_t>(i) + 1, w.end());
            double factor = i % 2 == 0 ? 1.0 : -1.0;
            if (w[i].fractional) factor *= 2.0;
            auto& slot = acc[w[i]];
            const auto key = std::make_pair(std::move(left), std::move(right));
            auto it = slot.find(key);
            if (it == slot.end()) slot.emplace(key, t.coeff * factor);
            else it->second = sum(it->second, t.coeff * factor);
        }
    }
    std::vector<GammaComponent> out;
    for (auto& [atom, terms2] : acc) {
        GammaComponent c{atom, {}};
        for (auto& [key, coeff] : terms2)
            if (!coeff.isZero()) c.form.terms.push_back({key.first, key.second, coeff});
        out.push_back(std::move(c));
    }
    return out;
}

json coeffToJson(const Coefficient& c) {
    if (c.isScalar()) return c.entries[0];
    return c.entries;
}

Coefficient coeffFromJson(const json& j) {
    if (j.is_number()) return Coefficient::scalar(j.get<double>());
    require(j.is_array(), ErrorCode::Parse, "coefficient must be a number or an array");
    std::vector<double> v;
    for (const auto& e : j) {
        if (e.is_array())
            for (const auto& x : e) v.push_back(x.get<double>());
        else
            v.push_back(e.get<double>());
    }
    const auto n = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(v.size()))));
    require(n * n == v.size() && n >= 1, ErrorCode::Parse, "matrix coefficient must have n*n entries");
    return Coefficient::matrix(n, std::move(v));
}

json axisToJson(const AxisSpec& a) {
    json j;
    j["role"] = toString(a.role);
    j["extent"] = a.length;
    j["nodes"] = a.nodes;
    if (a.isFractional()) j["grading"] = a.grading;
    else j["topology"] = toString(a.topology);
    return j;
}

AxisSpec axisFromJson(const json& j) {
    const std::string role = j.at("role").get<std::string>();
    const double extent = j.at("extent").get<double>();
    const auto nodes = j.at("nodes").get<std::size_t>();
    if (role == "fractional") return AxisSpec::fractional(extent, nodes, j.value("grading", 1.0));
    require(role == "classical", ErrorCode::Parse, "axis role must be fractional or classical");
    const std::string topo = j.value("topology", std::string("periodic"));
    if (topo == "periodic") return AxisSpec::periodic(extent, nodes);
    require(topo == "truncated-line", ErrorCode::Parse, "classical topology must be periodic or truncated-line");
    return AxisSpec::truncatedLine(extent, nodes);
}

}  // namespace

std::string toString(const Word& word) {
    if (word.empty()) return "1";
    std::ostringstream s;
    for (std::size_t i = 0; i < word.size(); ++i) {
        if (i) s << ' ';
        if (word[i].fractional) s << "D^" << word[i].order << "_" << word[i].axis;
        else s << "d_" << word[i].axis;
    }
    return s.str();
}

std::size_t OperatorSpec::components() const {
    std::size_t c = constantTerm.size;
    for (const auto& t : fractionalTerms) c = std::max(c, t.coeff.size);
    for (const auto& t : classicalTerms) c = std::max(c, t.coeff.size);
    return c;
}

void OperatorSpec::validate() const {
    require(!axes.empty(), ErrorCode::Precondition, "operator spec needs axes");
    for (const auto& a : axes) a.validate();
    const std::size_t c = components();
    auto checkCoeff = [c](const Coefficient& k) {
        require(k.isScalar() || k.size == c, ErrorCode::ShapeMismatch, "matrix coefficients must share one size");
        require(k.entries.size() == k.size * k.size, ErrorCode::ShapeMismatch, "malformed coefficient");
        for (double v : k.entries) require(std::isfinite(v), ErrorCode::Domain, "coefficient is not finite");
    };
    checkCoeff(constantTerm);
    for (const auto& t : fractionalTerms) {
        require(!t.word.empty(), ErrorCode::Precondition, "fractional term with an empty word");
        checkCoeff(t.coeff);
        for (const auto& atom : t.word) {
            require(atom.fractional, ErrorCode::AxisRole, "fractional words cannot contain classical derivatives");
            require(atom.axis < axes.size() && axes[atom.axis].isFractional(), ErrorCode::AxisRole,
                    "fractional word refers to an axis that is not fractional");
            require(atom.order > 0.0 && atom.order < kMaxDerivativeOrder, ErrorCode::Domain,
                    "fractional orders must lie in (0, 2)");
        }
    }
    for (const auto& t : classicalTerms) {
        require(!t.mu.empty(), ErrorCode::Precondition, "classical term with an empty multi-index");
        checkCoeff(t.coeff);
        for (std::size_t a : t.mu)
            require(a < axes.size() && !axes[a].isFractional(), ErrorCode::AxisRole,
                    "classical multi-index refers to an axis that is not classical");
    }
    symmetrize(fractionalWords(*this));
    symmetrize(classicalWords(*this));
}

void OperatorSpec::requireCompatible(const Grid& grid) const {
    require(grid.rank() == axes.size(), ErrorCode::GridMismatch, "grid rank differs from the operator spec");
    for (std::size_t a = 0; a < axes.size(); ++a) {
        require(grid.axis(a).role == axes[a].role && grid.axis(a).topology == axes[a].topology,
                ErrorCode::GridMismatch, "grid axis roles or topologies differ from the operator spec");
    }
}

OperatorSpec OperatorSpec::diffusion(double alpha, double diffusivity, std::vector<AxisSpec> axes) {
    OperatorSpec s;
    s.axes = std::move(axes);
    require(!s.axes.empty() && s.axes[0].isFractional(), ErrorCode::AxisRole,
            "diffusion spec needs the fractional time axis first");
    s.fractionalTerms.push_back({{Atom::frac(0, alpha)}, Coefficient::scalar(1.0)});
    for (std::size_t a = 1; a < s.axes.size(); ++a) s.classicalTerms.push_back({{a, a}, Coefficient::scalar(-diffusivity)});
    s.validate();
    return s;
}

OperatorSpec parseOperatorSpec(const std::string& text) {
    OperatorSpec s;
    try {
        const json j = json::parse(text);
        for (const auto& a : j.at("axes")) s.axes.push_back(axisFromJson(a));
        for (const auto& t : j.value("fractional_terms", json::array())) {
            FractionalTerm ft;
            for (const auto& atom : t.at("word")) {
                require(atom.is_array() && atom.size() == 2, ErrorCode::Parse, "word atoms are [axis, order] pairs");
                ft.word.push_back(Atom::frac(atom[0].get<std::size_t>(), atom[1].get<double>()));
            }
            ft.coeff = coeffFromJson(t.at("coeff"));
            s.fractionalTerms.push_back(std::move(ft));
        }
        for (const auto& t : j.value("classical_terms", json::array())) {
            ClassicalTerm ct;
            ct.mu = t.at("mu").get<std::vector<std::size_t>>();
            ct.coeff = coeffFromJson(t.at("coeff"));
            s.classicalTerms.push_back(std::move(ct));
        }
        s.constantTerm = coeffFromJson(j.value("constant_term", json(0.0)));
    } catch (const json::exception& e) {
        throw Error(ErrorCode::Parse, std::string("operator spec: ") + e.what());
    }
    s.validate();
    return s;
}

std::string serializeOperatorSpec(const OperatorSpec& spec) {
    json j;
    j["axes"] = json::array();
    for (const auto& a : spec.axes) j["axes"].push_back(axisToJson(a));
    j["fractional_terms"] = json::array();
    for (const auto& t : spec.fractionalTerms) {
        json word = json::array();
        for (const auto& atom : t.word) word.push_back({atom.axis, atom.order});
        j["fractional_terms"].push_back({{"word", word}, {"coeff", coeffToJson(t.coeff)}});
    }
    j["classical_terms"] = json::array();
    for (const auto& t : spec.classicalTerms)
        j["classical_terms"].push_back({{"mu", t.mu}, {"coeff", coeffToJson(t.coeff)}});
    j["constant_term"] = coeffToJson(spec.constantTerm);
    return j.dump(2);
}

OperatorSpec loadOperatorSpec(const std::string& path) {
    std::ifstream in(path);
    require(static_cast<bool>(in), ErrorCode::Io, "cannot open operator spec " + path);
    std::ostringstream s;
    s << in.rdbuf();
    return parseOperatorSpec(s.str());
}

GammaSet buildGamma(const OperatorSpec& spec) {
    spec.validate();
    return {split(fractionalWords(spec)), split(classicalWords(spec))};
}

}  // namespace fracflux

#include "flexsat/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <Eigen/Geometry>

#include "flexsat/errors.hpp"
#include "flexsat/fig2_preset.hpp"
#include "flexsat/state.hpp"

namespace flexsat {
namespace {

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

struct Entry {
    std::string value;
    int line = 0;
};

struct Section {
    int line = 0;
    std::map<std::string, Entry, std::less<>> entries;
};

const std::map<std::string, std::set<std::string, std::less<>>, std::less<>>& schema() {
    static const std::map<std::string, std::set<std::string, std::less<>>, std::less<>> keys = {
        {"body", {"I1", "I2", "I3", "frozen_inertia"}},
        {"plate1", {"l1", "l2", "d", "d1", "d2", "d3", "rho", "a", "a2", "young", "poisson", "thickness", "modes"}},
        {"plate2", {"l1", "l2", "d", "d1", "d2", "d3", "rho", "a", "a2", "young", "poisson", "thickness", "modes"}},
        {"gains", {"k", "alpha", "alpha1", "alpha2", "alpha3"}},
        {"integration", {"dt", "t_final", "mode", "rel_tol", "min_step", "max_step", "sample_every",
                         "stop_fraction", "renormalize"}},
        {"initial", {"attitude", "gtilde", "omega", "q1", "q2", "qdot1", "qdot2", "state"}},
        {"output", {"dir", "prefix", "plot"}},
    };
    return keys;
}

class Document {
public:
    Document(std::string_view text, std::string source) : source_(std::move(source)) {
        std::string current;
        int line_no = 0;
        std::istringstream in{std::string(text)};
        std::string raw;
        while (std::getline(in, raw)) {
            ++line_no;
            std::string_view line = raw;
            if (const auto c = line.find('#'); c != std::string_view::npos) line = line.substr(0, c);
            line = trim(line);
            if (line.empty()) continue;
            if (line.front() == '[') {
                if (line.back() != ']') fail(line_no, "malformed section header");
                current = std::string(trim(line.substr(1, line.size() - 2)));
                if (!schema().contains(current)) fail(line_no, "unknown section [" + current + "]");
                if (sections_.contains(current)) fail(line_no, "duplicate section [" + current + "]");
                sections_[current].line = line_no;
                continue;
            }
            const auto eq = line.find('=');
            if (eq == std::string_view::npos) fail(line_no, "expected 'key = value'");
            if (current.empty()) fail(line_no, "key outside of any section");
            const std::string key(trim(line.substr(0, eq)));
            if (!schema().at(current).contains(key)) fail(line_no, "unknown key '" + key + "' in [" + current + "]");
            auto& entries = sections_[current].entries;
            if (entries.contains(key)) fail(line_no, "duplicate key '" + key + "'");
            entries[key] = Entry{std::string(trim(line.substr(eq + 1))), line_no};
        }
    }

    [[noreturn]] void fail(int line, const std::string& msg) const {
        throw ConfigError(source_ + ":" + std::to_string(line) + ": " + msg);
    }
    [[noreturn]] void fail(std::string_view section, std::string_view key, const std::string& msg) const {
        const Entry* e = find(section, key);
        const int line = e ? e->line : section_line(section);
        throw ConfigError(source_ + ":" + std::to_string(line) + ": [" + std::string(section) + "] " +
                          std::string(key) + ": " + msg);
    }

    bool has_section(std::string_view s) const { return sections_.contains(std::string(s)); }
    int section_line(std::string_view s) const {
        const auto it = sections_.find(s);
        return it == sections_.end() ? 0 : it->second.line;
    }
    const Entry* find(std::string_view section, std::string_view key) const {
        const auto s = sections_.find(section);
        if (s == sections_.end()) return nullptr;
        const auto e = s->second.entries.find(key);
        return e == s->second.entries.end() ? nullptr : &e->second;
    }
    bool has(std::string_view section, std::string_view key) const { return find(section, key) != nullptr; }

    const Entry& require(std::string_view section, std::string_view key) const {
        if (!has_section(section)) throw ConfigError(source_ + ": missing section [" + std::string(section) + "]");
        const Entry* e = find(section, key);
        if (!e) fail(section, key, "missing required key");
        return *e;
    }

    double parse_real(std::string_view section, std::string_view key, std::string_view token) const {
        token = trim(token);
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
        if (token.empty() || ec != std::errc{} || ptr != token.data() + token.size() || !std::isfinite(v))
            fail(section, key, "expected a real number, got '" + std::string(token) + "'");
        return v;
    }

    std::vector<double> parse_list(std::string_view section, std::string_view key, std::string_view text) const {
        std::vector<double> out;
        std::string_view rest = trim(text);
        if (rest.empty()) return out;
        while (true) {
            const auto comma = rest.find(',');
            out.push_back(parse_real(section, key, rest.substr(0, comma)));
            if (comma == std::string_view::npos) break;
            rest.remove_prefix(comma + 1);
        }
        return out;
    }

    double real(std::string_view section, std::string_view key) const {
        return parse_real(section, key, require(section, key).value);
    }
    double real_or(std::string_view section, std::string_view key, double fallback) const {
        const Entry* e = find(section, key);
        return e ? parse_real(section, key, e->value) : fallback;
    }
    std::vector<double> list(std::string_view section, std::string_view key, std::size_t expect = 0) const {
        auto v = parse_list(section, key, require(section, key).value);
        if (expect && v.size() != expect)
            fail(section, key, "expected " + std::to_string(expect) + " comma-separated values, got " +
                                   std::to_string(v.size()));
        return v;
    }
    std::string text_or(std::string_view section, std::string_view key, std::string fallback) const {
        const Entry* e = find(section, key);
        return e ? e->value : fallback;
    }
    bool boolean_or(std::string_view section, std::string_view key, bool fallback) const {
        const Entry* e = find(section, key);
        if (!e) return fallback;
        if (e->value == "true" || e->value == "yes" || e->value == "1") return true;
        if (e->value == "false" || e->value == "no" || e->value == "0") return false;
        fail(section, key, "expected true/false, got '" + e->value + "'");
    }

    const std::string& source() const { return source_; }

private:
    std::string source_;
    std::map<std::string, Section, std::less<>> sections_;
};

// Runs a validator and re-raises its ParameterError against a config key.
template <class Fn>
void guarded(const Document& doc, std::string_view section, std::string_view key, Fn&& fn) {
    try {
        fn();
    } catch (const ParameterError& e) {
        doc.fail(section, key, e.what());
    }
}

void require_positive(const Document& doc, std::string_view section, std::string_view key, double v) {
    if (!(v > 0.0)) doc.fail(section, key, "must be > 0 (got " + std::to_string(v) + ")");
}

BodyInertia read_body(const Document& doc) {
    BodyInertia body;
    const char* keys[] = {"I1", "I2", "I3"};
    for (int i = 0; i < 3; ++i) {
        body.principal[i] = doc.real("body", keys[i]);
        require_positive(doc, "body", keys[i], body.principal[i]);
    }
    return body;
}

std::optional<Mat3> read_frozen_override(const Document& doc) {
    const std::string v = doc.text_or("body", "frozen_inertia", "geometric");
    if (v == "geometric") return std::nullopt;
    if (v == "identity") return Mat3::Identity();
    const auto values = doc.list("body", "frozen_inertia", 9);
    Mat3 j;
    for (int i = 0; i < 9; ++i) j(i / 3, i % 3) = values[static_cast<std::size_t>(i)];
    if ((j - j.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, j.cwiseAbs().maxCoeff()))
        doc.fail("body", "frozen_inertia", "override must be symmetric");
    return j;
}

PlateSpec read_plate(const Document& doc, const std::string& s) {
    PlateSpec p;
    p.length_x1 = doc.real(s, "l1");
    require_positive(doc, s, "l1", p.length_x1);
    p.length_x2 = doc.real(s, "l2");
    require_positive(doc, s, "l2", p.length_x2);

    if (doc.has(s, "d")) {
        if (doc.has(s, "d1") || doc.has(s, "d2") || doc.has(s, "d3")) doc.fail(s, "d", "give either d or d1/d2/d3");
        const auto d = doc.list(s, "d", 3);
        p.offset = Vec3(d[0], d[1], d[2]);
    } else {
        p.offset = Vec3(doc.real_or(s, "d1", 0.0), doc.real_or(s, "d2", 0.0), doc.real_or(s, "d3", 0.0));
    }

    p.area_density = doc.real(s, "rho");
    require_positive(doc, s, "rho", p.area_density);

    const bool material = doc.has(s, "young") || doc.has(s, "poisson") || doc.has(s, "thickness");
    const int forms = int(doc.has(s, "a")) + int(doc.has(s, "a2")) + int(material);
    if (forms != 1) doc.fail(s, "a", "give exactly one of a, a2, or young/poisson/thickness");
    if (doc.has(s, "a")) {
        const double a = doc.real(s, "a");
        require_positive(doc, s, "a", a);
        p.stiffness = a * a;
    } else if (doc.has(s, "a2")) {
        p.stiffness = doc.real(s, "a2");
        require_positive(doc, s, "a2", p.stiffness);
    } else {
        guarded(doc, s, "young", [&] {
            p.stiffness = stiffness_from_material(doc.real(s, "young"), doc.real(s, "poisson"),
                                                  doc.real(s, "thickness"), p.area_density);
        });
    }
    return p;
}

std::vector<ModeIndex> read_modes(const Document& doc, const std::string& s) {
    std::vector<ModeIndex> grid{{1, 1}};
    if (const Entry* e = doc.find(s, "modes")) {
        guarded(doc, s, "modes", [&] {
            grid = parse_mode_grid(e->value);
            build_basis(PlateSpec{}, grid); // rejects duplicates / bad indices
        });
    }
    return grid;
}

Gains read_gains(const Document& doc, std::vector<double>& k_values) {
    Gains g;
    k_values = doc.list("gains", "k");
    if (k_values.empty()) doc.fail("gains", "k", "needs at least one value");
    for (double k : k_values) require_positive(doc, "gains", "k", k);
    g.damping = k_values.front();

    if (doc.has("gains", "alpha")) {
        const auto a = doc.list("gains", "alpha", 3);
        g.attitude = Vec3(a[0], a[1], a[2]);
        for (double v : a) require_positive(doc, "gains", "alpha", v);
    } else {
        const char* keys[] = {"alpha1", "alpha2", "alpha3"};
        for (int i = 0; i < 3; ++i) {
            g.attitude[i] = doc.real("gains", keys[i]);
            require_positive(doc, "gains", keys[i], g.attitude[i]);
        }
    }
    return g;
}

IntegrationConfig read_integration(const Document& doc, RunConfig& cfg) {
    const std::string s = "integration";
    IntegrationConfig ic;
    ic.step = doc.real_or(s, "dt", ic.step);
    require_positive(doc, s, "dt", ic.step);
    ic.t_final = doc.real_or(s, "t_final", ic.t_final);
    require_positive(doc, s, "t_final", ic.t_final);
    if (ic.step > ic.t_final) doc.fail(s, "dt", "must not exceed t_final");

    const std::string mode = doc.text_or(s, "mode", "fixed");
    if (mode == "fixed") ic.mode = StepMode::fixed;
    else if (mode == "adaptive") ic.mode = StepMode::adaptive;
    else doc.fail(s, "mode", "expected 'fixed' or 'adaptive', got '" + mode + "'");
    ic.rel_tol = doc.real_or(s, "rel_tol", ic.rel_tol);
    require_positive(doc, s, "rel_tol", ic.rel_tol);
    ic.min_step = doc.real_or(s, "min_step", ic.min_step);
    require_positive(doc, s, "min_step", ic.min_step);
    ic.max_step = doc.real_or(s, "max_step", ic.max_step);
    if (!(ic.max_step >= ic.min_step)) doc.fail(s, "max_step", "must be >= min_step");

    const double every = doc.real_or(s, "sample_every", 1.0);
    if (every < 1.0 || every != std::floor(every)) doc.fail(s, "sample_every", "must be a positive integer");
    ic.sample_every = static_cast<int>(every);

    cfg.stop_fraction = doc.real_or(s, "stop_fraction", cfg.stop_fraction);
    if (!(cfg.stop_fraction >= 0.0 && cfg.stop_fraction < 1.0)) doc.fail(s, "stop_fraction", "must be in [0, 1)");
    cfg.renormalize_attitude = doc.boolean_or(s, "renormalize", false);
    return ic;
}

InitialSpec read_initial(const Document& doc) {
    const std::string s = "initial";
    InitialSpec init;
    if (!doc.has_section(s)) return init;

    if (doc.has(s, "state")) {
        for (const char* other : {"attitude", "gtilde", "omega", "q1", "q2", "qdot1", "qdot2"})
            if (doc.has(s, other)) doc.fail(s, other, "cannot be combined with 'state'");
        init.explicit_state = doc.list(s, "state");
        return init;
    }

    if (doc.has(s, "attitude") && doc.has(s, "gtilde")) doc.fail(s, "gtilde", "give either attitude or gtilde");
    if (doc.has(s, "gtilde")) {
        const auto g = doc.list(s, "gtilde", 9);
        std::copy(g.begin(), g.end(), init.attitude_error.begin());
    } else if (const Entry* e = doc.find(s, "attitude")) {
        std::string_view v = trim(e->value);
        Mat3 rows = Mat3::Identity();
        if (v == "identity") {
        } else if (v.starts_with("rows")) {
            const auto r = doc.parse_list(s, "attitude", v.substr(4));
            if (r.size() != 9) doc.fail(s, "attitude", "'rows' needs 9 comma-separated values");
            for (int i = 0; i < 9; ++i) rows(i / 3, i % 3) = r[static_cast<std::size_t>(i)];
        } else if (v.starts_with("axis_angle")) {
            const auto r = doc.parse_list(s, "attitude", v.substr(10));
            if (r.size() != 4) doc.fail(s, "attitude", "'axis_angle' needs ax, ay, az, angle");
            const Vec3 axis(r[0], r[1], r[2]);
            if (!(axis.norm() > 0.0)) doc.fail(s, "attitude", "rotation axis must be non-zero");
            rows = axis_angle_attitude(axis.normalized(), r[3]);
        } else {
            doc.fail(s, "attitude", "expected identity, rows <9 values> or axis_angle <ax,ay,az,angle>");
        }
        try {
            check_rotation(rows);
        } catch (const ConfigError& err) {
            doc.fail(s, "attitude", err.what());
        }
        const Mat3 tilde = rows - Mat3::Identity();
        for (int i = 0; i < 9; ++i) init.attitude_error[static_cast<std::size_t>(i)] = tilde(i / 3, i % 3);
    }
    if (doc.has(s, "omega")) {
        const auto w = doc.list(s, "omega", 3);
        init.angular_velocity = Vec3(w[0], w[1], w[2]);
    }
    const char* qkeys[] = {"q1", "q2"};
    const char* vkeys[] = {"qdot1", "qdot2"};
    for (std::size_t p = 0; p < 2; ++p) {
        if (doc.has(s, qkeys[p])) init.modal_amplitudes[p] = doc.list(s, qkeys[p]);
        if (doc.has(s, vkeys[p])) init.modal_rates[p] = doc.list(s, vkeys[p]);
    }
    return init;
}

OutputSpec read_output(const Document& doc) {
    OutputSpec out;
    out.dir = doc.text_or("output", "dir", out.dir.string());
    out.prefix = doc.text_or("output", "prefix", out.prefix);
    if (out.prefix.empty() || out.prefix.find('/') != std::string::npos)
        doc.fail("output", "prefix", "must be a non-empty file name stem");
    out.plot = doc.boolean_or("output", "plot", out.plot);
    return out;
}

} // namespace

RunConfig parse_config(std::string_view text, const std::string& source) {
    const Document doc(text, source);
    RunConfig cfg;
    cfg.source = source;
    cfg.params.body = read_body(doc);
    cfg.params.frozen_inertia_override = read_frozen_override(doc);
    cfg.params.plates = {read_plate(doc, "plate1"), read_plate(doc, "plate2")};
    cfg.grids = {read_modes(doc, "plate1"), read_modes(doc, "plate2")};
    cfg.params.gains = read_gains(doc, cfg.k_values);
    cfg.integration = read_integration(doc, cfg);
    cfg.initial = read_initial(doc);
    cfg.output = read_output(doc);

    try {
        validate(cfg.params);
        effective_inertia(cfg.params);
    } catch (const SingularConfigurationError& e) {
        throw SingularConfigurationError(source + ": " + e.what());
    } catch (const ParameterError& e) {
        throw ConfigError(source + ": " + e.what());
    }
    initial_state(cfg); // size checks against the grids
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path.string() + ": cannot open config file");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), path.string());
}

std::string_view fig2_preset_text() { return kFig2Preset; }

RunConfig fig2_config() { return parse_config(fig2_preset_text(), "fig2 (preset)"); }

Eigen::VectorXd initial_state(const RunConfig& config) {
    const StateLayout layout(config.grids[0].size(), config.grids[1].size());
    const InitialSpec& init = config.initial;
    if (init.explicit_state) {
        const auto& v = *init.explicit_state;
        if (v.size() != layout.size())
            throw ConfigError(config.source + ": [initial] state has " + std::to_string(v.size()) +
                              " entries, the mode grids need " + std::to_string(layout.size()));
        return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
    }
    State s = layout.zero_state();
    s.attitude_error = init.attitude_error;
    s.angular_velocity = init.angular_velocity;
    const char* qkeys[] = {"q1", "q2"};
    const char* vkeys[] = {"qdot1", "qdot2"};
    for (std::size_t p = 0; p < 2; ++p) {
        auto load = [&](const std::vector<double>& src, Eigen::VectorXd& dst, const char* key) {
            if (src.empty()) return;
            if (src.size() != layout.modes(p))
                throw ConfigError(config.source + ": [initial] " + key + " has " + std::to_string(src.size()) +
                                  " values, plate " + std::to_string(p + 1) + " has " +
                                  std::to_string(layout.modes(p)) + " modes");
            dst = Eigen::Map<const Eigen::VectorXd>(src.data(), static_cast<Eigen::Index>(src.size()));
        };
        load(init.modal_amplitudes[p], s.modal_amplitudes[p], qkeys[p]);
        load(init.modal_rates[p], s.modal_rates[p], vkeys[p]);
    }
    return layout.pack(s);
}

Mat3 axis_angle_attitude(const Vec3& axis, double angle) {
    return Eigen::AngleAxisd(angle, axis).toRotationMatrix();
}

void check_rotation(const Mat3& rows, double tol) {
    const double ortho = (rows * rows.transpose() - Mat3::Identity()).cwiseAbs().maxCoeff();
    if (!(ortho <= tol)) {
        std::ostringstream os;
        os << "attitude rows are not orthonormal (max |G G^T - I| = " << ortho << ")";
        throw ConfigError(os.str());
    }
    const double det = rows.determinant();
    if (!(std::abs(det - 1.0) <= tol)) {
        std::ostringstream os;
        os << "attitude rows are not right-handed (det = " << det << ")";
        throw ConfigError(os.str());
    }
}

} // namespace flexsat

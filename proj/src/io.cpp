#include "ctm/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace ctm {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string run_record_csv_header() {
    return "t,score,p_value,eta,bet_factor,wealth,decision";
}

std::string format_run_record(const RunRecord& r, RecordFormat fmt) {
    const char* decision = r.reject ? "reject" : "continue";
    std::string out;
    if (fmt == RecordFormat::csv) {
        out = std::to_string(r.t);
        out += ',';
        out += format_double(r.score);
        out += ',';
        out += format_double(r.p_value);
        out += ',';
        out += format_double(r.eta);
        out += ',';
        out += format_double(r.bet_factor);
        out += ',';
        out += format_double(r.wealth);
        out += ',';
        out += decision;
    } else {
        out = "{\"t\":" + std::to_string(r.t);
        out += ",\"score\":" + format_double(r.score);
        out += ",\"p_value\":" + format_double(r.p_value);
        out += ",\"eta\":" + format_double(r.eta);
        out += ",\"bet_factor\":" + format_double(r.bet_factor);
        out += ",\"wealth\":" + format_double(r.wealth);
        out += std::string(",\"decision\":\"") + decision + "\"}";
    }
    return out;
}

namespace {

std::string_view trimmed(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

}  // namespace

std::optional<double> parse_score_line(const std::string& line, std::size_t line_no) {
    const std::string_view body = trimmed(line);
    if (body.empty()) return std::nullopt;
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(body.data(), body.data() + body.size(), value);
    if (ec != std::errc{} || ptr != body.data() + body.size() || !std::isfinite(value)) {
        throw std::runtime_error("line " + std::to_string(line_no) +
                                 ": not a finite score: '" + std::string(body) + "'");
    }
    return value;
}

std::vector<double> read_score_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open score file: " + path);
    std::vector<double> scores;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        try {
            if (const auto v = parse_score_line(line, line_no)) scores.push_back(*v);
        } catch (const std::runtime_error& e) {
            throw std::runtime_error(path + ": " + e.what());
        }
    }
    return scores;
}

namespace {

double parse_real(const std::string& key, const std::string& value) {
    const std::string_view body = trimmed(value);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(body.data(), body.data() + body.size(), v);
    if (ec != std::errc{} || ptr != body.data() + body.size())
        throw std::runtime_error("config: bad numeric value for '" + key + "': " + value);
    return v;
}

std::uint64_t parse_count(const std::string& key, const std::string& value) {
    const std::string_view body = trimmed(value);
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(body.data(), body.data() + body.size(), v);
    if (ec != std::errc{} || ptr != body.data() + body.size())
        throw std::runtime_error("config: bad integer value for '" + key + "': " + value);
    return v;
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    throw std::runtime_error("config: bad boolean value for '" + key + "': " + value);
}

}  // namespace

SimSpec parse_sim_config(std::istream& in) {
    std::map<std::string, std::string> kv;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string_view body = trimmed(line);
        if (body.empty()) continue;
        const auto eq = body.find('=');
        if (eq == std::string_view::npos)
            throw std::runtime_error("config line " + std::to_string(line_no) +
                                     ": expected 'key = value'");
        const std::string key(trimmed(body.substr(0, eq)));
        const std::string value(trimmed(body.substr(eq + 1)));
        if (key.empty() || value.empty())
            throw std::runtime_error("config line " + std::to_string(line_no) +
                                     ": expected 'key = value'");
        if (!kv.emplace(key, value).second)
            throw std::runtime_error("config: duplicate key '" + key + "'");
    }

    SimSpec spec;
    auto take = [&kv](const std::string& key) -> std::optional<std::string> {
        auto it = kv.find(key);
        if (it == kv.end()) return std::nullopt;
        std::string v = it->second;
        kv.erase(it);
        return v;
    };

    const auto scenario = take("scenario");
    if (!scenario) throw std::runtime_error("config: missing required key 'scenario'");
    const auto kind = parse_scenario_kind(*scenario);
    if (!kind) throw std::runtime_error("config: unknown scenario kind '" + *scenario + "'");
    spec.scenario.kind = *kind;

    const auto horizon = take("horizon");
    if (!horizon) throw std::runtime_error("config: missing required key 'horizon'");
    spec.scenario.horizon = parse_count("horizon", *horizon);

    if (const auto v = take("d")) spec.scenario.d = parse_real("d", *v);
    if (const auto v = take("t0")) spec.scenario.t0 = parse_count("t0", *v);
    if (const auto v = take("lambda")) spec.scenario.lambda = parse_real("lambda", *v);
    if (const auto v = take("a")) spec.scenario.a = parse_real("a", *v);
    if (const auto v = take("sigma2")) spec.scenario.sigma2 = parse_real("sigma2", *v);

    const auto n_ref = take("n_ref");
    if (!n_ref) throw std::runtime_error("config: missing required key 'n_ref'");
    spec.n_ref = parse_count("n_ref", *n_ref);
    if (spec.n_ref < 1) throw std::runtime_error("config: n_ref must be >= 1");

    const auto trials = take("trials");
    if (!trials) throw std::runtime_error("config: missing required key 'trials'");
    spec.trials = parse_count("trials", *trials);
    if (spec.trials < 1) throw std::runtime_error("config: trials must be >= 1");

    if (const auto v = take("seed")) spec.seed = parse_count("seed", *v);
    if (const auto v = take("alpha")) spec.base.alpha = parse_real("alpha", *v);
    if (const auto v = take("delta")) spec.base.delta = parse_real("delta", *v);
    if (const auto v = take("k")) spec.base.k = parse_real("k", *v);
    if (const auto v = take("clip")) spec.base.clip = parse_real("clip", *v);
    if (const auto v = take("warmup")) spec.base.warmup = parse_count("warmup", *v);
    if (const auto v = take("paired")) spec.paired = parse_bool("paired", *v);
    if (const auto v = take("regret")) spec.compute_regret = parse_bool("regret", *v);

    std::string variants = take("variants").value_or("conditional");
    std::stringstream vs(variants);
    std::string name;
    while (std::getline(vs, name, ',')) {
        const std::string v(trimmed(name));
        if (v.empty()) continue;
        const auto parsed = parse_variant(v);
        if (!parsed) throw std::runtime_error("config: unknown variant '" + v + "'");
        spec.variants.push_back(*parsed);
    }
    if (spec.variants.empty()) throw std::runtime_error("config: no variants listed");

    if (!kv.empty())
        throw std::runtime_error("config: unknown key '" + kv.begin()->first + "'");

    spec.base.validate();
    spec.scenario.validate();
    return spec;
}

SimSpec load_sim_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    return parse_sim_config(in);
}

void write_power_csv(std::ostream& out, const std::vector<std::string>& variant_names,
                     const std::vector<PowerCurve>& curves) {
    if (variant_names.size() != curves.size())
        throw std::invalid_argument("write_power_csv: name/curve count mismatch");
    out << "t";
    for (const auto& name : variant_names) out << ',' << name;
    out << '\n';
    const std::size_t T = curves.empty() ? 0 : curves.front().times.size();
    for (const auto& c : curves) {
        if (c.times.size() != T)
            throw std::invalid_argument("write_power_csv: curves have unequal horizons");
    }
    for (std::size_t i = 0; i < T; ++i) {
        out << curves.front().times[i];
        for (const auto& c : curves) out << ',' << format_double(c.power[i]);
        out << '\n';
    }
}

void write_summary_csv(std::ostream& out, const std::vector<std::string>& variant_names,
                       const std::vector<StoppingSummary>& summaries) {
    if (variant_names.size() != summaries.size())
        throw std::invalid_argument("write_summary_csv: name/summary count mismatch");
    out << "variant,median_tau,mean_tau,rejection_rate\n";
    for (std::size_t i = 0; i < summaries.size(); ++i) {
        out << variant_names[i] << ',' << format_double(summaries[i].median_tau) << ','
            << format_double(summaries[i].mean_tau) << ','
            << format_double(summaries[i].rejection_rate) << '\n';
    }
}

void write_manifest(std::ostream& out, const SimSpec& spec) {
    out << "scenario = " << scenario_kind_name(spec.scenario.kind) << '\n';
    out << "horizon = " << spec.scenario.horizon << '\n';
    switch (spec.scenario.kind) {
        case ScenarioKind::immediate_shift:
            out << "d = " << format_double(spec.scenario.d) << '\n';
            break;
        case ScenarioKind::delayed_shift:
            out << "t0 = " << spec.scenario.t0 << '\n';
            out << "d = " << format_double(spec.scenario.d) << '\n';
            break;
        case ScenarioKind::gradual:
            out << "lambda = " << format_double(spec.scenario.lambda) << '\n';
            break;
        case ScenarioKind::ar1:
            out << "a = " << format_double(spec.scenario.a) << '\n';
            out << "sigma2 = " << format_double(spec.scenario.sigma2) << '\n';
            break;
        case ScenarioKind::null_iid:
            break;
    }
    out << "n_ref = " << spec.n_ref << '\n';
    out << "trials = " << spec.trials << '\n';
    out << "seed = " << spec.seed << '\n';
    out << "alpha = " << format_double(spec.base.alpha) << '\n';
    out << "delta = " << format_double(spec.base.delta) << '\n';
    out << "k = " << format_double(spec.base.k) << '\n';
    out << "clip = " << format_double(spec.base.clip) << '\n';
    out << "warmup = " << spec.base.warmup << '\n';
    out << "paired = " << (spec.paired ? "true" : "false") << '\n';
    out << "regret = " << (spec.compute_regret ? "true" : "false") << '\n';
    out << "variants = ";
    for (std::size_t i = 0; i < spec.variants.size(); ++i) {
        if (i) out << ',';
        out << variant_name(spec.variants[i]);
    }
    out << '\n';
}

}  // namespace ctm

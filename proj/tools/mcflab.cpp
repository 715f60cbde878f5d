// Command-line front end: verify, criteria, flow, curvature.
// Exit codes: 0 all contracts met, 1 contract violation, 2 configuration error.

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <openssl/evp.h>

#include "CLI11.hpp"
#include "json.hpp"
#include "mcflab/campaign.hpp"
#include "mcflab/criteria.hpp"
#include "mcflab/flowsim.hpp"
#include "mcflab/geometry.hpp"
#include "mcflab/io.hpp"
#include "mcflab/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kOk = 0;
constexpr int kViolation = 1;
constexpr int kConfigError = 2;

std::string sha256_hex(const std::string& data)
{
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1) throw std::runtime_error("SHA-256 failed");
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[md[i] >> 4];
        out += hex[md[i] & 15];
    }
    return out;
}

std::string utc_now()
{
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

/// Collects emitted files and writes the run manifest.
class Manifest {
public:
    Manifest(std::string subcommand, std::vector<std::string> argv) : sub_(std::move(subcommand)), argv_(std::move(argv)), start_(utc_now()) {}

    void set_config(json c) { config_ = std::move(c); }
    void set_seed(std::uint64_t s) { seed_ = s; }

    void record(const std::string& name, const std::string& bytes) { digests_[name] = sha256_hex(bytes); }

    /// Writes bytes under dir (if any) and records the digest.
    void emit(const std::optional<fs::path>& dir, const std::string& name, const std::string& bytes)
    {
        if (dir) {
            std::ofstream f(*dir / name, std::ios::binary);
            if (!f) throw mcflab::ConfigError("cannot write '" + (*dir / name).string() + "'");
            f << bytes;
        }
        record(name, bytes);
    }

    json to_json() const
    {
        json j{{"subcommand", sub_}, {"argv", argv_},   {"config", config_}, {"tool_version", mcflab::kVersion},
               {"started", start_},  {"finished", utc_now()}, {"outputs", digests_}};
        j["seed"] = seed_ ? json(*seed_) : json(nullptr);
        return j;
    }

    /// manifest.json in the output directory, otherwise stderr.
    void write(const std::optional<fs::path>& dir) const
    {
        const std::string text = to_json().dump(2) + "\n";
        if (dir) {
            std::ofstream f(*dir / "manifest.json", std::ios::binary);
            f << text;
        } else {
            std::cerr << text;
        }
    }

private:
    std::string sub_;
    std::vector<std::string> argv_;
    std::string start_;
    json config_ = json::object();
    std::optional<std::uint64_t> seed_;
    std::map<std::string, std::string> digests_;
};

std::optional<fs::path> prepare_out(const std::string& out)
{
    if (out.empty()) return std::nullopt;
    std::error_code ec;
    fs::create_directories(out, ec);
    if (ec) throw mcflab::ConfigError("cannot create output directory '" + out + "': " + ec.message());
    return fs::path(out);
}

void print_stdout(const std::optional<fs::path>& dir, const std::string& text)
{
    if (!dir) std::cout << text;
}

// ---- verify ---------------------------------------------------------------

struct VerifyArgs {
    mcflab::CampaignConfig cfg;
    std::string out;
};

int run_verify(const VerifyArgs& a, Manifest& man)
{
    const mcflab::CampaignReport rep = mcflab::run_campaign(a.cfg);
    json cfg = rep.to_json();
    man.set_config({{"suite", a.cfg.suite},
                    {"n", a.cfg.n},
                    {"m", a.cfg.m},
                    {"samples", a.cfg.samples},
                    {"seed", a.cfg.seed},
                    {"tol", rep.config.tol},
                    {"delta", a.cfg.delta},
                    {"exact", a.cfg.exact},
                    {"threads", a.cfg.threads}});
    man.set_seed(a.cfg.seed);
    const auto dir = prepare_out(a.out);
    const std::string text = rep.to_json().dump(2) + "\n";
    man.emit(dir, "report.json", text);
    print_stdout(dir, text);
    man.write(dir);
    return rep.passed ? kOk : kViolation;
}

// ---- criteria -------------------------------------------------------------

mcflab::MapProfile load_profile(const std::string& arg)
{
    if (arg.size() > 5 && arg.substr(arg.size() - 5) == ".json") {
        std::ifstream f(arg);
        if (!f) throw mcflab::ConfigError("cannot read '" + arg + "'");
        json j;
        try {
            f >> j;
        } catch (const json::exception& e) {
            throw mcflab::ConfigError("malformed JSON in '" + arg + "': " + e.what());
        }
        return mcflab::profile_from_json(j);
    }
    return mcflab::named_spectrum(arg);
}

std::string fmt(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", x);
    return buf;
}

int run_criteria(const std::string& profile_arg, int theorem, bool as_json, const std::string& out, Manifest& man)
{
    using namespace mcflab;
    const Criterion crit = criterion_from_number(theorem);
    const MapProfile p = load_profile(profile_arg);
    const HypothesisVerdict as_is = check_criterion(crit, p.source(), p.target());
    const DilationResult dil = dilation_trick(p, crit);

    std::string verdict;
    if (dil.feasible)
        verdict = dil.citation;
    else
        verdict = "hypotheses not met (sup 2-dilation " + fmt(p.sup_two_dilation()) + " >= bound " + fmt(dil.dilation_bound) + ")";

    json spectra = json::array();
    for (const auto& s : p.spectra()) spectra.push_back(spectrum_to_json(s));
    json j{{"profile", p.name()},
           {"source", p.source().describe()},
           {"target", p.target().describe()},
           {"theorem", theorem},
           {"criterion", criterion_name(crit)},
           {"spectra", spectra},
           {"sup_two_dilation", p.sup_two_dilation()},
           {"area_decreasing", p.sup_two_dilation() < 1.0},
           {"hypotheses_unscaled", verdict_to_json(as_is)},
           {"dilation", dilation_to_json(dil)},
           {"verdict", verdict},
           {"trivial", dil.feasible}};
    man.set_config({{"profile", profile_arg}, {"theorem", theorem}});

    std::string text;
    if (as_json) {
        text = j.dump(2) + "\n";
    } else {
        std::ostringstream s;
        s << "profile        " << p.name() << ": " << p.source().describe() << " -> " << p.target().describe() << "\n";
        s << "criterion      " << criterion_name(crit) << " (theorem " << theorem << ")\n";
        s << "sup 2-dilation " << fmt(p.sup_two_dilation()) << "\n";
        s << "bound          " << fmt(dil.dilation_bound) << "\n";
        for (const auto& c : as_is.checks)
            s << "  [" << (c.ok ? "ok  " : "FAIL") << "] " << c.name << ": " << fmt(c.lhs) << " " << c.relation << " " << fmt(c.rhs) << "\n";
        if (dil.feasible) s << "scale rho      " << fmt(*dil.witness) << " in " << (dil.lo_closed ? "[" : "(") << fmt(dil.rho_lo) << ", " << fmt(dil.rho_hi)
                            << (dil.hi_closed ? "]" : ")") << "\n";
        for (const auto& n : dil.notes) s << "note           " << n << "\n";
        s << "verdict        " << verdict << "\n";
        text = s.str();
    }
    const auto dir = prepare_out(out);
    man.emit(dir, as_json ? "criteria.json" : "criteria.txt", text);
    print_stdout(dir, text);
    man.write(dir);
    return kOk;
}

// ---- flow -----------------------------------------------------------------

int run_flow_cmd(const std::string& scenario, const std::string& out, bool svg, Manifest& man)
{
    using namespace mcflab;
    const flowsim::FlowConfig cfg = flowsim::FlowConfig::from_kv(KeyValueConfig::load(scenario));
    man.set_config(cfg.to_json());
    const auto dir = prepare_out(out);
    const flowsim::FlowVerdict v = flowsim::run_scenario(cfg);

    man.emit(dir, cfg.name + ".csv", flowsim::records_to_csv(v.run.records));
    if (v.fine) man.emit(dir, cfg.name + "_refined.csv", flowsim::records_to_csv(v.fine->records));
    if (svg && dir) {
        man.emit(dir, cfg.name + "_min_phi.svg", flowsim::svg_min_phi(v.run.records, cfg.name));
        man.emit(dir, cfg.name + "_max_lambda.svg", flowsim::svg_max_lambda(v.run.records, cfg.name));
    }
    const std::string text = v.to_json(cfg).dump(2) + "\n";
    man.emit(dir, "verdict.json", text);
    std::cout << text;
    man.write(dir);
    return v.passed ? kOk : kViolation;
}

// ---- curvature ------------------------------------------------------------

int run_curvature(const std::string& model_text, const std::vector<double>& plane, const std::string& out, Manifest& man)
{
    using namespace mcflab;
    const CurvatureModel model = parse_model(model_text);
    if (plane.size() > 3) throw ConfigError("--plane takes at most three pairings");
    PlaneInvariants inv;
    for (std::size_t k = 0; k < plane.size(); ++k) inv.pairings[k] = plane[k];
    double sec;
    try {
        sec = sectional_curvature(model, inv);
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    }
    const CurvatureBounds b = curvature_bounds(model);
    json j{{"model", model.describe()},
           {"real_dim", model.real_dim()},
           {"plane", inv.pairings},
           {"sectional", sec},
           {"sectional_min", b.sec_min},
           {"sectional_max", b.sec_max},
           {"einstein_constant", ricci_constant(model)}};
    man.set_config({{"model", model_text}, {"plane", plane}});
    const auto dir = prepare_out(out);
    const std::string text = j.dump(2) + "\n";
    man.emit(dir, "curvature.json", text);
    print_stdout(dir, text);
    man.write(dir);
    return kOk;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Numerical laboratory for area-decreasing maps under graphical mean curvature flow"};
    app.set_version_flag("--version", mcflab::kVersion);
    app.require_subcommand(1);

    VerifyArgs va;
    std::string verify_out;
    auto* verify = app.add_subcommand("verify", "Randomized campaign for one analytic inequality");
    std::string suites_help = "suite:";
    for (const auto& s : mcflab::campaign_suites()) suites_help += " " + s;
    verify->add_option("suite", va.cfg.suite, suites_help)->required()->check(CLI::IsMember(mcflab::campaign_suites()));
    verify->add_option("--n", va.cfg.n, "source dimension")->capture_default_str();
    verify->add_option("--m", va.cfg.m, "target dimension")->capture_default_str();
    verify->add_option("--samples", va.cfg.samples, "number of samples")->capture_default_str();
    verify->add_option("--seed", va.cfg.seed, "master seed")->capture_default_str();
    verify->add_option("--tol", va.cfg.tol, "tolerance (suite default if omitted)");
    verify->add_option("--delta", va.cfg.delta, "Phi lower bound magnitude (lemma42)")->capture_default_str();
    verify->add_flag("--exact", va.cfg.exact, "exact rational arithmetic");
    verify->add_option("--threads", va.cfg.threads, "worker threads (results do not depend on it)")->capture_default_str();
    verify->add_option("--out", va.out, "output directory");

    std::string profile;
    int theorem = 13;
    bool as_json = false;
    std::string criteria_out;
    auto* criteria = app.add_subcommand("criteria", "Check a criterion and apply the dilation trick to a map profile");
    criteria->add_option("profile", profile, "named profile or JSON profile file")->required();
    criteria->add_option("--theorem", theorem, "13 (sectional) or 14 (Ricci)")->required()->check(CLI::IsMember({13, 14}));
    criteria->add_flag("--json", as_json, "JSON output");
    criteria->add_option("--out", criteria_out, "output directory");

    std::string scenario, flow_out;
    bool no_svg = false;
    auto* flow = app.add_subcommand("flow", "Run a flow scenario");
    flow->add_option("scenario", scenario, "scenario file")->required()->check(CLI::ExistingFile);
    flow->add_option("--out", flow_out, "output directory");
    flow->add_flag("--no-svg", no_svg, "skip SVG plots");

    std::string model;
    std::vector<double> plane;
    std::string curv_out;
    auto* curvature = app.add_subcommand("curvature", "Curvature of a model space");
    curvature->add_option("model", model, "sphere(n[, r]) | cp(n) | hp(n) | torus(n), optionally followed by 'scaled rho'")->required();
    curvature->add_option("--plane", plane, "plane invariants <JX,Y> (up to three)")->expected(1, 3);
    curvature->add_option("--out", curv_out, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfigError;
    }

    std::vector<std::string> args(argv + 1, argv + argc);
    try {
        if (*verify) {
            Manifest man("verify", args);
            return run_verify(va, man);
        }
        if (*criteria) {
            Manifest man("criteria", args);
            return run_criteria(profile, theorem, as_json, criteria_out, man);
        }
        if (*flow) {
            Manifest man("flow", args);
            return run_flow_cmd(scenario, flow_out, !no_svg, man);
        }
        Manifest man("curvature", args);
        return run_curvature(model, plane, curv_out, man);
    } catch (const mcflab::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return kConfigError;
    } catch (const mcflab::DimensionError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return kConfigError;
    } catch (const mcflab::DomainError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return kConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kViolation;
    }
}

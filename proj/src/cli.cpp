#include "probframe/cli.hpp"

#include "probframe/duals.hpp"
#include "probframe/error.hpp"
#include "probframe/frames.hpp"
#include "probframe/json_io.hpp"
#include "probframe/perturbation.hpp"
#include "probframe/redundancy.hpp"
#include "probframe/transport.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <functional>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>

#ifndef PROBFRAME_FIXTURE_DIR
#define PROBFRAME_FIXTURE_DIR "fixtures"
#endif

namespace probframe::cli {

namespace {

struct Settings {
    std::string fixture;
    std::map<std::string, std::string> inputs;
    double tol = kExactTolerance;
    std::uint64_t seed = 0;
    std::size_t iters = 10000;
    double gap = 1e-8;
    std::string output = "json";
    unsigned terms = 10;
    std::size_t samples = 0;
    std::optional<double> a_n;
    std::string mode = "approx-dual";
    bool pseudo = false;
};

/// Resolves named inputs from explicit options first, then from the fixture.
class InputSource {
public:
    explicit InputSource(const Settings& s) : settings_(s) {
        if (!s.fixture.empty()) {
            std::filesystem::path p = s.fixture;
            if (p.extension() != ".json" && !p.has_parent_path()) {
                p = std::filesystem::path(PROBFRAME_FIXTURE_DIR) / (s.fixture + ".json");
            }
            fixture_ = read_json_file(p);
        }
    }

    bool has(const std::string& key) const {
        return settings_.inputs.count(key) != 0 || from_fixture(key) != nullptr;
    }

    Json get(const std::string& key) const {
        if (auto it = settings_.inputs.find(key); it != settings_.inputs.end()) {
            return load(it->second);
        }
        if (const Json* j = from_fixture(key)) {
            return *j;
        }
        throw Error(ErrorCode::ParseError, "missing input --" + key);
    }

    DiscreteMeasure measure(const std::string& key) const { return measure_from_json(get(key)); }
    Coupling coupling(const std::string& key) const { return coupling_from_json(get(key)); }

private:
    static Json load(const std::string& text) {
        if (!text.empty() && (text.front() == '[' || text.front() == '{' ||
                              std::isdigit(static_cast<unsigned char>(text.front())) ||
                              text.front() == '-' || text.front() == '.')) {
            try {
                return Json::parse(text);
            } catch (const Json::exception&) {
                // Not inline JSON; fall back to reading it as a path.
            }
        }
        return read_json_file(text);
    }

    const Json* from_fixture(const std::string& key) const {
        if (!fixture_.is_object()) {
            return nullptr;
        }
        if (key == "mu" && fixture_.contains("atoms")) {
            return &fixture_;
        }
        if (key == "coupling" && fixture_.contains("plan")) {
            return &fixture_;
        }
        if (fixture_.contains(key)) {
            return &fixture_.at(key);
        }
        return nullptr;
    }

    const Settings& settings_;
    Json fixture_;
};

struct Outcome {
    Json document;
    int code = kOk;
};

Outcome with_claim(Json doc, const PerturbationReport& r) {
    if (!r.claim_made) {
        return {std::move(doc), kHypothesisFailed};
    }
    return {std::move(doc), r.claim_holds ? kOk : kInternal};
}

Json dual_frame_json(const DualFrame& d, double tol) {
    return {{"measure", to_json(d.measure)},
            {"coupling", to_json(d.coupling)},
            {"certificate", to_json(certify(d.coupling, tol))}};
}

Outcome cmd_analyze(const InputSource& in, const Settings&) {
    const DiscreteMeasure mu = in.measure("mu");
    const FrameReport report = analyze(mu);
    Json doc = to_json(report);
    doc["redundancy"] = redundancy_rank(mu);
    doc["redundancy_trace"] = report.is_frame ? Json(redundancy_trace(mu)) : Json(nullptr);
    doc["atom_count"] = coalesce(mu).measure.size();
    return {std::move(doc)};
}

Outcome cmd_w2(const InputSource& in, const Settings&) {
    return {to_json(solve_w2(in.measure("mu"), in.measure("nu")))};
}

Outcome cmd_coupling_check(const InputSource& in, const Settings&) {
    const Coupling c = in.coupling("coupling");
    return {Json{{"valid", true},
                 {"mixed_operator", to_json(mixed_frame_operator(c))},
                 {"transport_cost", transport_cost(c)}}};
}

Outcome cmd_certify(const InputSource& in, const Settings& s) {
    if (in.has("coupling")) {
        return {to_json(certify(in.coupling("coupling"), s.tol))};
    }
    const DiscreteMeasure mu = in.measure("mu");
    const DiscreteMeasure nu = in.measure("nu");
    MixedSearchOptions opts;
    opts.max_iterations = s.iters;
    opts.gap_tolerance = s.gap;
    const MixedSearchResult search =
        optimize_mixed_operator(mu, nu, Matrix::identity(mu.dim()), opts);
    Json doc = to_json(certify(search.coupling, s.tol));
    doc["search"] = {{"residual", search.residual},
                     {"duality_gap", search.duality_gap},
                     {"iterations", search.iterations},
                     {"dual_found", search.residual <= s.tol}};
    return {std::move(doc)};
}

Outcome cmd_canonical_dual(const InputSource& in, const Settings& s) {
    return {dual_frame_json(canonical_dual(in.measure("mu")), s.tol)};
}

Outcome cmd_approx_dual(const InputSource& in, const Settings& s) {
    const DualRequirement req = s.pseudo ? DualRequirement::pseudo : DualRequirement::approximate;
    return {dual_frame_json(
        approx_dual_pushforward(in.measure("mu"), matrix_from_json(in.get("matrix")), req), s.tol)};
}

Outcome cmd_neumann(const InputSource& in, const Settings& s) {
    const Coupling c = in.coupling("coupling");
    Json steps = Json::array();
    for (unsigned k = 0; k <= s.terms; ++k) {
        const NeumannDual d = neumann_approx_dual(c, k);
        const DualCertificate cert = certify(d.coupling, s.tol);
        steps.push_back({{"terms", k},
                         {"measure", to_json(d.measure)},
                         {"deviation", cert.deviation},
                         {"error_bound", d.error_bound},
                         {"classification", std::string(to_string(cert.classification))}});
    }
    return {Json{{"steps", std::move(steps)}}};
}

Outcome cmd_rescue(const InputSource& in, const Settings& s) {
    return {dual_frame_json(rescue_exact_dual(in.coupling("coupling")), s.tol)};
}

Outcome cmd_pushforward(const InputSource& in, const Settings& s) {
    const DiscreteMeasure mu = in.measure("mu");
    const Json h_json = in.get("h");
    std::vector<Vector> h;
    if (!h_json.is_array()) {
        throw Error(ErrorCode::ParseError, "h must be an array of vectors");
    }
    for (const Json& v : h_json) {
        h.push_back(vector_from_json(v));
    }
    std::optional<Matrix> a;
    if (in.has("matrix")) {
        a = matrix_from_json(in.get("matrix"));
    }
    return {dual_frame_json(pushforward_dual(mu, h, a), s.tol)};
}

Outcome cmd_uncertainty(const InputSource& in, const Settings&) {
    const Vector f = vector_from_json(in.get("f"));
    const UncertaintyProduct u = uncertainty_product(in.coupling("coupling"), f);
    const bool holds = u.lhs >= u.rhs - 1e-9;
    return {Json{{"lhs", u.lhs}, {"rhs", u.rhs}, {"holds", holds}}, holds ? kOk : kInternal};
}

Outcome cmd_bounds_ineq(const InputSource& in, const Settings&) {
    const BoundInequalities b = bound_inequalities(in.coupling("coupling"));
    const bool holds = b.slack_mu >= -1e-9 && b.slack_nu >= -1e-9;
    return {Json{{"lower_mu", b.lower_mu},
                 {"upper_mu", b.upper_mu},
                 {"lower_nu", b.lower_nu},
                 {"upper_nu", b.upper_nu},
                 {"inverse_norm", b.inverse_norm},
                 {"slack_nu", b.slack_nu},
                 {"slack_mu", b.slack_mu},
                 {"equality_nu", b.equality_nu},
                 {"equality_mu", b.equality_mu},
                 {"holds", holds}},
            holds ? kOk : kInternal};
}

Outcome cmd_perturb(const InputSource& in, const Settings& s) {
    const DiscreteMeasure mu = in.measure("mu");
    const DiscreteMeasure eta = in.measure("eta");
    if (s.mode == "frame-bound") {
        std::optional<Coupling> c;
        if (in.has("closeness")) {
            c = in.coupling("closeness");
        }
        const PerturbationReport r = perturbed_frame_bound(mu, eta, c);
        return with_claim(to_json(r), r);
    }
    const Coupling closeness =
        in.has("closeness") ? in.coupling("closeness") : solve_w2(eta, mu).plan;
    const Coupling base = in.has("base") ? in.coupling("base") : canonical_dual(mu).coupling;
    if (s.mode == "approx-dual") {
        const PerturbationReport r = perturbed_approx_dual(mu, base, eta, closeness, s.tol);
        return with_claim(to_json(r), r);
    }
    if (s.mode == "variants") {
        const PerturbationReport r = variant_certificates(mu, base, eta, closeness, s.tol);
        return with_claim(to_json(r), r);
    }
    if (s.mode == "matched") {
        const DualFrame xi = matched_mixed_dual(mu, base, eta, closeness, s.tol);
        return {dual_frame_json(xi, s.tol)};
    }
    throw Error(ErrorCode::ParseError, "unknown perturb mode '" + s.mode + "'");
}

Outcome cmd_sample_dual(const InputSource& in, const Settings& s) {
    PipelineOptions opts;
    opts.samples = s.samples;
    opts.seed = s.seed;
    opts.a_n = s.a_n;
    opts.tol = s.tol;
    // A bare measure fixture lands in --mu; accept it as eta here.
    const PipelineResult r =
        discrete_dual_pipeline(in.has("eta") ? in.measure("eta") : in.measure("mu"), opts);
    Json doc{{"mu_hat", to_json(r.mu_hat)},
             {"nu_hat", to_json(r.nu_hat.measure)},
             {"report", to_json(r.report)}};
    return with_claim(std::move(doc), r.report);
}

std::string format_number(double v) {
    std::ostringstream os;
    os << std::setprecision(6) << v;
    return os.str();
}

std::string inline_text(const Json& j) {
    if (j.is_number()) {
        return format_number(j.get<double>());
    }
    if (j.is_boolean()) {
        return j.get<bool>() ? "true" : "false";
    }
    if (j.is_null()) {
        return "null";
    }
    if (j.is_string()) {
        return j.get<std::string>();
    }
    std::string s = "[";
    for (std::size_t i = 0; i < j.size(); ++i) {
        s += (i ? ", " : "") + inline_text(j[i]);
    }
    return s + "]";
}

void write_text(const Json& j, const std::string& prefix, std::ostream& out) {
    if (j.is_object()) {
        for (const auto& [key, value] : j.items()) {
            write_text(value, prefix.empty() ? key : prefix + "." + key, out);
        }
        return;
    }
    if (j.is_array() && std::any_of(j.begin(), j.end(), [](const Json& e) { return e.is_object(); })) {
        for (std::size_t i = 0; i < j.size(); ++i) {
            write_text(j[i], prefix + "[" + std::to_string(i) + "]", out);
        }
        return;
    }
    out << prefix << ": " << inline_text(j) << '\n';
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Probabilistic frames, couplings and dual certificates"};
    app.require_subcommand(1);
    app.fallthrough();

    Settings s;
    app.add_option("--fixture", s.fixture, "Fixture name or path to a fixture bundle");
    const std::vector<std::pair<const char*, const char*>> inputs = {
        {"mu", "--mu"},       {"nu", "--nu"},       {"eta", "--eta"},
        {"coupling", "--coupling"}, {"base", "--base"}, {"closeness", "--closeness"},
        {"matrix", "--matrix"}, {"f", "--f"},       {"h", "--h-values"},
    };
    for (const auto& [key, flag] : inputs) {
        app.add_option_function<std::string>(
            flag, [&s, key = std::string(key)](const std::string& v) { s.inputs[key] = v; },
            std::string("JSON file or inline JSON for ") + key);
    }
    app.add_option("--tol", s.tol, "Exactness tolerance on ||A - Id||");
    app.add_option("--seed", s.seed, "Seed for randomised steps");
    app.add_option("--iters", s.iters, "Iteration cap for the mixed-operator search");
    app.add_option("--gap", s.gap, "Duality-gap tolerance for the mixed-operator search");
    app.add_option("--output", s.output, "Output format")->check(CLI::IsMember({"json", "text"}));
    app.add_option("--terms", s.terms, "Largest Neumann partial sum index");
    app.add_option("--samples", s.samples, "Subsample size N");
    app.add_option_function<double>("--a-n", [&s](double v) { s.a_n = v; },
                                    "Closeness radius A_N (default A_eta / 4)");
    app.add_option("--mode", s.mode, "perturb mode")
        ->check(CLI::IsMember({"frame-bound", "approx-dual", "variants", "matched"}));
    app.add_flag("--pseudo", s.pseudo, "approx-dual: only require an invertible mixed operator");

    using Handler = std::function<Outcome(const InputSource&, const Settings&)>;
    const std::vector<std::tuple<const char*, const char*, Handler>> commands = {
        {"analyze", "Frame operator, bounds and redundancy of --mu", cmd_analyze},
        {"w2", "Exact W2 between --mu and --nu", cmd_w2},
        {"coupling-check", "Validate --coupling and report its mixed operator", cmd_coupling_check},
        {"certify", "Dual certificate of --coupling, or search one between --mu and --nu", cmd_certify},
        {"canonical-dual", "Canonical dual of --mu", cmd_canonical_dual},
        {"approx-dual", "(A^t S^-1)_# mu for --mu and --matrix", cmd_approx_dual},
        {"neumann", "Neumann partial sums of --coupling up to --terms", cmd_neumann},
        {"rescue", "Exact dual rescued from --coupling", cmd_rescue},
        {"pushforward", "Exact dual T_# mu from --mu and --h-values", cmd_pushforward},
        {"uncertainty", "Uncertainty product of --coupling along --f", cmd_uncertainty},
        {"bounds-ineq", "Frame bound inequalities of --coupling", cmd_bounds_ineq},
        {"perturb", "Perturbation reports for --mu, --eta (see --mode)", cmd_perturb},
        {"sample-dual", "Discrete approximate dual of --eta from --samples atoms", cmd_sample_dual},
    };
    for (const auto& [name, help, handler] : commands) {
        app.add_subcommand(name, help);
    }

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << e.what() << '\n';
        return kValidation;
    }

    try {
        const InputSource in(s);
        for (const auto& [name, help, handler] : commands) {
            if (!app.got_subcommand(name)) {
                continue;
            }
            const Outcome result = handler(in, s);
            if (s.output == "json") {
                out << result.document.dump(2) << '\n';
            } else {
                write_text(result.document, "", out);
            }
            if (result.code == kHypothesisFailed) {
                err << "hypotheses not satisfied; no claim asserted\n";
            } else if (result.code == kInternal) {
                err << "checked inequality violated\n";
            }
            return result.code;
        }
        return kValidation;
    } catch (const Error& e) {
        err << e.what() << '\n';
        return kValidation;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return kInternal;
    }
}

}  // namespace probframe::cli

// Command-line driver: set and distribution statistics, certified subspace
// search, property suites, family generation and endgame transcripts.
//
// Exit status: 0 when every requested check passes, 1 when a check fails,
// 2 on usage, validation or capacity errors.

#include <cmath>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "entropic/entropy.hpp"
#include "entropic/errors.hpp"
#include "entropic/experiments.hpp"
#include "entropic/pipeline.hpp"
#include "entropic/random.hpp"
#include "entropic/serialize.hpp"
#include "entropic/verify.hpp"

using namespace entropic;

namespace {

struct Inputs {
    std::string set_file;
    std::vector<std::string> dist_files;
    std::string certificate_file;
    std::string mode = "practical";
    std::string family;
    std::string format = "json";
    std::size_t trials = 1000;
    std::optional<double> kappa;
    bool eta_given = false;
};

void emit(const ExperimentConfig& cfg, const std::string& text) {
    if (cfg.out.empty()) {
        std::cout << text;
        if (!text.empty() && text.back() != '\n') std::cout << '\n';
    } else {
        write_text_file(cfg.out, text.back() == '\n' ? text : text + '\n');
    }
}

std::string dump(const Json& j) { return j.dump(2); }

// Rows for sets read from disk name the file instead of a family.
ExperimentRow row_for(const Inputs& in, const ExperimentConfig& cfg, const ElementSet& a,
                      const std::optional<AnalyzeResult>& analysis) {
    ExperimentRow row = experiment_row(cfg, a, analysis);
    if (!in.set_file.empty()) {
        row.family = "file";
        row.params = in.set_file;
    }
    return row;
}

std::string csv(const std::vector<ExperimentRow>& rows) {
    std::string out = std::string(kCsvHeader) + "\n";
    for (const auto& r : rows) out += to_csv(r) + "\n";
    return out;
}

std::vector<Dist> load_dists(const Inputs& in) {
    std::vector<Dist> out;
    for (const auto& f : in.dist_files) out.push_back(dist_from_json(read_json_file(f)));
    if (out.size() == 2 && out[0].n() != out[1].n()) throw DimensionMismatch("the two distributions differ in n");
    return out;
}

// The set named by --set, or the configured family when no file is given.
ElementSet load_set(const Inputs& in, ExperimentConfig& cfg) {
    if (!in.set_file.empty()) {
        ElementSet a = set_from_json(read_json_file(in.set_file));
        cfg.n = a.n;
        return a;
    }
    return generate(cfg);
}

Json dist_stats(const Dist& p, const Dist& q) {
    const double hx = shannon_entropy(p), hy = shannon_entropy(q);
    const double hs = shannon_entropy(xor_convolve(p, q));
    return Json{{"n", p.n()},
                {"h_x", hx},
                {"h_y", hy},
                {"h_sum", hs},
                {"doubling_mass", hx + hy - hs},
                {"ruzsa_distance", hs - 0.5 * hx - 0.5 * hy},
                {"doubling_ratio", hx + hy > 0 ? hs / (hx + hy) : 0.0}};
}

int cmd_analyze(const Inputs& in, ExperimentConfig& cfg) {
    const auto dists = load_dists(in);
    if (!dists.empty()) {
        const Json stats = dist_stats(dists[0], dists.size() > 1 ? dists[1] : dists[0]);
        if (cfg.format == OutputFormat::Csv) {
            std::string out = "n,h_x,h_y,h_sum,doubling_mass,ruzsa_distance\n";
            std::ostringstream os;
            os.precision(12);
            os << stats["n"].get<int>() << ',' << stats["h_x"].get<double>() << ',' << stats["h_y"].get<double>()
               << ',' << stats["h_sum"].get<double>() << ',' << stats["doubling_mass"].get<double>() << ','
               << stats["ruzsa_distance"].get<double>() << '\n';
            emit(cfg, out + os.str());
        } else {
            emit(cfg, dump(stats));
        }
        return 0;
    }
    const ElementSet a = load_set(in, cfg);
    const DoublingStats s = doubling_stats(a);
    if (cfg.format == OutputFormat::Csv) {
        emit(cfg, csv({row_for(in, cfg, a, std::nullopt)}));
        return 0;
    }
    Json out{{"n", a.n}, {"stats", to_json(s)}, {"h_uniform", std::log2(static_cast<double>(a.size()))}};
    if (in.set_file.empty()) {
        out["family"] = to_string(cfg.family);
        out["params"] = cfg.family_params();
        out["seed"] = cfg.seed;
        out["rng_algorithm"] = Rng::kAlgorithm;
    }
    emit(cfg, dump(out));
    return 0;
}

int cmd_find_subspace(const Inputs& in, ExperimentConfig& cfg) {
    PipelineOptions opts;
    opts.mode = cfg.mode;
    opts.seed = cfg.seed;
    const auto dists = load_dists(in);
    if (!dists.empty()) {
        const Dist& p = dists[0];
        const Dist& q = dists.size() > 1 ? dists[1] : dists[0];
        const SolveResult r = solve_B(p, q, cfg.eta, cfg.epsilon, opts);
        const auto rep = reverify(r.certificate);
        Json bundle = solve_bundle(r, opts);
        bundle["reverified"] = rep.ok;
        emit(cfg, dump(bundle));
        return r.certificate.passed() && rep.ok ? 0 : 1;
    }
    const ElementSet a = load_set(in, cfg);
    const AnalyzeResult r = analyze_set(a, cfg.epsilon, opts);
    const auto rep = reverify(r.certificate);
    if (cfg.format == OutputFormat::Csv) {
        emit(cfg, csv({row_for(in, cfg, a, r)}));
    } else {
        Json bundle = analyze_bundle(a, r, opts);
        bundle["reverified"] = rep.ok;
        emit(cfg, dump(bundle));
    }
    return r.certificate.passed() && rep.ok ? 0 : 1;
}

int cmd_verify(const Inputs& in, ExperimentConfig& cfg) {
    if (!in.certificate_file.empty()) {
        const SubspaceCertificate cert = certificate_from_document(read_json_file(in.certificate_file));
        const ReverifyReport rep = reverify(cert);
        Json out{{"certificate", in.certificate_file},
                 {"criterion", to_string(cert.criterion)},
                 {"dim_v", cert.v.dim()},
                 {"ok", rep.ok},
                 {"max_deviation", rep.max_deviation},
                 {"problems", rep.problems}};
        emit(cfg, dump(out));
        return rep.ok ? 0 : 1;
    }
    const auto reports = run_all_suites(cfg.n, in.trials, cfg.seed);
    bool ok = true;
    std::size_t identity_violations = 0;
    for (const auto& r : reports) {
        ok = ok && r.passed();
        if (r.name == "identities") identity_violations = r.violations;
    }
    if (cfg.format == OutputFormat::Csv) {
        std::ostringstream os;
        os << "suite,n,trials,checks,violations,skipped,max_error,seed\n";
        for (const auto& r : reports) {
            os << r.name << ',' << r.n << ',' << r.trials << ',' << r.checks << ',' << r.violations << ','
               << r.skipped << ',' << r.max_error << ',' << cfg.seed << '\n';
        }
        emit(cfg, os.str());
    } else {
        Json suites = Json::array();
        for (const auto& r : reports) {
            suites.push_back(Json{{"suite", r.name},
                                  {"n", r.n},
                                  {"trials", r.trials},
                                  {"checks", r.checks},
                                  {"violations", r.violations},
                                  {"skipped", r.skipped},
                                  {"max_error", r.max_error},
                                  {"passed", r.passed()},
                                  {"failures", r.failures}});
        }
        emit(cfg, dump(Json{{"seed", cfg.seed},
                            {"rng_algorithm", Rng::kAlgorithm},
                            {"identity_violations", identity_violations},
                            {"passed", ok},
                            {"suites", suites}}));
    }
    return ok ? 0 : 1;
}

int cmd_gen(const Inputs&, ExperimentConfig& cfg) {
    const ElementSet a = generate(cfg);
    if (cfg.format == OutputFormat::Csv) {
        emit(cfg, csv({experiment_row(cfg, a, std::nullopt)}));
        return 0;
    }
    Json out = to_json(a);
    out["family"] = to_string(cfg.family);
    out["params"] = cfg.family_params();
    out["seed"] = cfg.seed;
    out["rng_algorithm"] = Rng::kAlgorithm;
    emit(cfg, dump(out));
    return 0;
}

int cmd_endgame(const Inputs& in, ExperimentConfig& cfg) {
    auto dists = load_dists(in);
    if (dists.empty()) {
        // Without input files the endgame runs on the uniform law of the configured family.
        ExperimentConfig c = cfg;
        const ElementSet a = generate(c);
        dists.push_back(uniform_on(a.elements, a.n));
    }
    const Dist& p = dists[0];
    const Dist& q = dists.size() > 1 ? dists[1] : dists[0];
    double eta = cfg.eta;
    if (!in.eta_given) {
        const double h = shannon_entropy(p) + shannon_entropy(q);
        const double s = doubling_mass(p, q);
        if (h <= 0 || s <= 0) throw HypothesisViolation("endgame needs s[X;Y] > 0", s);
        eta = std::min(0.5, s / h * (1 - 1e-12));
    }
    const double kappa = in.kappa ? *in.kappa : endgame_gaps(p, q, eta).kappa();
    const EndgameTranscript t = endgame(p, q, eta, kappa);
    emit(cfg, dump(to_json(t)));
    return t.passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Entropic doubling toolkit over F_2^n"};
    app.require_subcommand(1);
    app.fallthrough();

    ExperimentConfig cfg;
    Inputs in;
    std::size_t count = cfg.count;
    app.add_option("--n", cfg.n, "ambient dimension");
    auto* eta_opt = app.add_option("--eta", cfg.eta, "doubling parameter eta in (0, 1/2]");
    app.add_option("--epsilon", cfg.epsilon, "accuracy epsilon in (0, 1]");
    app.add_option("--seed", cfg.seed, "PRNG seed (mt19937_64)");
    app.add_option("--mode", in.mode, "paper-faithful | practical")->check(CLI::IsMember({"paper-faithful", "paper", "practical"}));
    app.add_option("--family", in.family, "hamming_ball | random_subset | union_of_cosets");
    app.add_option("--radius", cfg.radius, "Hamming ball radius");
    app.add_option("--dim-v", cfg.dim_v, "dimension of the ambient or coset subspace");
    app.add_option("--count", count, "subset size or number of cosets");
    app.add_option("--out", cfg.out, "output file (default stdout)");
    app.add_option("--format", in.format, "json | csv")->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--set", in.set_file, "set file {\"n\", \"elements\": [hex]}");
    app.add_option("--dist", in.dist_files, "distribution file; give twice for a pair")->expected(1, 2);

    auto* analyze = app.add_subcommand("analyze", "entropy and doubling statistics for a set or distribution");
    auto* find = app.add_subcommand("find-subspace", "certified subspace via solve_B or analyze_set");
    auto* verify = app.add_subcommand("verify", "property suites, or re-verify a certificate file");
    verify->add_option("--certificate", in.certificate_file, "certificate or bundle to re-verify");
    verify->add_option("--trials", in.trials, "random inputs per suite");
    auto* gen = app.add_subcommand("gen", "emit an example family");
    auto* end = app.add_subcommand("endgame", "endgame transcript for one or two distributions");
    end->add_option("--kappa", in.kappa, "hypothesis slack (default: measured)");

    CLI11_PARSE(app, argc, argv);

    try {
        in.eta_given = eta_opt->count() > 0;
        cfg.count = count;
        cfg.mode = run_mode_from_string(in.mode);
        cfg.format = output_format_from_string(in.format);
        if (!in.family.empty()) cfg.family = family_from_string(in.family);
        if (analyze->parsed() || gen->parsed()) {
            // Statistics do not use eta or epsilon; validate the family only.
            cfg.eta = std::clamp(cfg.eta, 1e-9, 0.5);
            cfg.epsilon = std::clamp(cfg.epsilon, 1e-9, 1.0);
        }
        if (in.set_file.empty() && in.dist_files.empty() && in.certificate_file.empty()) cfg.validate();
        cfg.command = app.get_subcommands().front()->get_name();

        if (analyze->parsed()) return cmd_analyze(in, cfg);
        if (find->parsed()) return cmd_find_subspace(in, cfg);
        if (verify->parsed()) return cmd_verify(in, cfg);
        if (gen->parsed()) return cmd_gen(in, cfg);
        if (end->parsed()) return cmd_endgame(in, cfg);
    } catch (const HypothesisViolation& e) {
        std::cerr << "hypothesis not met: " << e.what() << " (gap " << e.gap() << ")\n";
        return 1;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}

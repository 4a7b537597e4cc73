// asep: command-line front end for the open-chain exclusion process library.
// Subcommands cover exact diagonalization, Bethe-equation solving, closed-form
// steady states, observables, parameter scans, kinetic Monte Carlo, and the
// identity verification suite.  Exit codes: 0 success, 1 validation error,
// 2 identity-check failure, 3 numerical failure.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "CLI11.hpp"
#include "json.hpp"

#include "asep/bethe.hpp"
#include "asep/chiral.hpp"
#include "asep/exec.hpp"
#include "asep/generic.hpp"
#include "asep/gillespie.hpp"
#include "asep/integrability.hpp"
#include "asep/io.hpp"
#include "asep/model.hpp"
#include "asep/observables.hpp"
#include "asep/rng.hpp"
#include "asep/steady.hpp"

using namespace asep;
using nlohmann::json;

namespace {

// ---------------------------------------------------------------------------
// Parameter resolution: preset -> explicit flags -> solve helpers.

struct RateFlags {
    std::optional<double> alpha, beta, gamma, delta, q;
    std::optional<int> n, m;
    std::string preset;
    bool solve_delta_flag = false;
    bool solve_beta_flag = false;
};

struct PresetDef {
    std::optional<double> alpha, beta, gamma, delta, q;
    std::optional<int> n, m;
    bool delta_from_class = false;  // delta follows the constraint class m
};

std::string canonical_preset(std::string name) {
    // Accept the short figure spellings ("2-left" for "fig2-left").
    if (!name.empty() && std::isdigit(static_cast<unsigned char>(name[0]))) {
        return "fig" + name;
    }
    return name;
}

std::optional<PresetDef> lookup_preset(const std::string& raw) {
    const std::string name = canonical_preset(raw);
    PresetDef p;
    if (name == "table1") {
        p.alpha = 0.23; p.beta = 0.32; p.gamma = 0.47; p.delta = 0.6;
        p.q = 0.1; p.n = 4;
        return p;
    }
    if (name == "table2" || name == "table3" || name == "table4" ||
        name == "table5") {
        p.alpha = 0.23; p.beta = 0.32; p.gamma = 0.17;
        p.q = 0.5; p.n = 4;
        p.m = name.back() - '1';
        p.delta_from_class = true;
        return p;
    }
    if (name == "fig2-left") {
        p.alpha = 1.30; p.beta = 0.46; p.gamma = 2.11;
        p.q = 0.5; p.n = 8; p.m = 0;
        p.delta_from_class = true;
        return p;
    }
    if (name == "fig2-right") {
        p.alpha = 1.30; p.beta = 0.40; p.gamma = 2.10; p.delta = 0.70;
        p.q = 1.35; p.n = 8;
        return p;
    }
    if (name == "fig3-left" || name == "fig3-right") {
        p.alpha = 1.30; p.beta = 0.46; p.gamma = 2.11;
        p.q = name == "fig3-left" ? 0.5 : 2.0;
        p.n = 8; p.m = 0;
        p.delta_from_class = true;
        return p;
    }
    if (name == "fig4") {
        p.alpha = 0.51; p.beta = 1.27; p.gamma = 0.83; p.delta = 1.0;
        p.q = 1.62; p.n = 4;
        return p;
    }
    return std::nullopt;
}

struct Resolved {
    BoundaryRates rates;
    std::optional<int> m;
};

Resolved resolve_rates(const RateFlags& f) {
    PresetDef p;
    if (!f.preset.empty()) {
        const auto found = lookup_preset(f.preset);
        if (!found) throw validation_error("unknown preset: " + f.preset);
        p = *found;
    }
    auto need = [](const char* what, const std::optional<double>& flag,
                   const std::optional<double>& pre) {
        if (flag) return *flag;
        if (pre) return *pre;
        throw validation_error(std::string("missing parameter: ") + what);
    };
    Resolved out;
    out.rates.alpha = need("--alpha", f.alpha, p.alpha);
    out.rates.beta = need("--beta", f.beta, p.beta);
    out.rates.gamma = need("--gamma", f.gamma, p.gamma);
    out.rates.q = need("--q", f.q, p.q);
    out.rates.n_sites = f.n ? *f.n : (p.n ? *p.n : throw validation_error(
                                                       "missing parameter: --n"));
    out.m = f.m ? f.m : p.m;

    if (f.solve_delta_flag && f.solve_beta_flag) {
        throw validation_error("--solve-delta and --solve-beta are exclusive");
    }
    const bool solve_delta =
        f.solve_delta_flag || (p.delta_from_class && !f.delta);
    if (solve_delta) {
        if (!out.m) {
            throw validation_error("--solve-delta needs a class (--m)");
        }
        out.rates.delta = 0;
        out.rates.delta = solve_delta_for_class(out.rates, *out.m);
    } else {
        out.rates.delta = need("--delta", f.delta, p.delta);
    }
    if (f.solve_beta_flag) {
        if (!out.m) throw validation_error("--solve-beta needs a class (--m)");
        out.rates.beta = solve_beta_for_class(out.rates, *out.m);
    }
    out.rates.validate();
    return out;
}

void add_rate_flags(CLI::App* cmd, RateFlags& f) {
    cmd->add_option("--preset", f.preset,
                    "parameter preset: table1..table5, fig2-left, fig2-right, "
                    "fig3-left, fig3-right, fig4");
    cmd->add_option("--alpha", f.alpha, "left injection rate");
    cmd->add_option("--beta", f.beta, "right extraction rate");
    cmd->add_option("--gamma", f.gamma, "left extraction rate");
    cmd->add_option("--delta", f.delta, "right injection rate");
    cmd->add_option("--q", f.q, "hopping asymmetry (right q/(q+1), left 1/(q+1))");
    cmd->add_option("--n", f.n, "number of sites");
    cmd->add_option("--m", f.m, "constraint class");
    cmd->add_flag("--solve-delta", f.solve_delta_flag,
                  "derive delta from the class constraint");
    cmd->add_flag("--solve-beta", f.solve_beta_flag,
                  "derive beta from the class constraint");
}

struct OutputFlags {
    std::string out;
    std::string format;  // per-command default when empty
    int threads = 0;
    std::string config;  // handled by the pre-scan; registered for help only
};

void add_output_flags(CLI::App* cmd, OutputFlags& f, const char* default_fmt) {
    cmd->add_option("--out", f.out, "output file (stdout when omitted)");
    cmd->add_option("--format", f.format,
                    std::string("output format: csv or json (default ") +
                        default_fmt + ")")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--threads", f.threads, "worker threads for parallel kernels");
    cmd->add_option("--config", f.config,
                    "JSON file with defaults for any flag of this subcommand");
}

std::string pick_format(const OutputFlags& f, const char* fallback) {
    return f.format.empty() ? fallback : f.format;
}

// Writes through to --out or stdout.
class Sink {
  public:
    explicit Sink(const std::string& path) {
        if (!path.empty()) {
            file_.open(path, std::ios::binary);
            if (!file_) throw validation_error("cannot open output file: " + path);
        }
    }
    std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

  private:
    std::ofstream file_;
};

json json_header(const char* command, const BoundaryRates& rates) {
    json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["command"] = command;
    doc["rates"] = json_rates(rates);
    return doc;
}

// ---------------------------------------------------------------------------
// Config-file pre-scan: inject "--key=value" pairs right after the
// subcommand for keys not already typed out, so explicit flags win.

bool flag_present(const std::vector<std::string>& args, const std::string& key) {
    const std::string plain = "--" + key;
    const std::string prefixed = plain + "=";
    for (const std::string& a : args) {
        if (a == plain || a.rfind(prefixed, 0) == 0) return true;
    }
    return false;
}

std::vector<std::string> apply_config_file(std::vector<std::string> args) {
    std::string path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
        else if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
    }
    if (path.empty()) return args;

    std::ifstream in(path);
    if (!in) throw validation_error("cannot open config file: " + path);
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw validation_error(std::string("config file is not valid JSON: ") +
                               e.what());
    }
    if (!doc.is_object()) {
        throw validation_error("config file must hold a JSON object");
    }

    // Insertion point: right after the subcommand token.
    std::size_t insert_at = args.size();
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (!args[i].empty() && args[i][0] != '-') {
            insert_at = i + 1;
            break;
        }
    }

    std::vector<std::string> extra;
    for (const auto& [key, value] : doc.items()) {
        if (flag_present(args, key)) continue;
        if (value.is_boolean()) {
            if (value.get<bool>()) extra.push_back("--" + key);
        } else if (value.is_number_integer()) {
            extra.push_back("--" + key + "=" +
                            std::to_string(value.get<long long>()));
        } else if (value.is_number()) {
            extra.push_back("--" + key + "=" + format_double(value.get<double>()));
        } else if (value.is_string()) {
            extra.push_back("--" + key + "=" + value.get<std::string>());
        } else {
            throw validation_error("config key '" + key +
                                   "' must be a scalar value");
        }
    }
    args.insert(args.begin() + static_cast<std::ptrdiff_t>(insert_at),
                extra.begin(), extra.end());
    return args;
}

// ---------------------------------------------------------------------------
// Subcommand implementations.

std::vector<complexd> sorted_spectrum(const BoundaryRates& rates) {
    const VectorXcd ev =
        Eigen::EigenSolver<MatrixXd>(build_markov_generator(rates)).eigenvalues();
    std::vector<complexd> out(ev.data(), ev.data() + ev.size());
    std::sort(out.begin(), out.end(), [](complexd a, complexd b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    return out;
}

int cmd_spectrum(const RateFlags& rf, const OutputFlags& of) {
    const Resolved res = resolve_rates(rf);
    const std::vector<complexd> ev = sorted_spectrum(res.rates);
    Sink sink(of.out);
    if (pick_format(of, "csv") == "json") {
        json doc = json_header("spectrum", res.rates);
        doc["eigenvalues"] = json::array();
        for (complexd z : ev) doc["eigenvalues"].push_back(json_complex(z));
        sink.stream() << doc.dump(2) << "\n";
    } else {
        std::vector<std::vector<std::string>> rows;
        for (std::size_t i = 0; i < ev.size(); ++i) {
            rows.push_back({std::to_string(i), format_double(ev[i].real()),
                            format_double(ev[i].imag())});
        }
        write_csv(sink.stream(), {"index", "re", "im"}, rows);
    }
    return 0;
}

std::string complex_label(complexd z) {
    return format_double(z.real()) + (z.imag() < 0 ? "-" : "+") +
           format_double(std::abs(z.imag())) + "i";
}

int cmd_baes(const RateFlags& rf, const OutputFlags& of, int starts,
             std::uint64_t seed, const std::string& kind_arg) {
    const Resolved res = resolve_rates(rf);
    const BoundaryRates& r = res.rates;

    std::vector<std::pair<std::string, TQKind>> kinds;
    const auto cls = constraint_class(r);
    if (kind_arg == "auto") {
        if (cls) {
            if (cls->m < r.n_sites) kinds.emplace_back("III", TQKind::III);
            kinds.emplace_back("IV", TQKind::IV);
        } else {
            kinds.emplace_back("I", TQKind::I);
        }
    } else if (kind_arg == "I") {
        kinds.emplace_back("I", TQKind::I);
    } else if (kind_arg == "III") {
        kinds.emplace_back("III", TQKind::III);
    } else if (kind_arg == "IV") {
        kinds.emplace_back("IV", TQKind::IV);
    } else {
        throw validation_error("--kind must be auto, I, III or IV");
    }

    std::vector<BetheRootSet> sets;
    json kind_counts = json::object();
    for (const auto& [label, kind] : kinds) {
        const std::vector<BetheRootSet> found = solve_baes(kind, r, starts, seed);
        kind_counts[label] = found.size();
        sets.insert(sets.end(), found.begin(), found.end());
    }
    if (cls && kind_arg == "auto") {
        sets.push_back(infinite_string(cls->m));
        kind_counts["string"] = 1;
    }

    const std::vector<complexd> levels = sorted_spectrum(r);
    const MatchReport rep = match_spectrum(sets, levels, r, 1e-7);

    Sink sink(of.out);
    if (pick_format(of, "json") == "csv") {
        std::vector<std::vector<std::string>> rows;
        for (const MatchPair& mp : rep.matched) {
            const BetheRootSet& s = sets[static_cast<std::size_t>(mp.set)];
            std::string roots;
            for (std::size_t i = 0; i < s.roots.size(); ++i) {
                if (i) roots += ";";
                roots += complex_label(s.roots[i]);
            }
            if (s.is_infinite_string) roots = "string";
            rows.push_back({format_double(levels[static_cast<std::size_t>(mp.level)].real()),
                            format_double(levels[static_cast<std::size_t>(mp.level)].imag()),
                            s.is_infinite_string ? "string"
                            : s.kind == TQKind::I ? "I"
                            : s.kind == TQKind::III ? "III"
                                                     : "IV",
                            roots, format_double(mp.abs_err)});
        }
        write_csv(sink.stream(), {"level_re", "level_im", "kind", "roots", "abs_err"},
                  rows);
    } else {
        json doc = json_header("baes", r);
        doc["starts"] = starts;
        doc["seed"] = seed;
        doc["kind_counts"] = kind_counts;
        doc["sets"] = json::array();
        for (const BetheRootSet& s : sets) doc["sets"].push_back(json_root_set(s, r));
        json match;
        match["pairs"] = json::array();
        for (const MatchPair& mp : rep.matched) {
            match["pairs"].push_back({{"level", mp.level},
                                      {"level_value",
                                       json_complex(levels[static_cast<std::size_t>(mp.level)])},
                                      {"set", mp.set},
                                      {"abs_err", mp.abs_err}});
        }
        match["unmatched_levels"] = rep.unmatched_levels;
        match["unmatched_sets"] = rep.unmatched_sets;
        match["max_abs_err"] = rep.max_abs_err;
        doc["match"] = match;
        sink.stream() << doc.dump(2) << "\n";
    }
    return 0;
}

int cmd_steady(const RateFlags& rf, const OutputFlags& of,
               const std::string& state_out) {
    const Resolved res = resolve_rates(rf);
    if (!res.m) throw validation_error("steady needs a constraint class (--m)");
    const BoundaryRates& r = res.rates;
    const VectorXd phi = steady_state(r, *res.m, Normalization::probability);

    if (!state_out.empty()) {
        Sink sink(state_out);
        write_state_csv(sink.stream(), phi, r.n_sites);
    }
    Sink sink(of.out);
    if (pick_format(of, "json") == "csv") {
        write_state_csv(sink.stream(), phi, r.n_sites);
        return 0;
    }
    json doc = json_header("steady", r);
    doc["m"] = *res.m;
    doc["current"] = current(phi, r);
    doc["right_boundary_current"] = right_boundary_current(phi, r);
    const VectorXd dens = density_profile(phi, r);
    doc["density"] = std::vector<double>(dens.data(), dens.data() + dens.size());
    if (*res.m == 1) doc["closed_form_current"] = closed_form_current_m1(r);
    if (*res.m == 2) doc["closed_form_current"] = closed_form_current_m2(r);
    if (*res.m == 0) doc["closed_form_current"] = 0.0;
    doc["normalization"] = "probability";
    sink.stream() << doc.dump(2) << "\n";
    return 0;
}

int cmd_observables(const RateFlags& rf, const OutputFlags& of) {
    const Resolved res = resolve_rates(rf);
    const BoundaryRates& r = res.rates;
    VectorXd phi;
    std::string source;
    if (res.m) {
        phi = steady_state(r, *res.m, Normalization::probability);
        source = "closed_form";
    } else {
        phi = numeric_steady_state_auto(r);
        source = "numeric";
    }
    const VectorXd dens = density_profile(phi, r);

    Sink sink(of.out);
    if (pick_format(of, "json") == "csv") {
        std::vector<std::vector<std::string>> rows;
        for (int k = 1; k <= r.n_sites; ++k) {
            rows.push_back({std::to_string(k), format_double(dens[k - 1])});
        }
        write_csv(sink.stream(), {"k", "density"}, rows);
        return 0;
    }
    json doc = json_header("observables", r);
    doc["state_source"] = source;
    doc["current"] = current(phi, r);
    doc["right_boundary_current"] = right_boundary_current(phi, r);
    json bonds = json::array();
    for (int b = 1; b < r.n_sites; ++b) bonds.push_back(bond_current(phi, r, b));
    doc["bond_currents"] = bonds;
    doc["density"] = std::vector<double>(dens.data(), dens.data() + dens.size());
    if (res.m) {
        doc["m"] = *res.m;
        if (*res.m == 0) doc["closed_form_current"] = 0.0;
        if (*res.m == 1) doc["closed_form_current"] = closed_form_current_m1(r);
        if (*res.m == 2) doc["closed_form_current"] = closed_form_current_m2(r);
    }
    sink.stream() << doc.dump(2) << "\n";
    return 0;
}

void write_current_scan(std::ostream& os, const std::string& vary_name,
                        const std::vector<CurrentScanRow>& rows) {
    std::vector<std::vector<std::string>> out;
    const bool redundant = vary_name == "theta";
    for (const CurrentScanRow& row : rows) {
        if (redundant) {
            out.push_back({format_double(row.theta), format_double(row.current)});
        } else {
            out.push_back({format_double(row.vary_value), format_double(row.theta),
                           format_double(row.current)});
        }
    }
    if (redundant) {
        write_csv(os, {"theta", "current"}, out);
    } else {
        write_csv(os, {vary_name, "theta", "current"}, out);
    }
}

std::string suffixed_path(const std::string& base, const std::string& tag) {
    const std::size_t dot = base.find_last_of('.');
    const std::size_t slash = base.find_last_of('/');
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) {
        return base + tag;
    }
    return base.substr(0, dot) + tag + base.substr(dot);
}

int cmd_scan(const RateFlags& rf, const OutputFlags& of,
             const std::string& figure, const std::string& vary, double from,
             double to, int points, bool log_grid) {
    const std::string fig = canonical_preset(figure);

    if (fig == "fig2-left") {
        RateFlags base = rf;
        if (base.preset.empty()) base.preset = "fig2-left";
        std::vector<double> grid;
        for (int i = 0; i <= 60; ++i) grid.push_back(-3.0 + 0.1 * i);
        const std::vector<double> q_values =
            rf.q ? std::vector<double>{*rf.q} : std::vector<double>{0.5, 1.1, 2.5};
        if (q_values.size() > 1 && of.out.empty()) {
            throw validation_error(
                "fig2-left emits one file per q value: pass --out");
        }
        for (double q : q_values) {
            RateFlags flags = base;
            flags.q = q;
            const Resolved res = resolve_rates(flags);
            const auto rows = scan_current(res.rates, ScanVariable::theta, grid);
            if (q_values.size() > 1) {
                Sink sink(suffixed_path(of.out, "_q" + format_double(q)));
                write_current_scan(sink.stream(), "theta", rows);
            } else {
                Sink sink(of.out);
                write_current_scan(sink.stream(), "theta", rows);
            }
        }
        return 0;
    }
    if (fig == "fig2-right") {
        RateFlags base = rf;
        if (base.preset.empty()) base.preset = "fig2-right";
        const Resolved res = resolve_rates(base);
        std::vector<double> sizes;
        for (int n = 2; n <= 16; ++n) sizes.push_back(n);
        const auto rows = scan_current(res.rates, ScanVariable::sites, sizes);
        Sink sink(of.out);
        write_current_scan(sink.stream(), "n_sites", rows);
        return 0;
    }
    if (fig == "fig3-left" || fig == "fig3-right") {
        RateFlags base = rf;
        if (base.preset.empty()) base.preset = fig;
        const Resolved res = resolve_rates(base);
        const std::vector<double> thetas{0.0, 3.5, 7.0, 8.0, 16.0};
        const auto rows = scan_density(res.rates, thetas);
        Sink sink(of.out);
        std::vector<std::vector<std::string>> out;
        for (const DensityScanRow& row : rows) {
            out.push_back({format_double(row.theta), std::to_string(row.site),
                           format_double(row.density)});
        }
        write_csv(sink.stream(), {"theta", "site", "density"}, out);
        return 0;
    }
    if (fig == "fig4") {
        RateFlags base = rf;
        if (base.preset.empty()) base.preset = "fig4";
        const Resolved res = resolve_rates(base);
        const BoundaryRates& tpl = res.rates;
        std::vector<double> deltas;
        for (int i = 0; i < 75; ++i) {
            deltas.push_back(0.3 *
                             std::pow(4.0 / 0.3, static_cast<double>(i) / 74.0));
        }
        for (int m = 0; m <= tpl.n_sites; ++m) {
            deltas.push_back(solve_delta_for_class(tpl, m));
        }
        std::vector<std::string> header{"delta", "theta"};
        for (int k = 0; k <= tpl.n_sites; ++k) {
            header.push_back("omega_" + std::to_string(k));
        }
        header.push_back("residual");
        std::vector<std::vector<std::string>> out;
        for (double d : deltas) {
            const BoundaryRates r = tpl.with_delta(d);
            const DecompositionResult dec = omega_decomposition(r);
            std::vector<std::string> row{format_double(d), format_double(theta(r))};
            for (int k = 0; k <= tpl.n_sites; ++k) {
                row.push_back(format_double(dec.omega[k]));
            }
            row.push_back(format_double(dec.residual));
            out.push_back(std::move(row));
        }
        Sink sink(of.out);
        write_csv(sink.stream(), header, out);
        return 0;
    }
    if (!fig.empty()) throw validation_error("unknown figure: " + figure);

    // Manual scan.
    if (vary.empty()) {
        throw validation_error("scan needs --figure or --vary");
    }
    if (points < 2) throw validation_error("--points must be at least 2");
    std::vector<double> grid;
    for (int i = 0; i < points; ++i) {
        const double t = static_cast<double>(i) / (points - 1);
        grid.push_back(log_grid ? from * std::pow(to / from, t)
                                : from + (to - from) * t);
    }
    ScanVariable sv;
    if (vary == "theta") sv = ScanVariable::theta;
    else if (vary == "delta") sv = ScanVariable::delta;
    else if (vary == "sites") sv = ScanVariable::sites;
    else throw validation_error("--vary must be theta, delta or sites");

    RateFlags base = rf;
    if (sv == ScanVariable::theta || sv == ScanVariable::delta) {
        // The swept parameter needs no seed value.
        if (!base.delta && !base.solve_delta_flag &&
            (base.preset.empty() || !lookup_preset(base.preset) ||
             !lookup_preset(base.preset)->delta)) {
            base.delta = 0.0;
        }
    }
    const Resolved res = resolve_rates(base);
    const auto rows = scan_current(res.rates, sv, grid);
    Sink sink(of.out);
    write_current_scan(sink.stream(),
                       sv == ScanVariable::theta ? "theta"
                       : sv == ScanVariable::delta ? "delta"
                                                    : "n_sites",
                       rows);
    return 0;
}

int cmd_simulate(const RateFlags& rf, const OutputFlags& of,
                 std::uint64_t events, std::optional<std::uint64_t> burn_in,
                 std::uint64_t seed, int batches) {
    const Resolved res = resolve_rates(rf);
    SimConfig cfg;
    cfg.rates = res.rates;
    cfg.n_events = events;
    if (burn_in) cfg.burn_in_events = *burn_in;
    cfg.seed = seed;
    cfg.batch_count = batches;
    const SimEstimate est = simulate(cfg);

    Sink sink(of.out);
    json doc = json_header("simulate", res.rates);
    doc["n_events"] = events;
    doc["burn_in_events"] = burn_in ? json(*burn_in) : json("10%");
    doc["seed"] = seed;
    doc["batch_count"] = batches;
    doc["estimate"] = json_sim_estimate(est);
    sink.stream() << doc.dump(2) << "\n";
    return 0;
}

int cmd_verify(const RateFlags& rf, const OutputFlags& of) {
    const Resolved res = resolve_rates(rf);
    const BoundaryRates& r = res.rates;
    SplitMix64 rng(2024);
    auto rand_c = [&rng]() {
        return complexd(rng.next_uniform(-2, 2), rng.next_uniform(-2, 2));
    };

    struct Check {
        std::string name;
        double residual;
        double tol;
    };
    std::vector<Check> checks;

    {
        double worst = 0;
        for (int i = 0; i < 25; ++i) {
            worst = std::max(worst, ybe_residual(rand_c(), rand_c(), rand_c(), r.q));
        }
        checks.push_back({"yang-baxter", worst, 1e-11});
    }
    {
        double worst = 0;
        for (int i = 0; i < 25; ++i) {
            const auto [re, dual] = re_residual(rand_c(), rand_c(), r);
            worst = std::max({worst, re, dual});
        }
        checks.push_back({"reflection + dual", worst, 1e-11});
    }
    if (r.n_sites <= kDenseLimit) {
        const complexd x = rand_c(), y = rand_c();
        const MatrixXcd tx = transfer_matrix(x, r);
        const MatrixXcd ty = transfer_matrix(y, r);
        const MatrixXcd gen = build_markov_generator(r).cast<complexd>();
        const double c1 = (tx * ty - ty * tx).norm() / (tx.norm() * ty.norm());
        const double c2 = (tx * gen - gen * tx).norm() / (tx.norm() * gen.norm());
        checks.push_back({"transfer family commutes", std::max(c1, c2), 1e-9});

        const MatrixXd rebuilt = markov_from_transfer(r, DerivativeRoute::analytic);
        const MatrixXd exact = build_markov_generator(r);
        checks.push_back({"generator from transfer derivative",
                          (rebuilt - exact).cwiseAbs().maxCoeff() /
                              exact.cwiseAbs().maxCoeff(),
                          1e-8});
    }
    if (r.alpha > 0 && r.gamma > 0) {
        std::vector<complexd> phases{complexd(0, 0), complexd(1, 0),
                                     complexd(0.5, 0.3), complexd(-1.2, 0.7)};
        if (r.beta > 0 && r.delta > 0) {
            // Phase where individual divergence terms cancel pairwise; the
            // residual check must not be fooled by that conspiracy.
            phases.push_back(std::log(r.gamma * r.delta / (r.alpha * r.beta)) /
                             std::log(r.q));
        }
        const LocalRelationReport rep = verify_local_relations(r, phases);
        checks.push_back({"local divergence relations", rep.max_residual, 1e-11});
    }
    if (r.n_sites <= kDenseLimit) {
        const MatrixXd op = build_markov_generator(r);
        const MatrixXd tilde = tilde_family(r.n_sites - 1, r);
        checks.push_back({"zero-sum family invariance",
                          check_invariant_subspace(tilde, op), 1e-10});
        if (const auto cls = constraint_class(r)) {
            const MatrixXd fam = kink_family(cls->m, r);
            checks.push_back({"kink family invariance (class " +
                                  std::to_string(cls->m) + ")",
                              check_invariant_subspace(fam, op), 1e-10});
        }
    }

    bool all_pass = true;
    Sink sink(of.out);
    if (pick_format(of, "json") == "json") {
        json doc = json_header("verify", r);
        doc["checks"] = json::array();
        for (const Check& c : checks) {
            const bool pass = c.residual <= c.tol;
            all_pass = all_pass && pass;
            doc["checks"].push_back({{"name", c.name},
                                     {"residual", c.residual},
                                     {"tolerance", c.tol},
                                     {"pass", pass}});
        }
        doc["all_pass"] = all_pass;
        sink.stream() << doc.dump(2) << "\n";
    } else {
        std::vector<std::vector<std::string>> rows;
        for (const Check& c : checks) {
            const bool pass = c.residual <= c.tol;
            all_pass = all_pass && pass;
            rows.push_back({c.name, format_double(c.residual),
                            format_double(c.tol), pass ? "pass" : "fail"});
        }
        write_csv(sink.stream(), {"check", "residual", "tolerance", "status"},
                  rows);
    }
    if (!all_pass) {
        std::cerr << "verify: identity check failed" << "\n";
        return 2;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Exact solution laboratory for the open asymmetric exclusion chain"};
    app.set_version_flag("--version", "asep 1.0.0");
    app.require_subcommand(1);

    RateFlags rf_spectrum, rf_baes, rf_steady, rf_obs, rf_scan, rf_sim, rf_verify;
    OutputFlags of_spectrum, of_baes, of_steady, of_obs, of_scan, of_sim,
        of_verify;

    CLI::App* spectrum =
        app.add_subcommand("spectrum", "exact diagonalization of the generator");
    add_rate_flags(spectrum, rf_spectrum);
    add_output_flags(spectrum, of_spectrum, "csv");

    CLI::App* baes = app.add_subcommand(
        "baes", "solve the Bethe equations and match the exact spectrum");
    add_rate_flags(baes, rf_baes);
    add_output_flags(baes, of_baes, "json");
    int starts = 2000;
    std::uint64_t baes_seed = 1;
    std::string kind_arg = "auto";
    baes->add_option("--starts", starts, "Newton starts per family");
    baes->add_option("--seed", baes_seed, "random-start seed");
    baes->add_option("--kind", kind_arg, "root family: auto, I, III or IV");

    CLI::App* steady = app.add_subcommand(
        "steady", "closed-form steady state at a constraint class");
    add_rate_flags(steady, rf_steady);
    add_output_flags(steady, of_steady, "json");
    std::string state_out;
    steady->add_option("--state-out", state_out,
                       "also write the full state vector as CSV here");

    CLI::App* obs = app.add_subcommand(
        "observables", "current and density profile of the steady state");
    add_rate_flags(obs, rf_obs);
    add_output_flags(obs, of_obs, "json");

    CLI::App* scan = app.add_subcommand(
        "scan", "current/density/expansion scans over parameter grids");
    add_rate_flags(scan, rf_scan);
    add_output_flags(scan, of_scan, "csv");
    std::string figure, vary;
    double from = 0, to = 1;
    int points = 2;
    bool log_grid = false;
    scan->add_option("--figure", figure,
                     "benchmark scan: 2-left, 2-right, 3-left, 3-right or 4");
    scan->add_option("--vary", vary, "manual scan variable: theta, delta, sites");
    scan->add_option("--from", from, "grid start");
    scan->add_option("--to", to, "grid end");
    scan->add_option("--points", points, "grid size");
    scan->add_flag("--log", log_grid, "logarithmic grid spacing");

    CLI::App* sim = app.add_subcommand(
        "simulate", "kinetic Monte Carlo estimate of current and densities");
    add_rate_flags(sim, rf_sim);
    add_output_flags(sim, of_sim, "json");
    std::uint64_t events = 0, sim_seed = 1;
    std::optional<std::uint64_t> burn_in;
    int batches = 10;
    sim->add_option("--events", events, "number of jump events")->required();
    sim->add_option("--burn-in", burn_in, "events discarded before measuring");
    sim->add_option("--seed", sim_seed, "trajectory seed");
    sim->add_option("--batches", batches, "batch count for error bars");

    CLI::App* verify = app.add_subcommand(
        "verify", "run the exact-solvability identity suite at these rates");
    add_rate_flags(verify, rf_verify);
    add_output_flags(verify, of_verify, "json");

    std::vector<std::string> args(argv + 1, argv + argc);
    try {
        args = apply_config_file(args);
    } catch (const validation_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    try {
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (spectrum->parsed()) {
            set_worker_count(of_spectrum.threads);
            return cmd_spectrum(rf_spectrum, of_spectrum);
        }
        if (baes->parsed()) {
            set_worker_count(of_baes.threads);
            return cmd_baes(rf_baes, of_baes, starts, baes_seed, kind_arg);
        }
        if (steady->parsed()) {
            set_worker_count(of_steady.threads);
            return cmd_steady(rf_steady, of_steady, state_out);
        }
        if (obs->parsed()) {
            set_worker_count(of_obs.threads);
            return cmd_observables(rf_obs, of_obs);
        }
        if (scan->parsed()) {
            set_worker_count(of_scan.threads);
            return cmd_scan(rf_scan, of_scan, figure, vary, from, to, points,
                            log_grid);
        }
        if (sim->parsed()) {
            set_worker_count(of_sim.threads);
            return cmd_simulate(rf_sim, of_sim, events, burn_in, sim_seed,
                                batches);
        }
        if (verify->parsed()) {
            set_worker_count(of_verify.threads);
            return cmd_verify(rf_verify, of_verify);
        }
        throw validation_error("no subcommand given");
    } catch (const validation_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const identity_error& e) {
        std::cerr << "identity violated: " << e.what() << "\n";
        return 2;
    } catch (const numerical_error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    }
}

#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include <hillspec/birkhoff.hpp>
#include <hillspec/galerkin.hpp>
#include <hillspec/io.hpp>
#include <hillspec/kdv.hpp>
#include <hillspec/reduction.hpp>

namespace hillspec::cli {

using nlohmann::json;

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string csv_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

class Csv {
public:
    Csv(const ExperimentConfig& cfg, std::vector<std::string> header) {
        os_ << "# hillspec " << kVersion << " config " << cfg.hash() << "\n";
        row(header);
    }
    void row(const std::vector<std::string>& fields) {
        for (std::size_t i = 0; i < fields.size(); ++i) os_ << (i ? "," : "") << csv_field(fields[i]);
        os_ << "\n";
    }
    std::string str() const { return os_.str(); }

private:
    std::ostringstream os_;
};

std::string num(double v) { return csv_number(v); }

json cplx_json(cplx z) { return json::array({z.real(), z.imag()}); }

json header(const ExperimentConfig& cfg, const char* command) {
    json j;
    j["config_hash"] = cfg.hash();
    j["version"] = kVersion;
    j["command"] = command;
    json c;
    for (const auto& [k, v] : cfg.canonical()) c[k] = v;
    j["config"] = c;
    return j;
}

void write_file(const ExperimentConfig& cfg, const std::string& name, const std::string& body) {
    std::filesystem::create_directories(cfg.out);
    const auto path = std::filesystem::path(cfg.out) / name;
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot write output file '" + path.string() + "'");
    f << body;
}

void write_json(const ExperimentConfig& cfg, const std::string& name, const json& j) {
    write_file(cfg, name, j.dump(2) + "\n");
}

struct Setup {
    Weight w;
    Potential q;
};

Setup setup(const ExperimentConfig& cfg) {
    if (cfg.K < 16) throw ConfigError("field 'spectral.K': need K >= 16");
    Setup st;
    st.w = parse_weight(cfg.weight);
    st.q = parse_potential(cfg.potential, cfg.s, st.w, cfg.seed);
    return st;
}

double reduction_m(const ExperimentConfig& cfg, const Potential& q, const Weight& w) {
    return cfg.m > 0.0 ? cfg.m : sup_norm(q.seq, w, cfg.s);
}

// ----------------------------------------------------------------- suites

struct SuiteResult {
    std::string status;  // pass | fail | skipped
    json detail;
};

std::vector<std::pair<index_t, cplx>> read_gap_table(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot read gap table '" + path + "'");
    std::vector<std::pair<index_t, cplx>> out;
    std::string line;
    int lineno = 0;
    while (std::getline(f, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#' || line[0] == 'n') continue;
        std::stringstream ss(line);
        std::string a, b, c;
        std::getline(ss, a, ',');
        std::getline(ss, b, ',');
        std::getline(ss, c, ',');
        try {
            out.emplace_back(std::stoll(a), cplx(std::stod(b), c.empty() ? 0.0 : std::stod(c)));
        } catch (const std::exception&) {
            throw ConfigError(path + ":" + std::to_string(lineno) + ": expected n,gamma_re,gamma_im");
        }
    }
    return out;
}

SuiteResult suite_decay(const ExperimentConfig& cfg, const Setup& st) {
    const DecayReport rep = verify_decay(st.q, st.w, cfg.s, {cfg.K, 2 * cfg.K});
    Csv csv(cfg, {"K", "trust", "gap_sup", "mid_sup"});
    for (const auto& r : rep.rows) csv.row({std::to_string(r.K), std::to_string(r.trust), num(r.gap_sup), num(r.mid_sup)});
    write_file(cfg, "decay.csv", csv.str());
    const double scale = 10.0 * rep.q_norm;
    const auto& last = rep.rows.back();
    const bool ok = rep.gap_rel_change < 0.01 && rep.mid_rel_change < 0.01 && last.gap_sup <= scale &&
                    last.mid_sup <= scale && rep.tail_ok;
    json d = {{"gap_rel_change", rep.gap_rel_change}, {"mid_rel_change", rep.mid_rel_change},
              {"q_norm", rep.q_norm},                 {"tail_lhs", rep.tail_lhs},
              {"tail_rhs", rep.tail_rhs},             {"N", rep.N}};
    return {ok ? "pass" : "fail", d};
}

SuiteResult suite_sandwich(const ExperimentConfig& cfg, const Setup& st) {
    if (!st.q.is_real()) return {"skipped", {{"reason", "complex potential"}}};
    const ReductionContext ctx = make_context(st.q, cfg.s, st.w, reduction_m(cfg, st.q, st.w));
    const index_t trust = trust_count_for(cfg.K);
    if (ctx.M_ms() > trust)
        return {"skipped", {{"reason", "M_ms beyond the trusted Galerkin range"}, {"M_ms", ctx.M_ms()}}};
    const index_t n_max = std::min(trust, std::max(ctx.M_ms(), st.q.band()) + 4);
    const AdaptedResult ad = adapted_coefficients(ctx, n_max);

    std::map<index_t, cplx> gaps;
    if (!cfg.gap_table.empty()) {
        for (const auto& [n, g] : read_gap_table(cfg.gap_table)) gaps[n] = g;
    } else {
        const auto gm = gaps_and_midpoints(periodic_spectrum(st.q, cfg.K));
        for (std::size_t i = 0; i < gm.gamma.size(); ++i) gaps[static_cast<index_t>(i + 1)] = gm.gamma[i];
    }
    Csv csv(cfg, {"n", "lo", "gamma_sq", "hi", "status"});
    int tested = 0, violations = 0;
    for (index_t n = ctx.M_ms(); n <= n_max; ++n) {
        if (!gaps.count(n)) continue;
        const SandwichReport r = gap_sandwich(ctx, n, ad.r, gaps[n]);
        csv.row({std::to_string(n), num(r.lo), num(r.mid), num(r.hi), r.status});
        if (r.condition_met) {
            ++tested;
            if (!r.pass) ++violations;
        }
    }
    write_file(cfg, "sandwich.csv", csv.str());
    json d = {{"tested", tested}, {"violations", violations}, {"M_ms", ctx.M_ms()}, {"n_max", n_max}};
    return {violations == 0 ? "pass" : "fail", d};
}

SuiteResult suite_isospectral(const ExperimentConfig& cfg, const Setup& st) {
    const double t = cfg.t > 0.0 ? cfg.t : 0.01;
    // keep the potential inside the 2/3 cutoff and the PDE modes inside the spectral basis
    const index_t K_pde = std::max(cfg.K_pde, (3 * st.q.band() + 1) / 2 + 1);
    const DriftReport dr = isospectral_check(st.q, t, std::max(cfg.K, K_pde), K_pde, cfg.dt);
    Csv csv(cfg, {"n", "lambda_minus_drift", "lambda_plus_drift", "gamma_drift", "mu_motion"});
    for (const auto& r : dr.rows)
        csv.row({std::to_string(r.n), num(r.lambda_minus_drift), num(r.lambda_plus_drift), num(r.gamma_drift),
                 num(r.mu_motion)});
    write_file(cfg, "isospectral.csv", csv.str());
    const double h_rel = std::abs(dr.end.hamiltonian - dr.start.hamiltonian) / std::max(std::abs(dr.start.hamiltonian), 1e-300);
    const double l2_rel = std::abs(dr.end.L2 - dr.start.L2) / std::max(dr.start.L2, 1e-300);
    const bool ok = dr.max_periodic_drift < 1e-6 && (dr.start.L2 == 0.0 || (h_rel < 1e-6 && l2_rel < 1e-6));
    json d = {{"t", t},
              {"max_periodic_drift", dr.max_periodic_drift},
              {"max_gamma_drift", dr.max_gamma_drift},
              {"max_mu_motion", dr.max_mu_motion},
              {"hamiltonian_rel_drift", h_rel},
              {"l2_rel_drift", l2_rel}};
    return {ok ? "pass" : "fail", d};
}

SuiteResult suite_airy(const ExperimentConfig& cfg) {
    if (cfg.airy_points < 2) throw ConfigError("field 'verify.airy_points': need at least 2");
    std::vector<double> ts;
    for (index_t i = 0; i < cfg.airy_points; ++i)
        ts.push_back(std::pow(10.0, -9.0 + 6.0 * static_cast<double>(i) / static_cast<double>(cfg.airy_points - 1)));
    const AiryDemoReport rep = airy_norm_demo(cfg.s, 0.1, 256, ts, cfg.airy_window);
    Csv csv(cfg, {"t", "sup_norm_distance", "max_component_distance"});
    for (const auto& r : rep.rows) csv.row({num(r.t), num(r.sup_distance), num(r.max_component_distance)});
    write_file(cfg, "airy.csv", csv.str());
    bool ok = rep.sup_floor >= 0.1;
    for (double sl : rep.component_slopes) ok = ok && std::abs(sl - 1.0) <= 0.05;
    json d = {{"sup_floor", rep.sup_floor}, {"component_slopes", rep.component_slopes}};
    return {ok ? "pass" : "fail", d};
}

}  // namespace

// ----------------------------------------------------------------- commands

int cmd_spectrum(const ExperimentConfig& cfg, std::ostream& log) {
    const Setup st = setup(cfg);
    const SpectrumResult sp = full_spectrum(st.q, cfg.K);
    const GapsMidpoints gm = gaps_and_midpoints(sp);

    json j = header(cfg, "spectrum");
    j["K"] = sp.K;
    j["trust_count"] = sp.trust_count;
    json per = json::array(), dir = json::array();
    for (cplx z : sp.periodic) per.push_back(cplx_json(z));
    for (cplx z : sp.dirichlet) dir.push_back(cplx_json(z));
    j["periodic"] = per;
    j["dirichlet"] = dir;
    write_json(cfg, "spectrum.json", j);

    Csv csv(cfg, {"n", "lambda_minus_re", "lambda_minus_im", "lambda_plus_re", "lambda_plus_im", "gamma_re",
                  "gamma_im", "tau_re", "tau_im", "mu_re", "mu_im"});
    const cplx l0 = sp.periodic.front();
    csv.row({"0", "", "", num(l0.real()), num(l0.imag()), "", "", "", "", "", ""});
    const auto count = std::min<std::size_t>(static_cast<std::size_t>(sp.trust_count), gm.gamma.size());
    for (std::size_t i = 0; i < count; ++i) {
        const auto n = static_cast<index_t>(i + 1);
        const cplx lm = sp.lambda_minus(n), lp = sp.lambda_plus(n), mu = sp.mu(n);
        csv.row({std::to_string(n), num(lm.real()), num(lm.imag()), num(lp.real()), num(lp.imag()),
                 num(gm.gamma[i].real()), num(gm.gamma[i].imag()), num(gm.tau[i].real()), num(gm.tau[i].imag()),
                 num(mu.real()), num(mu.imag())});
    }
    write_file(cfg, "spectrum.csv", csv.str());
    log << "spectrum: K=" << cfg.K << ", " << count << " trusted gaps written to " << cfg.out << "\n";
    return kPass;
}

int cmd_reduce(const ExperimentConfig& cfg, std::ostream& log) {
    const Setup st = setup(cfg);
    const double m = reduction_m(cfg, st.q, st.w);
    const ReductionContext ctx = make_context(st.q, cfg.s, st.w, m);
    const index_t n_from = cfg.n_from > 0 ? cfg.n_from : ctx.n_s();
    const index_t n_to = cfg.n_to > 0 ? cfg.n_to : n_from + 10;
    if (n_to < n_from) throw ConfigError("field 'reduction.n_to': must be >= n_from");

    const SpectrumResult sp = periodic_spectrum(st.q, cfg.K);
    const bool want_sandwich = st.q.is_real() && n_to >= ctx.M_ms();
    AdaptedResult ad;
    if (want_sandwich) ad = adapted_coefficients(ctx, std::max(n_to, ctx.M_ms()));

    Csv csv(cfg, {"n", "status", "alpha_re", "alpha_im", "xi1_re", "xi1_im", "xi2_re", "xi2_im", "a_n_re", "a_n_im",
                  "b_n_re", "b_n_im", "b_neg_n_re", "b_neg_n_im", "gap_estimate", "oracle_lambda_minus",
                  "oracle_lambda_plus", "oracle_gap", "mismatch", "neumann_terms", "contraction_bound", "sandwich"});
    json rows = json::array();
    double max_mismatch = 0.0;
    int failures = 0;
    for (index_t n = n_from; n <= n_to; ++n) {
        const ReductionResult r = reduce(ctx, n);
        json jr = {{"n", n}};
        if (r.below_threshold) {
            csv.row({std::to_string(n), "below-threshold", "", "", "", "", "", "", "", "", "", "", "", "", "", "", "",
                     "", "", "", "", ""});
            jr["status"] = "below-threshold";
            rows.push_back(jr);
            continue;
        }
        std::string status = "ok", oracle_m = "", oracle_p = "", oracle_g = "", mismatch = "";
        if (n <= sp.trust_count) {
            const cplx lm = sp.lambda_minus(n), lp = sp.lambda_plus(n);
            const double scale = mode_symbol(n);
            const double mm = std::max(std::abs(r.xi_1 - lm), std::abs(r.xi_2 - lp)) / scale;
            const double og = std::abs(lp - lm);
            double gm = std::abs(r.gap_estimate - og);
            if (og > 1e-9) gm /= og;
            const double worst = std::max(mm, og > 1e-9 ? gm : 0.0);
            max_mismatch = std::max(max_mismatch, worst);
            oracle_m = num(lm.real());
            oracle_p = num(lp.real());
            oracle_g = num(og);
            mismatch = num(worst);
            if (worst > cfg.tol) {
                status = "oracle-mismatch";
                ++failures;
            }
        } else {
            status = "no-oracle";
        }
        std::string sw;
        if (want_sandwich && n >= ctx.M_ms() && n <= sp.trust_count) {
            const SandwichReport rep = gap_sandwich(ctx, n, ad.r, sp.lambda_plus(n) - sp.lambda_minus(n));
            sw = rep.status;
            if (rep.condition_met && !rep.pass) {
                status = "sandwich-fail";
                ++failures;
            }
        }
        csv.row({std::to_string(n), status, num(r.alpha_n.real()), num(r.alpha_n.imag()), num(r.xi_1.real()),
                 num(r.xi_1.imag()), num(r.xi_2.real()), num(r.xi_2.imag()), num(r.a_n.real()), num(r.a_n.imag()),
                 num(r.b_n.real()), num(r.b_n.imag()), num(r.b_neg_n.real()), num(r.b_neg_n.imag()),
                 num(r.gap_estimate), oracle_m, oracle_p, oracle_g, mismatch, std::to_string(r.neumann_terms_used),
                 num(r.contraction_bound), sw});
        jr["status"] = status;
        jr["alpha"] = cplx_json(r.alpha_n);
        jr["xi"] = json::array({cplx_json(r.xi_1), cplx_json(r.xi_2)});
        jr["a_n"] = cplx_json(r.a_n);
        jr["b_n"] = cplx_json(r.b_n);
        jr["b_neg_n"] = cplx_json(r.b_neg_n);
        jr["gap_estimate"] = r.gap_estimate;
        jr["neumann_terms_used"] = r.neumann_terms_used;
        jr["contraction_bound"] = r.contraction_bound;
        rows.push_back(jr);
    }
    write_file(cfg, "reduce.csv", csv.str());
    json j = header(cfg, "reduce");
    j["thresholds"] = {{"c_s", ctx.th.c_s}, {"c_s_prime", ctx.th.c_s_prime}, {"q_norm", ctx.th.q_norm},
                       {"m", m},           {"n_s", ctx.n_s()},             {"N_ms", ctx.N_ms()},
                       {"M_ms", ctx.M_ms()}};
    j["rows"] = rows;
    j["max_mismatch"] = max_mismatch;
    j["pass"] = failures == 0;
    write_json(cfg, "reduce.json", j);
    log << "reduce: n=" << n_from << ".." << n_to << ", n_s=" << ctx.n_s() << ", max mismatch " << max_mismatch
        << (failures ? ", FAILED" : "") << "\n";
    return failures ? kAssertionFailed : kPass;
}

int cmd_flow(const ExperimentConfig& cfg, std::ostream& log) {
    const Setup st = setup(cfg);
    const SpectrumResult sp = periodic_spectrum(st.q, cfg.K);
    GapsMidpoints gm = gaps_and_midpoints(sp);
    const ActionReport I = actions_from_gaps(gm.gamma);
    const FrequencyReport om = frequencies(I.I);
    const BirkhoffState z0 = linearized_birkhoff(st.q);
    const BirkhoffState zt = flow(z0, cfg.t);

    Csv csv(cfg, {"n", "gamma", "action_from_gap", "frequency_from_gap", "z_re", "z_im", "z_t_re", "z_t_im",
                  "action_drift"});
    const index_t rows = std::max<index_t>(static_cast<index_t>(I.I.size()), z0.count());
    for (index_t n = 1; n <= rows; ++n) {
        const auto i = static_cast<std::size_t>(n - 1);
        const bool has_gap = i < I.I.size();
        csv.row({std::to_string(n), has_gap ? num(gm.gamma[i].real()) : "", has_gap ? num(I.I[i]) : "",
                 has_gap ? num(om.omega[i]) : "", num(z0.z(n).real()), num(z0.z(n).imag()), num(zt.z(n).real()),
                 num(zt.z(n).imag()), num(std::abs(zt.action(n) - z0.action(n)))});
    }
    write_file(cfg, "flow.csv", csv.str());

    json j = header(cfg, "flow");
    const json state = json::parse(to_json(zt));
    for (auto it = state.begin(); it != state.end(); ++it) j[it.key()] = it.value();
    j["t"] = cfg.t;
    j["actions_from_gaps"] = I.I;
    j["frequencies_from_gaps"] = om.omega;
    write_json(cfg, "flow.json", j);
    log << "flow: t=" << cfg.t << ", " << z0.count() << " modes\n";
    return kPass;
}

int cmd_verify(const ExperimentConfig& cfg, std::ostream& log) {
    static const std::vector<std::string> kSuites{"decay", "sandwich", "isospectral", "airy-demo"};
    std::vector<std::string> run;
    if (cfg.suite == "all")
        run = kSuites;
    else if (std::find(kSuites.begin(), kSuites.end(), cfg.suite) != kSuites.end())
        run = {cfg.suite};
    else
        throw ConfigError("field 'verify.suite': unknown suite '" + cfg.suite + "'");

    json j = header(cfg, "verify");
    json suites = json::object();
    int passed = 0, failed = 0, skipped = 0;
    json failed_names = json::array();
    for (const auto& name : run) {
        SuiteResult r;
        if (name == "airy-demo") {
            r = suite_airy(cfg);
        } else {
            const Setup st = setup(cfg);
            if (name == "decay") r = suite_decay(cfg, st);
            if (name == "sandwich") r = suite_sandwich(cfg, st);
            if (name == "isospectral") r = suite_isospectral(cfg, st);
        }
        suites[name] = {{"status", r.status}, {"detail", r.detail}};
        if (r.status == "pass") ++passed;
        if (r.status == "skipped") ++skipped;
        if (r.status == "fail") {
            ++failed;
            failed_names.push_back(name);
            log << "verify: criterion '" << name << "' FAILED\n";
        } else {
            log << "verify: " << name << " " << r.status << "\n";
        }
    }
    j["suites"] = suites;
    j["passed"] = passed;
    j["failed"] = failed;
    j["skipped"] = skipped;
    j["failed_criteria"] = failed_names;
    write_json(cfg, "verify.json", j);
    return failed ? kAssertionFailed : kPass;
}

}  // namespace hillspec::cli

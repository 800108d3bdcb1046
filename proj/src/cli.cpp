#include "jtri/cli.hpp"

#include "jtri/decomp.hpp"
#include "jtri/errors.hpp"
#include "jtri/io.hpp"
#include "jtri/jscc.hpp"
#include "jtri/matcore.hpp"
#include "jtri/mimolink.hpp"
#include "jtri/multicast.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <random>
#include <sstream>
#include <vector>

namespace jtri::cli {

namespace {

using Json = nlohmann::ordered_json;

constexpr double kUnitaryTol = 1e-10;
constexpr double kDiagTol = 1e-9;
constexpr double kBitsTol = 1e-8;

struct Command_ {
    Command command;
    std::string_view name;
};

constexpr std::array<Command_, 9> kCommands{{{Command::gtd, "gtd"},
                                             {Command::gmd, "gmd"},
                                             {Command::gsv, "gsv"},
                                             {Command::joint, "joint"},
                                             {Command::multicast, "multicast"},
                                             {Command::rates, "rates"},
                                             {Command::sdr_region, "sdr-region"},
                                             {Command::fig4, "fig4"},
                                             {Command::lemma1, "lemma1"}}};

std::string format12(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

// 12 significant digits; non-finite values become null.
Json num(double v) {
    if (!std::isfinite(v)) {
        return nullptr;
    }
    const double r = std::strtod(format12(v).c_str(), nullptr);
    return r == 0.0 ? 0.0 : r;
}

Json nums(const RealVector& v) {
    Json a = Json::array();
    for (double x : v) {
        a.push_back(num(x));
    }
    return a;
}

Json matrix_json(const ComplexMatrix& m) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) {
            row.push_back(Json::array({num(m(i, j).real()), num(m(i, j).imag())}));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

double db(double sdr) {
    return 10.0 * std::log10(sdr);
}

struct CsvRow {
    double param;
    double sdr1;
    double sdr2;
    std::string scheme;
};

struct Report {
    Json body;
    bool passed = true;
    std::vector<CsvRow> region;
    bool is_region = false;
    std::string param_column = "gamma";
};

void require_count(const std::vector<ComplexMatrix>& mats, std::size_t n, std::string_view what) {
    if (mats.size() < n) {
        throw ParseError(std::string(what) + " needs " + std::to_string(n) + " input matrices, got " +
                         std::to_string(mats.size()));
    }
}

RealVector vector_from(const ComplexMatrix& m) {
    if (m.rows() != 1 && m.cols() != 1) {
        throw ParseError("target must be given as a 1 x n or n x 1 matrix");
    }
    RealVector v;
    for (const Complex& z : m.entries()) {
        if (z.imag() != 0.0) {
            throw ParseError("target entries must be real");
        }
        v.push_back(z.real());
    }
    return v;
}

RealVector target_from(const RunConfig& cfg, const std::vector<ComplexMatrix>& mats, std::size_t index) {
    if (cfg.target) {
        return *cfg.target;
    }
    if (mats.size() > index) {
        return vector_from(mats[index]);
    }
    return {};
}

InputCovariance covariance_from(const RunConfig& cfg, const std::vector<ComplexMatrix>& mats, std::size_t index,
                                std::size_t n) {
    if (mats.size() > index) {
        const ComplexMatrix& c = mats[index];
        double tr = 0.0;
        for (std::size_t i = 0; i < std::min(c.rows(), c.cols()); ++i) {
            tr += c(i, i).real();
        }
        return {c, std::max(tr, 0.0)};
    }
    return InputCovariance::scaled_identity(n, cfg.power);
}

Json gtd_checks(const GtdCheck& c, double tol_recon, bool& passed) {
    passed = c.reconstruction <= tol_recon && c.unitarity_u <= kUnitaryTol && c.unitarity_v <= kUnitaryTol &&
             c.below_diagonal <= kDiagTol && c.diagonal_error <= kDiagTol;
    return Json{{"reconstruction", num(c.reconstruction)}, {"unitarity_u", num(c.unitarity_u)},
                {"unitarity_v", num(c.unitarity_v)},       {"below_diagonal", num(c.below_diagonal)},
                {"diagonal_error", num(c.diagonal_error)}, {"tol_recon", num(tol_recon)},
                {"passed", passed}};
}

Report run_gtd(const RunConfig& cfg, const std::vector<ComplexMatrix>& mats, bool geometric) {
    require_count(mats, 1, geometric ? "gmd" : "gtd");
    const ComplexMatrix& a = mats[0];
    const RealVector sigma = singular_values(a);
    GtdFactors f = geometric ? gmd(a) : [&] {
        const RealVector t = target_from(cfg, mats, 1);
        if (t.empty()) {
            throw ParseError("gtd needs a target diagonal (--target or a second input matrix)");
        }
        return gtd(a, PositiveVector(t));
    }();
    const PositiveVector target = geometric ? geometric_mean_vector(PositiveVector(sigma))
                                            : PositiveVector(target_from(cfg, mats, 1));
    Report r;
    r.body["command"] = geometric ? "gmd" : "gtd";
    r.body["input"] = {{"rows", a.rows()}, {"cols", a.cols()}};
    r.body["singular_values"] = nums(sigma);
    r.body["target"] = nums(target.values());
    r.body["t_diagonal"] = nums(f.t.real_diagonal());
    r.body["factors"] = {{"u", matrix_json(f.u)}, {"t", matrix_json(f.t)}, {"v", matrix_json(f.v)}};
    r.body["checks"] = gtd_checks(verify_gtd(a, f, target), cfg.tol_recon, r.passed);
    return r;
}

Json gsv_json(const GsvSpectrum& mu) {
    return {{"values", nums(mu.values)}, {"zero_count", mu.zero_count}, {"infinite_count", mu.infinite_count}};
}

Report run_gsv(const std::vector<ComplexMatrix>& mats) {
    require_count(mats, 2, "gsv");
    const GsvSpectrum mu = gsv(mats[0], mats[1]);
    Report r;
    r.body["command"] = "gsv";
    r.body["gsv"] = gsv_json(mu);
    r.passed = mu.size() == mats[0].cols();
    r.body["checks"] = {{"count", mu.size()}, {"expected", mats[0].cols()}, {"passed", r.passed}};
    return r;
}

Report run_joint(const RunConfig& cfg, const std::vector<ComplexMatrix>& mats) {
    require_count(mats, 2, "joint");
    const ComplexMatrix& a1 = mats[0];
    const ComplexMatrix& a2 = mats[1];
    const GsvSpectrum mu = gsv(a1, a2);
    const RealVector t = target_from(cfg, mats, 2);
    const JointTriangularization j =
        t.empty() ? joint_equal_ratio(a1, a2) : joint_triangularize(a1, a2, PositiveVector(t));
    const PositiveVector requested = t.empty() ? j.ratio : PositiveVector(t);
    const JointCheck c = verify_joint(a1, a2, j, &requested);

    Report r;
    r.passed = c.reconstruction1 <= cfg.tol_recon && c.reconstruction2 <= cfg.tol_recon &&
               c.unitarity_u1 <= kUnitaryTol && c.unitarity_u2 <= kUnitaryTol && c.unitarity_v <= kUnitaryTol &&
               c.below_diagonal <= kDiagTol && c.ratio_error <= kDiagTol && c.diagonals_positive;
    r.body["command"] = "joint";
    r.body["gsv"] = gsv_json(mu);
    r.body["requested_ratio"] = nums(requested.values());
    r.body["ratio"] = nums(j.ratio.values());
    r.body["t1_diagonal"] = nums(j.t1.real_diagonal());
    r.body["t2_diagonal"] = nums(j.t2.real_diagonal());
    r.body["factors"] = {{"t1", matrix_json(j.t1)}, {"t2", matrix_json(j.t2)}, {"v", matrix_json(j.v)}};
    r.body["checks"] = {{"reconstruction1", num(c.reconstruction1)},
                        {"reconstruction2", num(c.reconstruction2)},
                        {"unitarity_u1", num(c.unitarity_u1)},
                        {"unitarity_u2", num(c.unitarity_u2)},
                        {"unitarity_v", num(c.unitarity_v)},
                        {"below_diagonal", num(c.below_diagonal)},
                        {"ratio_error", num(c.ratio_error)},
                        {"diagonals_positive", c.diagonals_positive},
                        {"tol_recon", num(cfg.tol_recon)},
                        {"passed", r.passed}};
    return r;
}

Report run_rates(const RunConfig& cfg, const std::vector<ComplexMatrix>& mats) {
    require_count(mats, 1, "rates");
    const Channel ch(mats[0]);
    const InputCovariance cx = covariance_from(cfg, mats, 1, ch.num_tx());
    const SicScheme s = build_sic_scheme(ch, cx);
    const double mi = mutual_information(ch, cx);

    double sum = 0.0;
    double prop1 = 0.0;
    for (std::size_t j = 0; j < s.rates.size(); ++j) {
        sum += s.rates[j];
        prop1 = std::max(prop1, std::abs(std::log2(1.0 + s.sinrs[j]) - s.rates[j]));
    }
    Report r;
    r.passed = std::abs(sum - mi) <= kBitsTol && prop1 <= kBitsTol;
    r.body["command"] = "rates";
    r.body["power"] = num(cx.power());
    r.body["mutual_information"] = num(mi);
    r.body["rates"] = nums(s.rates);
    r.body["sinrs"] = nums(s.sinrs);
    r.body["sum_rate"] = num(sum);
    if (cfg.symbols > 0) {
        const SicSimulation sim = simulate_sic(s, ch, cx, cfg.symbols, cfg.seed);
        double worst_z = 0.0;
        for (std::size_t j = 0; j < sim.sinrs.size(); ++j) {
            if (sim.std_errors[j] > 0.0) {
                worst_z = std::max(worst_z, std::abs(sim.sinrs[j] - s.sinrs[j]) / sim.std_errors[j]);
            }
        }
        r.body["simulation"] = {{"symbols", cfg.symbols},
                                {"seed", cfg.seed},
                                {"sinrs", nums(sim.sinrs)},
                                {"std_errors", nums(sim.std_errors)},
                                {"max_standard_score", num(worst_z)}};
    }
    r.body["checks"] = {{"sum_rate_error", num(std::abs(sum - mi))},
                        {"sinr_rate_error", num(prop1)},
                        {"passed", r.passed}};
    return r;
}

Report run_multicast(const RunConfig& cfg, const std::vector<ComplexMatrix>& mats) {
    require_count(mats, 2, "multicast");
    const ChannelPair pair{Channel(mats[0]), Channel(mats[1])};
    Json cov;
    std::optional<InputCovariance> cx;
    if (mats.size() > 2) {
        cx = covariance_from(cfg, mats, 2, pair.num_tx());
        cov = {{"source", "input"}};
    } else {
        const CovarianceOptimum opt = optimize_covariance(pair, cfg.power);
        cx = opt.cx;
        cov = {{"source", "optimized"},
               {"objective", num(opt.objective)},
               {"dual_gap", num(opt.dual_gap)},
               {"converged", opt.converged}};
    }
    cov["matrix"] = matrix_json(cx->c());

    const MulticastScheme s = build_multicast_scheme(pair, *cx);
    const MulticastReport rep = verify_multicast(s);
    const double i1 = mutual_information(pair.h1(), *cx);
    const double i2 = mutual_information(pair.h2(), *cx);
    double achieved = 0.0;
    for (double sinr : s.users[s.weaker].sinrs) {
        achieved += std::log2(1.0 + sinr);
    }
    const double achievability = std::abs(achieved - std::min(i1, i2));

    Report r;
    r.passed = rep.passed && achievability <= kBitsTol;
    r.body["command"] = "multicast";
    r.body["covariance"] = cov;
    r.body["mutual_information"] = nums({i1, i2});
    r.body["weaker_user"] = s.weaker + 1;
    r.body["ratio"] = nums(s.ratio.values());
    r.body["common_rates"] = nums(s.common_rates);
    r.body["total_rate"] = num(s.total_rate);
    Json streams = Json::array();
    for (const auto& st : rep.streams) {
        streams.push_back({{"rate", num(st.rate)},
                           {"sinr_stronger", num(st.sinr_stronger)},
                           {"sinr_weaker", num(st.sinr_weaker)}});
    }
    r.body["streams"] = streams;
    r.body["checks"] = {{"dominance_violation", num(rep.dominance_violation)},
                        {"equality_violation", num(rep.equality_violation)},
                        {"achievability_error", num(achievability)},
                        {"unitarity_v", num(rep.unitarity_v)},
                        {"passed", r.passed}};
    return r;
}

Json point_json(const SdrPoint& p, const char* param_name) {
    return {{param_name, num(p.param)},
            {"sdr1", num(p.sdr1)},
            {"sdr2", num(p.sdr2)},
            {"sdr1_db", num(db(p.sdr1))},
            {"sdr2_db", num(db(p.sdr2))}};
}

Json curve_json(const std::vector<SdrPoint>& pts, const char* param_name) {
    Json a = Json::array();
    for (const auto& p : pts) {
        a.push_back(point_json(p, param_name));
    }
    return a;
}

void add_rows(Report& r, const std::vector<SdrPoint>& pts, const std::string& scheme) {
    for (const auto& p : pts) {
        r.region.push_back({p.param, p.sdr1, p.sdr2, scheme});
    }
}

Report run_sdr_region(const RunConfig& cfg, const std::vector<ComplexMatrix>& mats) {
    require_count(mats, 2, "sdr-region");
    const ChannelPair pair{Channel(mats[0]), Channel(mats[1])};
    const auto family = covariance_family(pair, cfg.power, cfg.gamma_points);
    const SdrCurve bound = sdr_outer_bound(pair, family);

    std::vector<SdrPoint> hda;
    double worst_identity = 0.0;
    bool inside_bound = true;
    for (std::size_t k = 0; k < family.size(); ++k) {
        if (!hda_feasible(pair, family[k], true)) {
            continue;
        }
        const HdaScheme s = build_hda_scheme(pair, family[k]);
        SdrPoint p = s.point;
        p.param = static_cast<double>(k);
        worst_identity = std::max(worst_identity, s.identity_error);
        inside_bound = inside_bound && inside(p, {bound.points[k]}, kBitsTol);
        hda.push_back(p);
    }

    Report r;
    r.is_region = true;
    r.param_column = "covariance_id";
    r.passed = worst_identity <= kBitsTol && inside_bound;
    r.body["command"] = "sdr-region";
    r.body["power"] = num(cfg.power);
    r.body["family_size"] = family.size();
    r.body["outer_bound"] = curve_json(bound.points, "covariance_id");
    r.body["outer_bound_frontier"] = curve_json(pareto_frontier(bound.points), "covariance_id");
    r.body["hda"] = curve_json(hda, "covariance_id");
    r.body["checks"] = {{"hda_points", hda.size()},
                        {"max_identity_error_bits", num(worst_identity)},
                        {"hda_inside_bound", inside_bound},
                        {"passed", r.passed}};
    add_rows(r, bound.points, "outer_bound");
    add_rows(r, hda, "hda");
    return r;
}

Report run_fig4(const RunConfig& cfg) {
    const auto& g = cfg.gains;
    const TwoBandChannel ch(g[0], g[1], g[2], g[3], cfg.power);
    const RealVector grid = uniform_grid(cfg.gamma_points);
    const SdrCurve bound = two_band_bound(ch, grid);
    const Baselines base = baselines(ch, grid);
    const ChannelPair pair = ch.pair();

    std::vector<SdrPoint> hda;
    std::size_t infeasible = 0;
    double worst_gap = 0.0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const InputCovariance cx = ch.covariance(grid[k]);
        if (!hda_feasible(pair, cx, true)) {
            ++infeasible;
            continue;
        }
        SdrPoint p = hda_achievable_point(pair, cx);
        p.param = grid[k];
        worst_gap = std::max({worst_gap, std::abs(std::log2(p.sdr1) - std::log2(bound.points[k].sdr1)),
                              std::abs(std::log2(p.sdr2) - std::log2(bound.points[k].sdr2))});
        hda.push_back(p);
    }

    auto bound_at = [&](double gamma) -> const SdrPoint& {
        const auto k = static_cast<std::size_t>(std::lround(gamma * static_cast<double>(grid.size() - 1)));
        return bound.points[k];
    };
    double baseline_excess = 0.0;
    for (const SdrCurve* c : {&base.separation, &base.naive_hda}) {
        for (const auto& p : c->points) {
            const SdrPoint& b = bound_at(p.param);
            baseline_excess = std::max({baseline_excess, p.sdr1 / b.sdr1 - 1.0, p.sdr2 / b.sdr2 - 1.0});
        }
    }

    Report r;
    r.is_region = true;
    r.passed = worst_gap <= kBitsTol && baseline_excess <= 1e-9;
    r.body["command"] = "fig4";
    r.body["gains"] = {{"alpha1", num(g[0])}, {"beta1", num(g[1])}, {"alpha2", num(g[2])}, {"beta2", num(g[3])}};
    r.body["power"] = num(cfg.power);
    r.body["gamma_points"] = grid.size();
    r.body["antidegraded"] = two_band_antidegraded(ch);
    r.body["curves"] = {{"outer_bound", curve_json(bound.points, "gamma")},
                        {base.separation.scheme, curve_json(base.separation.points, "gamma")},
                        {base.naive_hda.scheme, curve_json(base.naive_hda.points, "gamma")},
                        {"hda", curve_json(hda, "gamma")}};
    r.body["hda_frontier"] = curve_json(pareto_frontier(hda), "gamma");
    r.body["checks"] = {{"hda_infeasible_points", infeasible},
                        {"hda_max_gap_bits", num(worst_gap)},
                        {"baseline_max_excess", num(std::max(0.0, baseline_excess))},
                        {"passed", r.passed}};
    add_rows(r, bound.points, "outer_bound");
    add_rows(r, base.separation.points, base.separation.scheme);
    add_rows(r, base.naive_hda.points, base.naive_hda.scheme);
    add_rows(r, hda, "hda");
    return r;
}

ComplexMatrix gaussian(std::mt19937_64& rng, std::size_t rows, std::size_t cols) {
    std::normal_distribution<double> n(0.0, std::sqrt(0.5));
    ComplexMatrix a(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) {
            a(i, j) = Complex(n(rng), n(rng));
        }
    }
    return a;
}

Report run_lemma1(const RunConfig& cfg, const std::vector<ComplexMatrix>& mats) {
    std::size_t trials = 0;
    std::size_t held = 0;
    std::size_t mixed_inputs = 0;
    double worst_identity = 0.0;
    auto record = [&](const Lemma1Result& res) {
        ++trials;
        held += res.holds ? 1 : 0;
        mixed_inputs += res.input_mixed ? 1 : 0;
        worst_identity = std::max(worst_identity, res.identity_error);
    };

    Report r;
    r.body["command"] = "lemma1";
    if (!mats.empty()) {
        require_count(mats, 2, "lemma1");
        const ComplexMatrix c = mats.size() > 2 ? mats[2] : InputCovariance::scaled_identity(2, cfg.power).c();
        const Lemma1Result res = lemma1_check(mats[0], mats[1], c);
        record(res);
        r.body["mode"] = "input";
        r.body["input_mixed"] = res.input_mixed;
        r.body["augmented_mixed"] = res.augmented_mixed;
        r.body["p1"] = num(res.p1);
        r.body["q1"] = num(res.q1);
    } else {
        std::mt19937_64 rng(cfg.seed);
        while (trials < cfg.trials) {
            const ComplexMatrix h1 = gaussian(rng, 2, 2);
            const ComplexMatrix h2 = gaussian(rng, 2, 2);
            if (!is_mixed(gsv(h1, h2))) {
                continue;
            }
            const ComplexMatrix w = gaussian(rng, 2, 1 + trials % 2);
            ComplexMatrix c = w * w.adjoint();
            c = Complex(0.5) * (c + c.adjoint());
            const double tr = c(0, 0).real() + c(1, 1).real();
            record(lemma1_check(h1, h2, Complex(cfg.power / tr) * c));
        }
        r.body["mode"] = "random";
        r.body["seed"] = cfg.seed;
    }
    r.passed = held == trials && worst_identity <= 1e-9;
    r.body["trials"] = trials;
    r.body["mixed_inputs"] = mixed_inputs;
    r.body["implication_holds"] = held;
    r.body["checks"] = {{"max_identity_error", num(worst_identity)}, {"passed", r.passed}};
    return r;
}

void flatten(const Json& j, const std::string& prefix, std::ostringstream& out) {
    if (j.is_object()) {
        for (const auto& [k, v] : j.items()) {
            flatten(v, prefix.empty() ? k : prefix + "." + k, out);
        }
    } else if (j.is_array()) {
        for (std::size_t i = 0; i < j.size(); ++i) {
            flatten(j[i], prefix + "." + std::to_string(i), out);
        }
    } else if (j.is_number_float()) {
        out << prefix << ',' << format12(j.get<double>()) << '\n';
    } else {
        out << prefix << ',' << j.dump() << '\n';
    }
}

std::string render(const Report& r, Format f) {
    if (f == Format::json) {
        return r.body.dump(2) + "\n";
    }
    std::ostringstream out;
    if (r.is_region) {
        out << r.param_column << ",sdr1_db,sdr2_db,scheme\n";
        for (const auto& row : r.region) {
            out << format12(row.param) << ',' << format12(db(row.sdr1)) << ',' << format12(db(row.sdr2)) << ','
                << row.scheme << '\n';
        }
    } else {
        out << "field,value\n";
        flatten(r.body, "", out);
    }
    return out.str();
}

Report dispatch(const RunConfig& cfg, const std::vector<ComplexMatrix>& mats) {
    switch (cfg.command) {
    case Command::gtd:
        return run_gtd(cfg, mats, false);
    case Command::gmd:
        return run_gtd(cfg, mats, true);
    case Command::gsv:
        return run_gsv(mats);
    case Command::joint:
        return run_joint(cfg, mats);
    case Command::multicast:
        return run_multicast(cfg, mats);
    case Command::rates:
        return run_rates(cfg, mats);
    case Command::sdr_region:
        return run_sdr_region(cfg, mats);
    case Command::fig4:
        return run_fig4(cfg);
    case Command::lemma1:
        return run_lemma1(cfg, mats);
    }
    throw ParseError("unknown command");
}

} // namespace

std::optional<Command> parse_command(std::string_view name) {
    for (const auto& c : kCommands) {
        if (c.name == name) {
            return c.command;
        }
    }
    return std::nullopt;
}

std::string_view command_name(Command c) {
    for (const auto& k : kCommands) {
        if (k.command == c) {
            return k.name;
        }
    }
    return "unknown";
}

RunResult run(const RunConfig& config) {
    RunResult res;
    try {
        if (config.gamma_points < 2) {
            throw ParseError("--gamma-points must be at least 2");
        }
        std::vector<ComplexMatrix> mats;
        if (config.input_text) {
            mats = read_matrices_from_string(*config.input_text);
        } else if (config.input_path) {
            mats = read_matrices_from_file(*config.input_path);
        }
        const Report r = dispatch(config, mats);
        res.output = render(r, config.format);
        if (!r.passed) {
            res.exit_code = kExitInvariant;
            res.diagnostic = "error: invariant check failed for '" + std::string(command_name(config.command)) + "'";
        }
    } catch (const NotMajorized& e) {
        res.exit_code = kExitInfeasible;
        res.diagnostic = "error: not majorized (violated prefix " + std::to_string(e.prefix()) + "): " + e.what();
    } catch (const NotFeasible& e) {
        res.exit_code = kExitInfeasible;
        res.diagnostic = std::string("error: ") + e.what();
    } catch (const InconsistentFactors& e) {
        res.exit_code = kExitInvariant;
        res.diagnostic = std::string("error: ") + e.what();
    } catch (const Error& e) {
        res.exit_code = kExitParse;
        res.diagnostic = std::string("error: ") + e.what();
    }
    return res;
}

} // namespace jtri::cli

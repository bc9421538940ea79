#include "ifskit/cli.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <iostream>

#include "ifskit/errors.hpp"
#include "ifskit/io.hpp"
#include "ifskit/measures.hpp"
#include "ifskit/operators.hpp"
#include "ifskit/povm.hpp"
#include "ifskit/symbolic.hpp"
#include "ifskit/transport.hpp"

namespace ifskit::cli {

namespace {

using nlohmann::json;

double require_number(const json& j, const std::string& path) {
    if (!j.is_number()) throw ConfigError("config field " + path + ": number required");
    return j.get<double>();
}

int require_int(const json& j, const std::string& path) {
    if (!j.is_number_integer()) throw ConfigError("config field " + path + ": integer required");
    return j.get<int>();
}

json defaults() {
    return json{
        {"ifs",
         {{"dimension", 1},
          {"maps", json::array({json{{"slope", 1.0 / 3.0}, {"offset", 0.0}},
                                json{{"slope", 1.0 / 3.0}, {"offset", 2.0 / 3.0}}})},
          {"bounding_box", {{"lo", json::array({0.0})}, {"hi", json::array({1.0})}}}}},
        {"depth", 6},
        {"cells", 27},
        {"tolerances",
         {{"attractor_tol", 1e-8}, {"fixpoint_tol", 1e-9}, {"merge_radius", 0.0}}},
        {"dictionary", {{"size", 33}, {"seed", 1234}}},
        {"limits", {{"max_iter", 300}}},
        {"povm", {{"family", "auto"}}},
    };
}

void merge_defaults(json& target, const json& def) {
    for (auto it = def.begin(); it != def.end(); ++it) {
        if (!target.contains(it.key()))
            target[it.key()] = it.value();
        else if (it.value().is_object() && target[it.key()].is_object())
            merge_defaults(target[it.key()], it.value());
    }
}

}  // namespace

json canonicalize_config(const json& raw) {
    if (!raw.is_object()) throw ConfigError("config root: object required");
    json cfg = raw;
    merge_defaults(cfg, defaults());

    const int dim = require_int(cfg["ifs"]["dimension"], "ifs.dimension");
    if (dim != 1 && dim != 2) throw ConfigError("config field ifs.dimension: must be 1 or 2");
    if (!cfg["ifs"]["maps"].is_array() || cfg["ifs"]["maps"].size() < 2)
        throw ConfigError("config field ifs.maps: need at least two maps");
    for (std::size_t i = 0; i < cfg["ifs"]["maps"].size(); ++i) {
        const std::string path = "ifs.maps[" + std::to_string(i) + "]";
        const json& m = cfg["ifs"]["maps"][i];
        if (dim == 1) {
            const double slope = require_number(m.value("slope", json()), path + ".slope");
            require_number(m.value("offset", json()), path + ".offset");
            if (!(std::abs(slope) < 1.0) || slope == 0.0)
                throw ConfigError("config field " + path + ".slope: need 0 < |slope| < 1");
        } else {
            if (!m.contains("linear") || !m["linear"].is_array() || m["linear"].size() != 2)
                throw ConfigError("config field " + path + ".linear: 2x2 matrix required");
            if (!m.contains("offset") || !m["offset"].is_array() || m["offset"].size() != 2)
                throw ConfigError("config field " + path + ".offset: 2-vector required");
        }
    }
    const int depth = require_int(cfg["depth"], "depth");
    if (depth < 1 || depth > 12) throw ConfigError("config field depth: need 1 <= depth <= 12");
    const int cells = require_int(cfg["cells"], "cells");
    if (cells < 1) throw ConfigError("config field cells: must be positive");
    for (const char* key : {"attractor_tol", "fixpoint_tol"}) {
        const double v = require_number(cfg["tolerances"][key], std::string("tolerances.") + key);
        if (!(v > 0.0))
            throw ConfigError(std::string("config field tolerances.") + key + ": must be > 0");
    }
    if (require_number(cfg["tolerances"]["merge_radius"], "tolerances.merge_radius") < 0.0)
        throw ConfigError("config field tolerances.merge_radius: must be >= 0");
    if (require_int(cfg["dictionary"]["size"], "dictionary.size") < cells)
        cfg["dictionary"]["size"] = cells;  // dictionary must cover the partition
    if (require_int(cfg["limits"]["max_iter"], "limits.max_iter") < 1)
        throw ConfigError("config field limits.max_iter: must be >= 1");
    const std::string family = cfg["povm"]["family"].get<std::string>();
    if (family != "auto" && family != "direct" && family != "symbolic")
        throw ConfigError("config field povm.family: auto | direct | symbolic");
    return cfg;
}

std::string config_hash(const json& canonical) {
    const std::string dump = canonical.dump();
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : dump) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

IFSystem ifs_from_config(const json& cfg) {
    const int dim = cfg["ifs"]["dimension"].get<int>();
    std::vector<AffineContraction> maps;
    for (const auto& m : cfg["ifs"]["maps"]) {
        if (dim == 1) {
            maps.emplace_back(m["slope"].get<double>(), m["offset"].get<double>());
        } else {
            std::array<std::array<double, 2>, 2> lin{};
            for (int r = 0; r < 2; ++r)
                for (int c = 0; c < 2; ++c) lin[r][c] = m["linear"][r][c].get<double>();
            maps.emplace_back(lin, std::array<double, 2>{m["offset"][0].get<double>(),
                                                         m["offset"][1].get<double>()});
        }
    }
    if (cfg["ifs"].contains("bounding_box")) {
        const auto& bb = cfg["ifs"]["bounding_box"];
        BoundingBox box;
        box.dim = dim;
        for (int d = 0; d < dim; ++d) {
            box.lo[static_cast<std::size_t>(d)] = bb["lo"][d].get<double>();
            box.hi[static_cast<std::size_t>(d)] = bb["hi"][d].get<double>();
        }
        return IFSystem(std::move(maps), box);
    }
    return IFSystem(std::move(maps));
}

namespace {

struct CheckList {
    json checks = json::array();
    bool all_passed = true;

    void add(const std::string& name, bool pass, const json& detail = json()) {
        json c{{"name", name}, {"pass", pass}};
        if (!detail.is_null()) c["detail"] = detail;
        checks.push_back(std::move(c));
        all_passed = all_passed && pass;
    }
};

/// Pairwise interior overlap of the 1-D map images of the bounding interval.
bool images_overlap_1d(const IFSystem& ifs) {
    const double lo = ifs.bounding_box().lo[0], hi = ifs.bounding_box().hi[0];
    std::vector<std::pair<double, double>> spans;
    for (std::size_t i = 0; i < ifs.size(); ++i) {
        const double a = ifs.map(i).apply(Point::line(lo)).x();
        const double b = ifs.map(i).apply(Point::line(hi)).x();
        spans.emplace_back(std::min(a, b), std::max(a, b));
    }
    const double tol = 1e-12 * std::max(1.0, hi - lo);
    for (std::size_t i = 0; i < spans.size(); ++i)
        for (std::size_t j = i + 1; j < spans.size(); ++j)
            if (std::min(spans[i].second, spans[j].second) -
                    std::max(spans[i].first, spans[j].first) >
                tol)
                return true;
    return false;
}

FMode resolve_family(const json& cfg, const IFSystem& ifs) {
    const std::string family = cfg["povm"]["family"].get<std::string>();
    if (family == "direct") return FMode::direct;
    if (family == "symbolic") return FMode::symbolic;
    // auto: the direct family is exact for non-overlapping images; under
    // overlap only the symbolic family keeps sum S_i S_i^* = id.
    return images_overlap_1d(ifs) ? FMode::symbolic : FMode::direct;
}

void require_1d(const IFSystem& ifs, const std::string& command) {
    if (ifs.dimension() != 1)
        throw ConfigError("config field ifs.dimension: " + command + " supports 1-D only");
}

json run_attractor(const json& cfg, const std::string& out_dir, CheckList& checks) {
    const IFSystem ifs = ifs_from_config(cfg);
    const double tol = cfg["tolerances"]["attractor_tol"].get<double>();
    const auto result = attractor(ifs, tol, cfg["limits"]["max_iter"].get<int>(),
                                  cfg["tolerances"]["merge_radius"].get<double>());
    write_file(out_dir + "/attractor_points.csv", cloud_to_csv(result.cloud));

    json metrics;
    metrics["iterations"] = result.iterations;
    metrics["points"] = result.cloud.size();
    metrics["final_gap"] = result.gaps.back();
    metrics["gaps"] = result.gaps;
    checks.add("final_gap_below_tol", result.gaps.back() <= tol, result.gaps.back());
    bool decay = true;
    for (std::size_t m = 0; m + 1 < result.gaps.size(); ++m)
        decay = decay && result.gaps[m + 1] <=
                             ifs.ratio() * result.gaps[m] +
                                 2.0 * cfg["tolerances"]["merge_radius"].get<double>() + 1e-12;
    checks.add("gap_geometric_decay", decay);
    return metrics;
}

json run_measure(const json& cfg, const std::string& out_dir, CheckList& checks) {
    const IFSystem ifs = ifs_from_config(cfg);
    const auto mu = hutchinson_measure(ifs, cfg["depth"].get<int>(),
                                       cfg["tolerances"]["merge_radius"].get<double>());
    write_file(out_dir + "/measure.csv", measure_to_csv(mu));
    json metrics;
    metrics["atoms"] = mu.size();
    metrics["depth"] = cfg["depth"].get<int>();
    const double mass = mu.total_mass();
    metrics["total_mass"] = mass;
    checks.add("mass_sums_to_one", std::abs(mass - 1.0) <= 1e-12, mass);
    return metrics;
}

json run_dist(const RunOptions& options, const std::string& out_dir, CheckList& checks) {
    if (options.mu_path.empty() || options.nu_path.empty())
        throw ConfigError("dist: --mu and --nu measure files required");
    const auto mu = measure_from_csv(read_file(options.mu_path));
    const auto nu = measure_from_csv(read_file(options.nu_path));

    const auto h = kantorovich_h_full(mu, nu);
    const auto mh = modified_kantorovich_full(mu, nu);

    json result;
    result["metric"] = "H";
    result["value"] = h.value;
    result["iterations"] = h.iterations;
    result["dual_feasible"] = h.dual_feasible;
    result["mh_value"] = mh.value;
    result["mh_dual_feasible"] = mh.dual_feasible;
    checks.add("h_dual_feasible", h.dual_feasible);
    checks.add("mh_dominated", mh.value <= std::min(2.0, h.value) + 1e-12, mh.value);
    if (mu.dimension() == 1 && nu.dimension() == 1) {
        const double oracle = kantorovich_h_cdf_oracle(mu, nu);
        result["cdf_oracle"] = oracle;
        checks.add("h_matches_cdf_oracle", std::abs(h.value - oracle) <= 1e-9,
                   std::abs(h.value - oracle));
    }
    write_file(out_dir + "/dist.json", result.dump(2) + "\n");
    return result;
}

json run_cuntz_check(const json& cfg, const std::string& out_dir, CheckList& checks) {
    const IFSystem ifs = ifs_from_config(cfg);
    require_1d(ifs, "cuntz-check");
    const int depth = cfg["depth"].get<int>();
    const ShiftSpaceModel model(static_cast<int>(ifs.size()), depth);

    json metrics;
    const CuntzFamily t_family = build_t_family(model);
    const auto t_report = cuntz_relation_report(t_family, model);
    metrics["t_identity_defect"] = t_report.identity_sum_defect;
    metrics["t_relation2_subspace_defect"] = t_report.relation2_subspace_defect;
    checks.add("t_relation1_exact", t_report.identity_sum_defect <= 1e-12);
    checks.add("t_relation2_subspace_exact", t_report.relation2_subspace_defect <= 1e-12);

    const auto mu = hutchinson_measure(ifs, depth,
                                       cfg["tolerances"]["merge_radius"].get<double>());
    const auto direct = build_f_family(ifs, mu, FMode::direct);
    const auto symbolic = build_f_family(ifs, mu, FMode::symbolic);
    const auto direct_report = cuntz_relation_report(direct.s_family, model);
    const auto symbolic_report = cuntz_relation_report(symbolic.s_family, model);
    metrics["s_direct_identity_defect"] = direct_report.identity_sum_defect;
    metrics["s_direct_relation2_subspace_defect"] = direct_report.relation2_subspace_defect;
    metrics["s_symbolic_identity_defect"] = symbolic_report.identity_sum_defect;

    const MatrixOperator witness =
        compose(adjoint(direct.s_family.s(0)), direct.s_family.s(1));
    metrics["overlap_witness_s0s1"] = operator_norm(witness);

    checks.add("s_symbolic_relation1", symbolic_report.identity_sum_defect <= 1e-10);
    const bool overlap = images_overlap_1d(ifs);
    metrics["images_overlap"] = overlap;
    if (!overlap) {
        checks.add("s_direct_relation1", direct_report.identity_sum_defect <= 1e-10);
        checks.add("s_direct_relation2_subspace",
                   direct_report.relation2_subspace_defect <= 1e-10);
    }
    write_file(out_dir + "/cuntz.json", metrics.dump(2) + "\n");
    return metrics;
}

json run_povm_fixpoint(const json& cfg, const std::string& out_dir, CheckList& checks,
                       std::uint64_t seed) {
    const IFSystem ifs = ifs_from_config(cfg);
    require_1d(ifs, "povm-fixpoint");
    const int depth = cfg["depth"].get<int>();
    const auto mu = hutchinson_measure(ifs, depth,
                                       cfg["tolerances"]["merge_radius"].get<double>());
    const auto family = build_f_family(ifs, mu, resolve_family(cfg, ifs)).s_family;
    const auto partition = CellPartition::uniform(ifs.bounding_box().lo[0],
                                                  ifs.bounding_box().hi[0],
                                                  cfg["cells"].get<int>());
    const auto dict =
        lip_dictionary_generate(partition, cfg["dictionary"]["size"].get<int>(), seed);
    const double tol = cfg["tolerances"]["fixpoint_tol"].get<double>();
    const auto result = povm_fixpoint(ifs, family, mu, partition, dict, tol,
                                      cfg["limits"]["max_iter"].get<int>());

    write_file(out_dir + "/povm_table.json", povm_to_json(result.table) + "\n");
    write_file(out_dir + "/convergence.csv", fixpoint_history_to_csv(result.history));

    const auto diag = povm_diagnostics(result.table);
    json metrics;
    metrics["iterations"] = result.iterations;
    metrics["fitted_ratio"] = result.fitted_ratio;
    metrics["final_residual_lower"] = result.history.back().res_lower;
    metrics["min_eigenvalue"] = diag.min_eigenvalue;
    metrics["sum_identity_defect"] = diag.sum_identity_defect;
    metrics["max_idempotency_defect"] = diag.max_idempotency_defect;
    checks.add("residual_below_tol", result.history.back().res_lower <= tol);
    checks.add("psd_floor", diag.min_eigenvalue >= -1e-10, diag.min_eigenvalue);
    checks.add("sums_to_identity", diag.sum_identity_defect <= 1e-10,
               diag.sum_identity_defect);
    return metrics;
}

json run_dilation_check(const json& cfg, const std::string& out_dir, CheckList& checks,
                        std::uint64_t seed) {
    const IFSystem ifs = ifs_from_config(cfg);
    require_1d(ifs, "dilation-check");
    const int depth = cfg["depth"].get<int>();
    const ShiftSpaceModel model(static_cast<int>(ifs.size()), depth);
    const auto mu = hutchinson_measure(ifs, depth,
                                       cfg["tolerances"]["merge_radius"].get<double>());
    const auto family = build_f_family(ifs, mu, resolve_family(cfg, ifs)).s_family;
    const auto partition = CellPartition::uniform(ifs.bounding_box().lo[0],
                                                  ifs.bounding_box().hi[0],
                                                  cfg["cells"].get<int>());
    const auto dict =
        lip_dictionary_generate(partition, cfg["dictionary"]["size"].get<int>(), seed);
    const double tol = cfg["tolerances"]["fixpoint_tol"].get<double>();
    const auto fixed = povm_fixpoint(ifs, family, mu, partition, dict, tol,
                                     cfg["limits"]["max_iter"].get<int>());

    const auto v = coding_isometry(ifs, model, mu,
                                   cfg["tolerances"]["merge_radius"].get<double>());
    const auto report = dilation_check(ifs, model, fixed.table, v);
    const double isometry_defect =
        operator_norm(operator_difference(compose(adjoint(v), v),
                                          identity_operator(v.domain)));

    json metrics;
    metrics["max_defect"] = report.max_defect;
    metrics["constant"] = report.constant;
    metrics["defects"] = report.defects;
    metrics["slacks"] = report.slacks;
    metrics["ambiguous_counts"] = report.ambiguous_counts;
    metrics["isometry_defect"] = isometry_defect;
    write_file(out_dir + "/dilation.json", metrics.dump(2) + "\n");

    const double budget = std::pow(ifs.ratio(), depth) + 2.0 * tol;  // C_cap = 1
    checks.add("v_isometry", isometry_defect <= 1e-12, isometry_defect);
    checks.add("dilation_defect_within_budget", report.max_defect <= budget,
               report.max_defect);
    return metrics;
}

json run_completion_demo(const RunOptions& options, const std::string& out_dir,
                         CheckList& checks) {
    const std::string which = options.which.empty() ? "kravchenko" : options.which;
    json metrics;
    metrics["which"] = which;
    if (which == "kravchenko") {
        std::string csv = "n,h_distance,expected,abs_error\n";
        double worst = 0.0;
        for (int n = 1; n <= 12; ++n) {
            std::vector<double> pos_n(static_cast<std::size_t>(n) + 1);
            std::vector<double> pos_n1(static_cast<std::size_t>(n) + 2);
            for (int k = 0; k <= n; ++k) pos_n[static_cast<std::size_t>(k)] = k;
            for (int k = 0; k <= n + 1; ++k) pos_n1[static_cast<std::size_t>(k)] = k;
            const auto nu_n = kravchenko_sequence(n, pos_n);
            const auto nu_n1 = kravchenko_sequence(n + 1, pos_n1);
            const double h = kantorovich_h(nu_n, nu_n1);
            const double expected = (n + 1) * std::ldexp(1.0, -(n + 1));
            worst = std::max(worst, std::abs(h - expected));
            csv += std::to_string(n) + "," + format_double(h) + "," + format_double(expected) +
                   "," + format_double(std::abs(h - expected)) + "\n";
        }
        write_file(out_dir + "/kravchenko.csv", csv);
        metrics["max_abs_error"] = worst;
        checks.add("kravchenko_table_exact", worst <= 1e-12, worst);
    } else if (which == "truncation") {
        // Geometric-tail fixture spread over [0, 12]; K_n = [0, n + 1/2].
        std::vector<Point> atoms;
        std::vector<double> weights;
        for (int k = 0; k <= 12; ++k) {
            atoms.push_back(Point::line(double(k)));
            weights.push_back(std::ldexp(1.0, -(k + 1)));
        }
        weights.back() = std::ldexp(1.0, -12);  // close the geometric tail
        const DiscreteMeasure mu(std::move(atoms), std::move(weights));
        std::string csv = "n,mh_distance,bound,satisfied\n";
        bool all_ok = true;
        for (int n = 1; n <= 10; ++n) {
            const IntervalUnion k_n{{0.0, double(n) + 0.5}};
            const auto mu_n = truncate_measure(mu, k_n);
            const double mh = modified_kantorovich(mu_n, mu);
            const double bound = 2.0 * (1.0 - mu.mass_on(k_n));
            const bool ok = mh <= bound + 1e-12;
            all_ok = all_ok && ok;
            csv += std::to_string(n) + "," + format_double(mh) + "," + format_double(bound) +
                   "," + (ok ? "1" : "0") + "\n";
        }
        write_file(out_dir + "/truncation.csv", csv);
        checks.add("mh_truncation_bound", all_ok);
    } else {
        throw ConfigError("completion-demo: --which must be kravchenko or truncation");
    }
    return metrics;
}

}  // namespace

RunReport run(const RunOptions& options) {
    json raw = json::object();
    if (!options.config_path.empty()) raw = json::parse(read_file(options.config_path));
    const json cfg = canonicalize_config(raw);
    std::filesystem::create_directories(options.out_dir);

    const auto t0 = std::chrono::steady_clock::now();
    CheckList checks;
    json metrics;
    const std::uint64_t seed =
        options.seed.value_or(cfg["dictionary"]["seed"].get<std::uint64_t>());

    if (options.command == "attractor")
        metrics = run_attractor(cfg, options.out_dir, checks);
    else if (options.command == "measure")
        metrics = run_measure(cfg, options.out_dir, checks);
    else if (options.command == "dist")
        metrics = run_dist(options, options.out_dir, checks);
    else if (options.command == "cuntz-check")
        metrics = run_cuntz_check(cfg, options.out_dir, checks);
    else if (options.command == "povm-fixpoint")
        metrics = run_povm_fixpoint(cfg, options.out_dir, checks, seed);
    else if (options.command == "dilation-check")
        metrics = run_dilation_check(cfg, options.out_dir, checks, seed);
    else if (options.command == "completion-demo")
        metrics = run_completion_demo(options, options.out_dir, checks);
    else
        throw ConfigError("unknown command '" + options.command + "'");

    const auto t1 = std::chrono::steady_clock::now();

    RunReport report;
    report.json["schema_version"] = 1;
    report.json["command"] = options.command;
    report.json["config"] = cfg;
    report.json["config_hash"] = config_hash(cfg);
    report.json["seed"] = seed;
    report.json["metrics"] = metrics;
    report.json["checks"] = checks.checks;
    report.json["timings"] = {
        {"wall_ms", std::chrono::duration<double, std::milli>(t1 - t0).count()}};
    report.all_passed = checks.all_passed;

    write_file(options.out_dir + "/report.json", report.json.dump(2) + "\n");
    if (!options.quiet) {
        for (const auto& c : report.json["checks"])
            std::cout << (c["pass"].get<bool>() ? "[PASS] " : "[FAIL] ")
                      << c["name"].get<std::string>() << "\n";
    }
    return report;
}

}  // namespace ifskit::cli

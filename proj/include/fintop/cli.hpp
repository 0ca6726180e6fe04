#pragma once

#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fintop/catalog.hpp"
#include "fintop/group_quotient.hpp"
#include "fintop/io.hpp"
#include "fintop/lambda.hpp"
#include "fintop/morphism_equality.hpp"
#include "fintop/schwarz.hpp"

namespace fintop::cli {

struct CliResult {
    int exit_code = 0;
    std::string output;
};

// exit codes: 0 holds / built, 1 refuted (witness in report), 2 usage or
// parse error, 3 budget exceeded
constexpr int kOk = 0, kRefuted = 1, kUsage = 2, kBudget = 3;

namespace detail {

struct Inputs {
    std::map<std::string, FinSpace> spaces;
    std::vector<io::RawMap> maps;
    std::vector<io::RawAction> actions;
    std::vector<io::RawCanopy> canopies;
};

inline Inputs load_inputs(const std::vector<std::string>& files) {
    Inputs in;
    for (const auto& path : files) {
        std::string text = io::read_file(path);
        auto dot = path.rfind('.');
        std::string ext = dot == std::string::npos ? "" : path.substr(dot);
        if (ext == ".topo") {
            auto ns = io::parse_topo_text(text, path);
            in.spaces[ns.name] = ns.space;
        } else if (ext == ".map") {
            in.maps.push_back(io::parse_map_text(text, path));
        } else if (ext == ".act") {
            in.actions.push_back(io::parse_act_text(text, path));
        } else if (ext == ".canopy") {
            in.canopies.push_back(io::parse_canopy_text(text, path));
        } else {
            fail(ErrorKind::ParseError, "unrecognized input file '" + path + "'");
        }
    }
    return in;
}

inline const FinSpace& pick_space(const Inputs& in, const std::string& name) {
    if (!name.empty()) {
        auto it = in.spaces.find(name);
        if (it == in.spaces.end()) fail(ErrorKind::ParseError, "unknown space '" + name + "'");
        return it->second;
    }
    if (in.spaces.size() != 1)
        fail(ErrorKind::ParseError, "specify --space when several spaces are loaded");
    return in.spaces.begin()->second;
}

inline const io::RawMap& pick_map(const Inputs& in, const std::string& name) {
    if (!name.empty()) {
        for (const auto& m : in.maps)
            if (m.name == name) return m;
        fail(ErrorKind::ParseError, "unknown map '" + name + "'");
    }
    if (in.maps.size() != 1) fail(ErrorKind::ParseError, "specify --map when several maps are loaded");
    return in.maps.front();
}

inline const io::RawAction& pick_action(const Inputs& in, const std::string& name) {
    if (!name.empty()) {
        for (const auto& a : in.actions)
            if (a.name == name) return a;
        fail(ErrorKind::ParseError, "unknown action '" + name + "'");
    }
    if (in.actions.size() != 1)
        fail(ErrorKind::ParseError, "specify --action when several actions are loaded");
    return in.actions.front();
}

struct ResolvedMap {
    std::string name;
    const FinSpace* dom;
    const FinSpace* cod;
    std::vector<std::size_t> values;
};

inline ResolvedMap resolve_raw_map(const Inputs& in, const io::RawMap& raw) {
    auto di = in.spaces.find(raw.dom);
    auto ci = in.spaces.find(raw.cod);
    if (di == in.spaces.end()) fail(ErrorKind::ParseError, "map references unknown space '" + raw.dom + "'");
    if (ci == in.spaces.end()) fail(ErrorKind::ParseError, "map references unknown space '" + raw.cod + "'");
    const FinSpace& dom = di->second;
    const FinSpace& cod = ci->second;
    std::vector<std::size_t> values(dom.size());
    std::vector<bool> seen(dom.size(), false);
    for (const auto& [p, q] : raw.assignment) {
        auto i = dom.index_of(p);
        values[i] = cod.index_of(q);
        seen[i] = true;
    }
    for (std::size_t i = 0; i < dom.size(); ++i)
        if (!seen[i]) fail(ErrorKind::ParseError, "map '" + raw.name + "' missing '" + dom.name(i) + "'");
    return ResolvedMap{raw.name, &dom, &cod, std::move(values)};
}

inline std::string space_block(const std::string& name, const FinSpace& s) {
    return io::emit_topo(io::NamedSpace{name, s});
}

}  // namespace detail

/// Executes one command line (without the program name); all output is
/// returned as a deterministic string, never printed directly.
inline CliResult run(const std::vector<std::string>& args) {
    using namespace detail;
    std::ostringstream out;

    CLI::App app{"finite-topology computations"};
    app.require_subcommand(1);

    std::vector<std::string> files;
    std::string opt_space, opt_map, opt_map2, opt_action, opt_target, opt_canopy;
    std::string opt_set, opt_open, opt_mode = "open", opt_csv, opt_excluded;
    std::vector<std::string> opt_elements;
    std::size_t opt_probes = 3, opt_size = 2, opt_cap = kDefaultCatalogCap;
    int opt_nmax = 5;
    double opt_grid = 0.01;

    auto add_files = [&](CLI::App* cmd) {
        cmd->add_option("files", files, "input files (.topo/.map/.act/.canopy)");
    };

    auto* check = app.add_subcommand("check", "decide a predicate");
    auto* chk_zdense = check->add_subcommand("zdense", "Z-density of an open set");
    add_files(chk_zdense);
    chk_zdense->add_option("--set", opt_set, "comma-separated point list")->required();
    chk_zdense->add_option("--space", opt_space, "space name");
    auto* chk_neg = check->add_subcommand("negligible", "negligibility of a subset");
    add_files(chk_neg);
    chk_neg->add_option("--set", opt_set, "comma-separated point list")->required();
    chk_neg->add_option("--open", opt_open, "carrier open set (default: whole space)");
    chk_neg->add_option("--space", opt_space, "space name");
    auto* chk_diff = check->add_subcommand("diffuse", "diffuseness of a map");
    add_files(chk_diff);
    chk_diff->add_option("--map", opt_map, "map name");
    auto* chk_emb = check->add_subcommand("embedding", "open-embedding test");
    add_files(chk_emb);
    chk_emb->add_option("--map", opt_map, "map name");
    auto* chk_cover = check->add_subcommand("cover", "cover test");
    add_files(chk_cover);
    chk_cover->add_option("--target", opt_target, "target space name")->required();
    chk_cover->add_option("--mode", opt_mode, "open|local (default open)");

    auto* pull = app.add_subcommand("pullback", "pullback constructions");
    auto* pull_emb = pull->add_subcommand("embedding", "pullback along an open embedding");
    add_files(pull_emb);
    pull_emb->add_option("--map", opt_map, "the map to pull back along")->required();
    pull_emb->add_option("--along", opt_map2, "the open embedding")->required();
    auto* pull_gen = pull->add_subcommand("general", "pullback repaired off a negligible set");
    add_files(pull_gen);
    pull_gen->add_option("--map-c", opt_map, "first leg")->required();
    pull_gen->add_option("--map-b", opt_map2, "pullback base")->required();
    pull_gen->add_option("--excluded", opt_excluded, "negligible subset of the base domain");

    auto* can = app.add_subcommand("canopy", "gluing data operations");
    auto* can_val = can->add_subcommand("validate", "equivalence-law validation");
    add_files(can_val);
    can_val->add_option("--canopy", opt_canopy, "canopy name");
    auto* can_aff = can->add_subcommand("affinize", "build the glued quotient");
    add_files(can_aff);
    can_aff->add_option("--canopy", opt_canopy, "canopy name");
    auto* can_ver = can->add_subcommand("verify", "verify the affinization conditions");
    add_files(can_ver);
    can_ver->add_option("--canopy", opt_canopy, "canopy name");
    can_ver->add_option("--probes", opt_probes, "probe size bound");

    auto* quot = app.add_subcommand("quotient", "group-quotient operations");
    auto* quot_cert = quot->add_subcommand("certify", "covering-behavior certificate");
    add_files(quot_cert);
    quot_cert->add_option("--action", opt_action, "action name");
    auto* quot_build = quot->add_subcommand("build", "orbit space and projection");
    add_files(quot_build);
    quot_build->add_option("--action", opt_action, "action name");
    auto* quot_ver = quot->add_subcommand("verify", "quotient property scan");
    add_files(quot_ver);
    quot_ver->add_option("--action", opt_action, "action name");
    quot_ver->add_option("--probes", opt_probes, "probe size bound");

    auto* mor = app.add_subcommand("morphism", "morphism comparisons");
    auto* mor_eq = mor->add_subcommand("equal", "equality through a group quotient");
    add_files(mor_eq);
    mor_eq->add_option("--f", opt_map, "first map name")->required();
    mor_eq->add_option("--g", opt_map2, "second map name")->required();
    mor_eq->add_option("--action", opt_action, "action name");

    auto* lam = app.add_subcommand("lambda", "representing-object operations");
    auto* lam_build = lam->add_subcommand("build", "construct the representing space");
    add_files(lam_build);
    lam_build->add_option("--space", opt_space, "space name");
    lam_build->add_option("--element", opt_elements,
                          "base element 'a,b,c:m,n' as carrier:inner (repeatable)");
    auto* lam_ver = lam->add_subcommand("verify", "representability by probes");
    add_files(lam_ver);
    lam_ver->add_option("--space", opt_space, "space name");
    lam_ver->add_option("--element", opt_elements, "base element carrier:inner (repeatable)");
    lam_ver->add_option("--probes", opt_probes, "probe size bound");

    auto* sch = app.add_subcommand("schwarz", "numerical counterexample");
    auto* sch_rep = sch->add_subcommand("report", "sampled diffuseness and pathology report");
    sch_rep->add_option("--nmax", opt_nmax, "highest cylinder index");
    sch_rep->add_option("--grid", opt_grid, "grid step");
    sch_rep->add_option("--csv", opt_csv, "write the witness CSV here");

    auto* probe = app.add_subcommand("probe", "probe-space catalogs");
    auto* probe_cat = probe->add_subcommand("catalog", "all spaces of a given size up to homeomorphism");
    probe_cat->add_option("--size", opt_size, "point count");
    probe_cat->add_option("--cap", opt_cap, "catalog cap");

    std::vector<const char*> argv;
    argv.push_back("fintop");
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        std::ostringstream os;
        os << "usage error: " << e.what() << "\n";
        return {kUsage, os.str()};
    }

    try {
        Inputs in = load_inputs(files);

        if (chk_zdense->parsed()) {
            const FinSpace& s = pick_space(in, opt_space);
            PointSet u = s.set_of(io::split_commas(opt_set));
            auto r = is_zdense(s, u);
            out << "zdense " << s.describe(u) << ": " << (r.holds ? "yes" : "no") << "\n";
            if (!r.holds) out << "witness connected open: " << s.describe(*r.counterexample) << "\n";
            return {r.holds ? kOk : kRefuted, out.str()};
        }
        if (chk_neg->parsed()) {
            const FinSpace& s = pick_space(in, opt_space);
            PointSet i = s.set_of(io::split_commas(opt_set));
            PointSet u = opt_open.empty() ? s.full_set() : s.set_of(io::split_commas(opt_open));
            bool r = is_negligible_element(s, make_element(s, u, i));
            out << "negligible " << s.describe(i) << " in " << s.describe(u) << ": "
                << (r ? "yes" : "no") << "\n";
            return {r ? kOk : kRefuted, out.str()};
        }
        if (chk_diff->parsed()) {
            auto rm = resolve_raw_map(in, pick_map(in, opt_map));
            if (auto w = ContinuousMap::continuity_witness(*rm.dom, *rm.cod, rm.values)) {
                out << "diffuse " << rm.name << ": no (not continuous)\n";
                out << "continuity witness: " << rm.dom->name(*w) << "\n";
                return {kRefuted, out.str()};
            }
            auto f = ContinuousMap::make(*rm.dom, *rm.cod, rm.values);
            auto r = is_diffuse(f);
            out << "diffuse " << rm.name << ": " << (r.holds ? "yes" : "no") << "\n";
            if (!r.holds)
                out << "witness element: (" << rm.cod->describe(r.witness->open_set) << ", "
                    << rm.cod->describe(r.witness->inner) << ")\n";
            return {r.holds ? kOk : kRefuted, out.str()};
        }
        if (chk_emb->parsed()) {
            auto rm = resolve_raw_map(in, pick_map(in, opt_map));
            if (auto w = ContinuousMap::continuity_witness(*rm.dom, *rm.cod, rm.values)) {
                out << "embedding " << rm.name << ": no (not continuous at " << rm.dom->name(*w)
                    << ")\n";
                return {kRefuted, out.str()};
            }
            auto f = ContinuousMap::make(*rm.dom, *rm.cod, rm.values);
            bool r = is_open_embedding(f);
            out << "embedding " << rm.name << ": " << (r ? "yes" : "no") << "\n";
            return {r ? kOk : kRefuted, out.str()};
        }
        if (chk_cover->parsed()) {
            auto ti = in.spaces.find(opt_target);
            if (ti == in.spaces.end()) fail(ErrorKind::ParseError, "unknown space '" + opt_target + "'");
            std::vector<ContinuousMap> legs;
            for (const auto& raw : in.maps) {
                auto rm = resolve_raw_map(in, raw);
                legs.push_back(ContinuousMap::make(*rm.dom, *rm.cod, rm.values));
            }
            CoverMode mode = (opt_mode == "local") ? CoverMode::Pseudoetale : CoverMode::Pseudogeometric;
            auto r = is_cover(legs, ti->second, mode);
            out << "cover of " << opt_target << " (" << legs.size() << " legs, mode " << opt_mode
                << "): " << (r.holds ? "yes" : "no") << "\n";
            if (!r.holds) {
                out << "reason: " << r.reason << "\n";
                if (r.uncovered_point)
                    out << "uncovered point: " << ti->second.name(*r.uncovered_point) << "\n";
            }
            return {r.holds ? kOk : kRefuted, out.str()};
        }
        if (pull_emb->parsed()) {
            auto rf = resolve_raw_map(in, pick_map(in, opt_map));
            auto ru = resolve_raw_map(in, pick_map(in, opt_map2));
            auto f = ContinuousMap::make(*rf.dom, *rf.cod, rf.values);
            auto u = ContinuousMap::make(*ru.dom, *ru.cod, ru.values);
            auto pb = pullback_embedding(f, u);
            out << space_block("pullback", pb.total);
            out << io::emit_map("into_domain", "pullback", rf.name + ".dom", pb.into_dom);
            out << io::emit_map("into_subset", "pullback", ru.name + ".dom", pb.into_sub);
            return {kOk, out.str()};
        }
        if (pull_gen->parsed()) {
            auto rc = resolve_raw_map(in, pick_map(in, opt_map));
            auto rb = resolve_raw_map(in, pick_map(in, opt_map2));
            auto c = ContinuousMap::make(*rc.dom, *rc.cod, rc.values);
            auto b = ContinuousMap::make(*rb.dom, *rb.cod, rb.values);
            PointSet excluded = rb.dom->set_of(io::split_commas(opt_excluded));
            auto gp = pullback_via_lambda(c, b, excluded);
            out << space_block("pullback", gp.repaired.total);
            out << io::emit_map("leg_c", "pullback", rc.name + ".dom", gp.leg_c);
            out << io::emit_map("leg_b", "pullback", rb.name + ".dom", gp.leg_b);
            return {kOk, out.str()};
        }
        if (can_val->parsed() || can_aff->parsed() || can_ver->parsed()) {
            const io::RawCanopy* rc = nullptr;
            for (const auto& raw : in.canopies)
                if (opt_canopy.empty() || raw.name == opt_canopy) rc = &raw;
            if (!rc) fail(ErrorKind::ParseError, "no canopy loaded");
            Canopy canopy = io::resolve_canopy(*rc, in.spaces);
            auto check_result = validate_canopy(canopy);
            if (can_val->parsed()) {
                out << "canopy " << rc->name << ": " << (check_result.ok ? "valid" : "invalid")
                    << "\n";
                if (check_result.failure)
                    out << "failed law: " << to_string(check_result.failure->law) << " ("
                        << check_result.failure->witness << ")\n";
                else if (!check_result.ok)
                    out << "reason: " << check_result.detail << "\n";
                return {check_result.ok ? kOk : kRefuted, out.str()};
            }
            if (!check_result.ok) {
                out << "canopy " << rc->name << " invalid\n";
                return {kRefuted, out.str()};
            }
            Affinization aff = affinize(canopy);
            if (can_aff->parsed()) {
                out << space_block(rc->name + ".glued", aff.total);
                return {kOk, out.str()};
            }
            auto rep = verify_affinization(aff, opt_probes);
            out << "cover: " << (rep.cover_ok ? "ok" : "fail") << "\n";
            out << "identification witnesses: " << (rep.witness_ok ? "ok" : "fail") << "\n";
            out << "fibered products: " << (rep.product_ok ? "ok" : "fail") << "\n";
            out << "colimit (probes<=" << opt_probes << "): " << (rep.colimit_ok ? "ok" : "fail")
                << "\n";
            if (!rep.all_ok()) out << "detail: " << rep.detail << "\n";
            return {rep.all_ok() ? kOk : kRefuted, out.str()};
        }
        if (quot_cert->parsed() || quot_build->parsed() || quot_ver->parsed()) {
            const auto& raw = pick_action(in, opt_action);
            auto si = in.spaces.find(raw.space);
            if (si == in.spaces.end())
                fail(ErrorKind::ParseError, "action references unknown space '" + raw.space + "'");
            GroupAction action = io::resolve_action(raw, si->second);
            if (quot_build->parsed()) {
                auto q = build_quotient(action);
                out << space_block(raw.name + ".quotient", q.total);
                out << io::emit_map("projection", raw.space, raw.name + ".quotient", *q.projection);
                return {kOk, out.str()};
            }
            auto cert = certify_quotient(action);
            if (quot_cert->parsed()) {
                const FinSpace& b = action.space();
                out << "certificate: " << (cert.accepted ? "accept" : "reject") << "\n";
                if (!cert.accepted) out << "reason: " << cert.reject_reason << "\n";
                out << "upper ramification: " << b.describe(cert.upper_ramification) << "\n";
                out << "lower ramification: " << cert.quotient.total.describe(cert.lower_ramification)
                    << "\n";
                out << "separation: " << (cert.separation.holds ? "ok" : "fails") << "\n";
                if (cert.accepted) {
                    out << "projection diffuse: " << (cert.quotient_map_diffuse ? "yes" : "no")
                        << "\n";
                    out << "lower ramification negligible: "
                        << (cert.lower_ramification_negligible ? "yes" : "no") << "\n";
                }
                return {cert.accepted ? kOk : kRefuted, out.str()};
            }
            auto rep = quotient_property_check(cert, opt_probes);
            out << "projection diffuse: " << (rep.projection_diffuse ? "yes" : "no") << "\n";
            if (!rep.projection_diffuse && rep.projection_witness)
                out << "witness element: ("
                    << cert.quotient.total.describe(rep.projection_witness->open_set) << ", "
                    << cert.quotient.total.describe(rep.projection_witness->inner) << ")\n";
            out << "probes checked: " << rep.probes_checked << ", maps checked: " << rep.maps_checked
                << "\n";
            out << "violations: " << rep.violations.size() << "\n";
            for (const auto& v : rep.violations)
                out << "  probe size " << v.probe_size << ": map [" << v.map_description
                    << "] diffuse=" << (v.map_diffuse ? "yes" : "no")
                    << " composite=" << (v.composite_diffuse ? "yes" : "no") << "\n";
            return {rep.holds() ? kOk : kRefuted, out.str()};
        }
        if (mor_eq->parsed()) {
            const auto& raw_action = pick_action(in, opt_action);
            auto si = in.spaces.find(raw_action.space);
            if (si == in.spaces.end())
                fail(ErrorKind::ParseError, "action references unknown space '" + raw_action.space + "'");
            GroupAction action = io::resolve_action(raw_action, si->second);
            auto rf = resolve_raw_map(in, pick_map(in, opt_map));
            auto rg = resolve_raw_map(in, pick_map(in, opt_map2));
            auto f = ContinuousMap::make(*rf.dom, *rf.cod, rf.values);
            auto g = ContinuousMap::make(*rg.dom, *rg.cod, rg.values);
            auto verdict = pointwise_vs_component_report(f, g, action);
            out << "equality: " << to_string(verdict.kind) << "\n";
            out << "component,element\n";
            for (const auto& [comp, h] : verdict.per_component)
                out << "\"" << f.dom().describe(comp) << "\"," << action.element_id(h) << "\n";
            out << "pathology\n";
            for (auto x : mask_members(verdict.pathology_points))
                out << f.dom().name(x) << "\n";
            return {verdict.kind == EqualityKind::ComponentWise ? kOk : kRefuted, out.str()};
        }
        if (lam_build->parsed() || lam_ver->parsed()) {
            const FinSpace& s = pick_space(in, opt_space);
            std::vector<SubsetElement> base;
            for (const auto& spec : opt_elements) {
                auto colon = spec.find(':');
                std::string carrier = colon == std::string::npos ? spec : spec.substr(0, colon);
                std::string inner = colon == std::string::npos ? "" : spec.substr(colon + 1);
                base.push_back(make_element(s, s.set_of(io::split_commas(carrier)),
                                            s.set_of(io::split_commas(inner))));
            }
            NegInstance inst = make_instance(s, base);
            LambdaSpace ls = lambda_construct(inst);
            if (lam_build->parsed()) {
                out << space_block("lambda", ls.total);
                out << io::emit_map("projection", "lambda", opt_space.empty() ? "base" : opt_space,
                                    ls.projection);
                return {kOk, out.str()};
            }
            auto rep = verify_representability(ls, opt_probes);
            out << "representability (probes<=" << opt_probes << "): "
                << (rep.holds ? "yes" : "no") << "\n";
            for (const auto& p : rep.probes)
                out << "  probe size " << p.probe_size << ": upstairs " << p.upstairs
                    << ", downstairs " << p.downstairs << ", injective "
                    << (p.injective ? "yes" : "no") << ", surjective "
                    << (p.surjective ? "yes" : "no") << "\n";
            out << rep.direction_note << "\n";
            return {rep.holds ? kOk : kRefuted, out.str()};
        }
        if (sch_rep->parsed()) {
            schwarz::SchwarzConfig cfg;
            cfg.n_max = opt_nmax;
            cfg.grid_step = opt_grid;
            auto diff = schwarz::diffuse_sample_report(cfg);
            auto path = schwarz::pathology_witness_search(cfg);
            out << "diffuseness: " << diff.overall << "\n";
            for (const auto& e : diff.strata) out << "  " << e.stratum << ": " << e.verdict << "\n";
            out << "pathology: " << path.overall << "\n";
            for (const auto& e : path.strata) out << "  " << e.stratum << ": " << e.verdict << "\n";
            double residual = schwarz::pointwise_identity_residual(cfg);
            out << "pointwise identification residual: " << schwarz::format_double(residual)
                << "\n";
            if (!opt_csv.empty()) {
                io::write_file(opt_csv, schwarz::report_csv(path));
                out << "csv written: " << opt_csv << "\n";
            }
            bool ok = diff.overall == "diffuse: no obstruction found" &&
                      path.overall == "pathology confirmed at every target" &&
                      residual <= cfg.tol;
            return {ok ? kOk : kRefuted, out.str()};
        }
        if (probe_cat->parsed()) {
            auto cat = probe_catalog(opt_size, opt_cap);
            out << "catalog size " << opt_size << ": " << cat.size() << " spaces\n";
            for (std::size_t i = 0; i < cat.size(); ++i)
                out << space_block("cat" + std::to_string(opt_size) + "_" + std::to_string(i),
                                   cat[i]);
            return {kOk, out.str()};
        }
        return {kUsage, "usage error: no subcommand selected\n"};
    } catch (const TopologyError& e) {
        out << "error: " << e.what() << "\n";
        int code = kUsage;
        if (e.kind() == ErrorKind::BudgetExceeded) code = kBudget;
        return {code, out.str()};
    }
}

}  // namespace fintop::cli

#pragma once

// `ternrep` command line. run() takes the argument vector and output streams
// so the whole CLI can be exercised in-process.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "ternrep/certificate.hpp"
#include "ternrep/congruence.hpp"
#include "ternrep/enumerate.hpp"
#include "ternrep/fixtures.hpp"
#include "ternrep/isometry.hpp"
#include "ternrep/prover.hpp"

namespace ternrep::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitMismatch = 1;
inline constexpr int kExitUnprovable = 2;
inline constexpr int kExitUsage = 64;

inline constexpr Int kDeepBound = 3'000'000;

using nlohmann::json;

inline json matrix_json(const Matrix3& m) { return cert_detail::to_json(m); }
inline json vector_json(const Vector3& v) { return cert_detail::to_json(v); }

/// "4:0,12:2" -> classes.
inline std::vector<ResidueClass> parse_classes(const std::string& text) {
    std::vector<ResidueClass> out;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        auto colon = item.find(':');
        if (colon == std::string::npos) throw Error(ErrorKind::InvalidInput, "class '" + item + "' is not d:a");
        try {
            out.push_back(ResidueClass::make(std::stoll(item.substr(0, colon)), std::stoll(item.substr(colon + 1))));
        } catch (const std::logic_error&) {
            throw Error(ErrorKind::InvalidInput, "class '" + item + "' is not d:a");
        }
    }
    if (out.empty()) throw Error(ErrorKind::InvalidInput, "empty class list");
    return out;
}

inline std::string describe_direction(const DirectionProof& proof) {
    if (const auto* sub = std::get_if<SubformProof>(&proof)) return "subform " + to_string(sub->matrix);
    const auto& cover = std::get<CoverProof>(proof);
    std::string out = "cover mod " + std::to_string(cover.cover.modulus) + ":";
    for (const auto& c : cover.classes) out += " " + to_string(c.cls) + (c.escape ? "(escape)" : "");
    return out;
}

inline json direction_json(const DirectionProof& proof) {
    if (const auto* sub = std::get_if<SubformProof>(&proof))
        return json{{"method", "subform"}, {"matrix", matrix_json(sub->matrix)}};
    const auto& cover = std::get<CoverProof>(proof);
    json classes = json::array();
    for (const auto& c : cover.classes)
        classes.push_back(json{{"d", c.cls.d}, {"a", c.cls.a}, {"cosets", c.report.total()},
                               {"bad", c.report.bad.size()}, {"escape", c.escape.has_value()}});
    return json{{"method", "cover"}, {"modulus", cover.cover.modulus}, {"classes", classes}};
}

struct Options {
    std::string format = "text";
    unsigned jobs = 0;

    std::string form, f, g, set, classes, out_path, cert_path;
    Int max = 0;
    Int d = 1, a = 0;
    bool theta = false, primitive = false, report = false, deep = false, all = false, no_subform = false;
};

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"ternrep: representations of positive definite ternary quadratic forms.\n"
                 "Forms are \"a,b,c,r,s,t\" for a x^2 + b y^2 + c z^2 + r yz + s xz + t xy,\n"
                 "or a fixture name (S1a..S15d, S4f, S4g, S6f, S6g, S7f, S7g, S8f, S8g)."};
    app.require_subcommand(1);
    app.fallthrough();
    Options o;
    app.add_option("--format", o.format, "Output format")->check(CLI::IsMember({"text", "json"}));
    app.add_option("--jobs", o.jobs, "Worker threads (0: all cores)");

    auto* enum_cmd = app.add_subcommand("enum", "Represented integers up to a bound");
    enum_cmd->add_option("--form", o.form, "Form")->required();
    enum_cmd->add_option("--max", o.max, "Bound")->required()->check(CLI::NonNegativeNumber);
    enum_cmd->add_flag("--theta", o.theta, "Print n:r(n) for every n");
    enum_cmd->add_flag("--primitive", o.primitive, "Primitive representations only");

    auto* theta_cmd = app.add_subcommand("theta", "Theta series coefficients r(n) up to a bound");
    theta_cmd->add_option("--form", o.form, "Form")->required();
    theta_cmd->add_option("--max", o.max, "Bound")->required()->check(CLI::NonNegativeNumber);

    auto* transforms_cmd = app.add_subcommand("transforms", "All T with T^t M_f T = d^2 M_g");
    auto* isometric_cmd = app.add_subcommand("isometric", "Unimodular T with T^t M_f T = M_g");
    auto* subform_cmd = app.add_subcommand("subform", "T with T^t M_g T = M_f (f is a subform of g)");
    auto* prec_cmd = app.add_subcommand("prec", "Good/bad cosets of R(g,d,a) against R(f,g,d)");
    auto* prove_cmd = app.add_subcommand("prove", "Prove Q(f) = Q(g) and write a certificate");
    for (auto* cmd : {transforms_cmd, isometric_cmd, subform_cmd, prec_cmd, prove_cmd}) {
        cmd->add_option("--f", o.f, "Form f")->required();
        cmd->add_option("--g", o.g, "Form g")->required();
    }
    for (auto* cmd : {transforms_cmd, prec_cmd}) cmd->add_option("--d", o.d, "Modulus d")->required();
    prec_cmd->add_option("--a", o.a, "Residue a")->required();
    prec_cmd->add_flag("--report", o.report, "List bad cosets and witnesses");

    prove_cmd->add_option("--classes", o.classes, "Covering classes \"d:a,d:a,...\" (default: search)");
    prove_cmd->add_option("--max", o.max, "Empirical cross-check bound (default 1000000)");
    prove_cmd->add_flag("--deep", o.deep, "Empirical bound 3000000");
    prove_cmd->add_option("--out", o.out_path, "Certificate output path");
    prove_cmd->add_flag("--no-subform", o.no_subform, "Use covers even where a subform exists");

    auto* table_cmd = app.add_subcommand("table", "Compare the represented sets of a table set (scaled by 2)");
    table_cmd->add_option("--set", o.set, "Set id S1..S15");
    table_cmd->add_flag("--all", o.all, "Every set");
    table_cmd->add_option("--max", o.max, "Bound (default 1000000)");
    table_cmd->add_flag("--deep", o.deep, "Bound 3000000");

    auto* cert_cmd = app.add_subcommand("cert", "Certificate tools");
    cert_cmd->require_subcommand(1);
    auto* cert_check_cmd = cert_cmd->add_subcommand("check", "Independently verify a certificate");
    cert_check_cmd->add_option("file", o.cert_path, "Certificate JSON")->required();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n" << app.help();
        return kExitUsage;
    }

    const bool as_json = o.format == "json";
    auto fail = [&](const std::string& kind, const std::string& message, int code) {
        if (as_json)
            out << json{{"error", {{"kind", kind}, {"message", message}}}}.dump() << "\n";
        else
            err << "error: " << message << "\n";
        return code;
    };

    try {
        if (enum_cmd->parsed() || theta_cmd->parsed()) {
            const QuadForm form = resolve_form(o.form);
            if (o.theta || theta_cmd->parsed()) {
                const auto series = theta(form, o.max, o.jobs);
                if (as_json) {
                    out << json{{"form", cert_detail::to_json(form)}, {"max", o.max}, {"theta", series.coeffs}}.dump() << "\n";
                } else {
                    for (std::size_t n = 0; n < series.coeffs.size(); ++n) out << n << ":" << series.coeffs[n] << "\n";
                }
                return kExitOk;
            }
            const RepSet set = o.primitive ? primitive_represented_set(form, o.max, o.jobs) : represented_set(form, o.max, o.jobs);
            if (as_json) {
                out << json{{"form", cert_detail::to_json(form)}, {"max", o.max}, {"primitive", o.primitive}, {"members", set.members}}.dump()
                    << "\n";
            } else {
                for (Int n : set.members) out << n << "\n";
            }
            return kExitOk;
        }

        if (transforms_cmd->parsed()) {
            const auto set = find_transforms(resolve_form(o.f), resolve_form(o.g), o.d);
            if (as_json) {
                json mats = json::array();
                for (const auto& m : set.matrices) mats.push_back(matrix_json(m));
                out << json{{"d", o.d}, {"count", set.size()}, {"complete", set.complete}, {"matrices", mats}}.dump() << "\n";
            } else {
                out << "TRANSFORMS: " << set.size() << " (d=" << o.d << ")\n";
                for (const auto& m : set.matrices) out << to_string(m) << "\n";
            }
            return kExitOk;
        }

        if (isometric_cmd->parsed() || subform_cmd->parsed()) {
            const QuadForm f = resolve_form(o.f), g = resolve_form(o.g);
            const bool iso = isometric_cmd->parsed();
            const auto t = iso ? is_isometric(f, g) : subform_witness(f, g);
            const std::string label = iso ? "ISOMETRIC" : "SUBFORM";
            if (as_json) {
                json j{{iso ? "isometric" : "subform", t.has_value()}};
                j["matrix"] = t ? matrix_json(*t) : json(nullptr);
                out << j.dump() << "\n";
            } else {
                out << label << ": " << (t ? "true " + to_string(*t) : "false") << "\n";
            }
            return kExitOk;
        }

        if (prec_cmd->parsed()) {
            const auto cls = ResidueClass::make(o.d, o.a);
            const auto report = precedes(resolve_form(o.f), resolve_form(o.g), cls);
            if (as_json) {
                json bad = json::array();
                for (const auto& v : report.bad) bad.push_back(vector_json(v));
                json witnesses = json::object();
                for (const auto& [v, i] : report.good) witnesses[cert_detail::coset_key(v)] = i;
                out << json{{"d", cls.d}, {"a", cls.a}, {"precedes", report.precedes()}, {"total", report.total()},
                            {"transforms", report.transforms.size()}, {"bad", bad}, {"witnesses", witnesses}}
                           .dump()
                    << "\n";
            } else {
                out << "PRECEDES: " << (report.precedes() ? "true" : "false") << " (" << report.total() << " cosets, "
                    << report.bad.size() << " bad)\n";
                if (o.report) {
                    out << "transforms: " << report.transforms.size() << "\n";
                    for (const auto& v : report.bad) out << "bad " << to_string(v) << "\n";
                    for (const auto& [v, i] : report.good)
                        out << "good " << to_string(v) << " " << i << " " << to_string(report.transforms.matrices[i]) << "\n";
                }
            }
            return kExitOk;
        }

        if (prove_cmd->parsed()) {
            ProveOptions options;
            options.jobs = o.jobs;
            options.try_subform = !o.no_subform;
            options.empirical_bound = o.deep ? kDeepBound : (o.max > 0 ? o.max : options.empirical_bound);
            if (!o.classes.empty()) options.classes = parse_classes(o.classes);
            const QuadForm f = resolve_form(o.f), g = resolve_form(o.g);
            PairProof proof;
            try {
                proof = prove_pair(f, g, options);
            } catch (const Error& e) {
                if (e.kind() == ErrorKind::MismatchAt) return fail("MismatchAt", e.what(), kExitMismatch);
                if (e.kind() == ErrorKind::InvalidInput || e.kind() == ErrorKind::NotPositiveDefinite ||
                    e.kind() == ErrorKind::UnknownFixture)
                    throw;
                return fail(std::string(to_string(e.kind())), e.what(), kExitUnprovable);
            }
            const std::string cert = emit(proof);
            if (!o.out_path.empty()) {
                std::ofstream file(o.out_path, std::ios::binary);
                file << cert;
                if (!file) return fail("IO", "cannot write " + o.out_path, kExitUsage);
            }
            if (as_json) {
                out << json{{"proved", true}, {"empirical_bound", proof.empirical_bound},
                            {"f_in_g", direction_json(proof.f_in_g)}, {"g_in_f", direction_json(proof.g_in_f)}}
                           .dump()
                    << "\n";
            } else {
                out << "Q(f) <= Q(g): " << describe_direction(proof.f_in_g) << "\n";
                out << "Q(g) <= Q(f): " << describe_direction(proof.g_in_f) << "\n";
                out << "PROVED: Q(f) = Q(g) (sets agree up to " << proof.empirical_bound << ")\n";
            }
            return kExitOk;
        }

        if (table_cmd->parsed()) {
            const Int bound = o.deep ? kDeepBound : (o.max > 0 ? o.max : 1'000'000);
            std::vector<std::string> ids;
            if (o.all) {
                for (const auto& s : table_sets()) ids.push_back(s.id);
            } else if (!o.set.empty()) {
                ids.push_back(o.set);
            } else {
                return fail("InvalidInput", "table needs --set or --all", kExitUsage);
            }
            bool ok = true;
            json reports = json::array();
            for (const auto& id : ids) {
                const auto report = verify_table(id, bound, o.jobs);
                ok = ok && report.sets_equal() && report.all_non_isometric();
                if (as_json) {
                    json pairs = json::array();
                    for (const auto& p : report.pairs)
                        pairs.push_back(json{{"first", report.names[p.first]}, {"second", report.names[p.second]},
                                             {"isometric", p.isometric}});
                    reports.push_back(json{{"set", report.set}, {"max", report.bound}, {"equal", report.sets_equal()},
                                           {"mismatch", report.mismatch ? json(*report.mismatch) : json(nullptr)},
                                           {"pairs", pairs}});
                } else {
                    out << report.set << ": "
                        << (report.sets_equal() ? "equal up to " + std::to_string(bound)
                                                : "MISMATCH at " + std::to_string(*report.mismatch))
                        << ", " << (report.all_non_isometric() ? "non-isometric" : "ISOMETRIC PAIR") << " ("
                        << report.pairs.size() << (report.pairs.size() == 1 ? " pair)\n" : " pairs)\n");
                }
            }
            if (as_json) out << reports.dump() << "\n";
            return ok ? kExitOk : kExitMismatch;
        }

        if (cert_check_cmd->parsed()) {
            std::ifstream file(o.cert_path, std::ios::binary);
            if (!file) return fail("IO", "cannot read " + o.cert_path, kExitUsage);
            std::stringstream buffer;
            buffer << file.rdbuf();
            const Verdict verdict = check(buffer.str());
            if (as_json)
                out << json{{"accepted", verdict.accepted}, {"clause", verdict.clause}, {"detail", verdict.detail}}.dump() << "\n";
            else
                out << (verdict.accepted ? "ACCEPT" : "REJECT " + verdict.clause + ": " + verdict.detail) << "\n";
            return verdict.accepted ? kExitOk : kExitMismatch;
        }
    } catch (const Error& e) {
        return fail(std::string(to_string(e.kind())), e.what(), kExitUsage);
    }
    return kExitUsage;
}

}  // namespace ternrep::cli

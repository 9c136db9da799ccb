/**
 * mvchi — exact Euler characteristic valuation for Łukasiewicz-logic
 * formulas over finitely presented MV-algebras.
 *
 * Subcommands:
 *   eval                evaluate a formula at an exact rational point
 *   chi                 compute E(formula), optionally modulo a theory
 *   emit-triangulation  print the joint linearizing triangulation as JSON
 *   check-axioms        seeded randomized verification of the valuation laws
 *
 * Exit codes: 0 success, 1 property failure, 2 usage or parse error,
 * 3 resource cap exceeded, 4 inconsistent theory (an E = 0 report is still
 * printed). All structured output goes to stdout as JSON and is byte-
 * deterministic for a fixed command line; diagnostics go to stderr.
 */

#include <algorithm>
#include <array>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"

#include <mvchi/complex.hpp>
#include <mvchi/errors.hpp>
#include <mvchi/formula.hpp>
#include <mvchi/linearize.hpp>
#include <mvchi/numeric.hpp>
#include <mvchi/rng.hpp>
#include <mvchi/schauder.hpp>
#include <mvchi/valuation.hpp>

namespace {

using nlohmann::ordered_json;
using namespace mvchi;

constexpr int kExitOk = 0;
constexpr int kExitPropertyFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitResourceCap = 3;
constexpr int kExitInconsistentTheory = 4;

/// "1/3,0,3/4" -> exact rationals; decimals are rejected by parse_fraction.
std::vector<Rat> parse_point(const std::string& text) {
    std::vector<Rat> out;
    std::size_t start = 0;
    while (true) {
        std::size_t comma = text.find(',', start);
        std::string piece = comma == std::string::npos ? text.substr(start)
                                                       : text.substr(start, comma - start);
        out.push_back(parse_fraction(piece));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

int infer_dim(const FormulaPtr& phi, const FormulaPtr& theta) {
    int d = max_var_index(phi);
    if (theta) d = std::max(d, max_var_index(theta));
    return std::max(d, 1);
}

Method method_from_name(const std::string& name) {
    if (name == "auto") return Method::Auto;
    if (name == "geometric") return Method::Geometric;
    if (name == "recursive") return Method::Recursive;
    if (name == "both") return Method::Both;
    throw DomainError("unknown method '" + name + "'");
}

/// The formula's representation over the joint linearizing triangulation,
/// restricted to the models of the theory when one is given.
McNaughtonRep build_rep(const FormulaPtr& phi, const FormulaPtr& theta, int d,
                        const LinearizeOptions& lopts) {
    std::vector<FormulaPtr> fs{phi};
    if (theta) fs.push_back(theta);
    JointLinearization joint = linearizing_triangulation(fs, d, lopts);
    if (!theta)
        return McNaughtonRep{std::move(joint.triangulation), std::move(joint.values[0])};
    TheoryRestriction tr = restrict_to_theory(joint, 1);
    return McNaughtonRep{std::move(tr.triangulation), std::move(tr.values[0])};
}

void write_json_file(const std::string& path, const ordered_json& j) {
    std::ofstream out(path);
    if (!out) throw DomainError("cannot open '" + path + "' for writing");
    out << j.dump(2) << "\n";
    if (!out) throw DomainError("write to '" + path + "' failed");
}

// ---------------------------------------------------------------- eval ----

struct EvalArgs {
    std::string formula;
    std::string at;
};

int run_eval(const EvalArgs& a) {
    FormulaPtr f = parse_formula(a.formula);
    std::vector<Rat> p = parse_point(a.at);
    std::cout << evaluate(f, p).str() << "\n";
    return kExitOk;
}

// ----------------------------------------------------------------- chi ----

struct ChiArgs {
    std::string formula;
    std::string theory;
    std::string method = "auto";
    int dim = 0; // 0 = infer from the formulas
    std::string trace_path;
    std::string emit_path;
    long long cap_blowups = 0;   // 0 = library default
    long long cap_recursion = 0; // 0 = library default
};

ValuationOptions options_from_caps(long long cap_blowups, long long cap_recursion) {
    ValuationOptions opts;
    if (cap_blowups > 0) opts.linearize.max_blow_ups = cap_blowups;
    if (cap_recursion > 0) opts.max_recursion_nodes = cap_recursion;
    return opts;
}

int run_chi(const ChiArgs& a) {
    FormulaPtr phi = parse_formula(a.formula);
    FormulaPtr theta = a.theory.empty() ? nullptr : parse_formula(a.theory);
    int d = a.dim > 0 ? a.dim : infer_dim(phi, theta);

    Method m = method_from_name(a.method);
    if (!a.trace_path.empty()) {
        if (m == Method::Geometric) {
            std::cerr << "error: --trace records the recursive scheme's root reduction; "
                         "it cannot be combined with --method geometric\n";
            return kExitUsage;
        }
        if (m == Method::Auto) m = Method::Both;
    }
    ValuationOptions opts = options_from_caps(a.cap_blowups, a.cap_recursion);

    ValuationReport report = euler_valuation(phi, theta, d, m, opts);

    if (report.inconsistent_theory) {
        if (!a.trace_path.empty() || !a.emit_path.empty())
            std::cerr << "note: the theory is inconsistent; no triangulation or trace "
                         "emitted\n";
    } else if (!a.trace_path.empty() || !a.emit_path.empty()) {
        McNaughtonRep rep = build_rep(phi, theta, d, opts.linearize);
        HatDecomposition dec = hat_decomposition(rep);
        if (!a.emit_path.empty()) {
            // the refinement the geometric method measures; unrefined for
            // the zero function, which needs no uplevel step
            Triangulation fine =
                dec.terms.empty()
                    ? rep.triangulation
                    : refine_uplevel(rep, n_bound(dec) + 1, opts.linearize).triangulation;
            write_json_file(a.emit_path, triangulation_to_json(fine));
        }
        if (!a.trace_path.empty()) {
            ordered_json tj;
            if (dec.terms.empty()) {
                // the zero function has no reduction step; emit the trivial trace
                tj["b0"] = nullptr;
                tj["steps"] = ordered_json::array();
                tj["c_vertices"] = ordered_json::array();
                tj["triangulation"] = triangulation_to_json(rep.triangulation);
            } else {
                tj = reduction_trace_to_json(root_reduction(rep, opts.reduction));
            }
            write_json_file(a.trace_path, tj);
        }
    }

    std::cout << report_to_json(report).dump(2) << "\n";
    return report.inconsistent_theory ? kExitInconsistentTheory : kExitOk;
}

// -------------------------------------------------- emit-triangulation ----

struct EmitArgs {
    std::string formula;
    std::string theory;
    int dim = 0;
    long long cap_blowups = 0;
};

int run_emit(const EmitArgs& a) {
    FormulaPtr phi = parse_formula(a.formula);
    FormulaPtr theta = a.theory.empty() ? nullptr : parse_formula(a.theory);
    int d = a.dim > 0 ? a.dim : infer_dim(phi, theta);
    std::vector<FormulaPtr> fs{phi};
    if (theta) fs.push_back(theta);
    LinearizeOptions lopts;
    if (a.cap_blowups > 0) lopts.max_blow_ups = a.cap_blowups;
    JointLinearization joint = linearizing_triangulation(fs, d, lopts);
    std::cout << triangulation_to_json(joint.triangulation).dump(2) << "\n";
    return kExitOk;
}

// -------------------------------------------------------- check-axioms ----

struct AxiomArgs {
    long long trials = 0;
    int vars = 2;
    int depth = 6;
    std::uint64_t seed = 0;
    long long cap_blowups = 0;
    long long cap_recursion = 0;
};

struct CheckCounts {
    long long pass = 0;
    long long fail = 0;
};

ordered_json counts_json(const CheckCounts& c) {
    return ordered_json{{"pass", c.pass}, {"fail", c.fail}};
}

int run_check_axioms(const AxiomArgs& a) {
    FormulaGenOptions gopts;
    gopts.vars = a.vars;
    gopts.max_depth = a.depth;
    ValuationOptions vopts = options_from_caps(a.cap_blowups, a.cap_recursion);

    CheckCounts zero, normalization, idempotency, additivity, agreement;
    ordered_json first = nullptr;
    auto record_fail = [&](CheckCounts& c, const char* check, long long trial,
                           const std::string& p, const std::string& q, std::string detail) {
        ++c.fail;
        if (first.is_null())
            first = ordered_json{{"check", check}, {"trial", trial},     {"p", p},
                                 {"q", q},         {"detail", std::move(detail)}};
    };

    // (i) E(0) = 0, once: it does not vary with the trial.
    {
        FormulaPtr f0 = Formula::constant0();
        long long eg = euler_geometric(f0, nullptr, a.vars, vopts).E;
        long long er = euler_recursive(f0, nullptr, a.vars, vopts).E;
        if (eg == 0 && er == 0)
            ++zero.pass;
        else
            record_fail(zero, "zero", -1, "0", "",
                        "E(0): geometric " + std::to_string(eg) + ", recursive " +
                            std::to_string(er));
    }

    SplitMix64 master(a.seed);
    for (long long trial = 0; trial < a.trials; ++trial) {
        SplitMix64 rng(master.next());
        FormulaPtr p = random_formula(rng, gopts);
        FormulaPtr q = random_formula(rng, gopts);
        const std::string ps = print_formula(p);
        const std::string qs = print_formula(q);

        // one joint triangulation carries all five functions of this trial
        std::array<FormulaPtr, 5> fs = {p, q, Formula::join(p, q), Formula::meet(p, q),
                                        Formula::oplus(p, q)};
        static constexpr std::array<const char*, 5> kNames = {"p", "q", "p | q", "p & q",
                                                              "p + q"};
        JointLinearization joint = linearizing_triangulation(
            std::vector<FormulaPtr>(fs.begin(), fs.end()), a.vars, vopts.linearize);

        std::array<long long, 5> eg{}, er{};
        for (std::size_t i = 0; i < fs.size(); ++i) {
            McNaughtonRep rep{joint.triangulation, joint.values[i]};
            eg[i] = euler_geometric_rep(rep, vopts);
            er[i] = euler_recursive_rep(rep, vopts);
            if (eg[i] == er[i])
                ++agreement.pass;
            else
                record_fail(agreement, "method_agreement", trial, ps, qs,
                            std::string("E(") + kNames[i] + "): geometric " +
                                std::to_string(eg[i]) + ", recursive " +
                                std::to_string(er[i]));
        }

        // (iii) idempotency: E(p + q) = E(p | q), under both methods
        if (eg[4] == eg[2] && er[4] == er[2])
            ++idempotency.pass;
        else
            record_fail(idempotency, "idempotency", trial, ps, qs,
                        "E(p + q) = " + std::to_string(eg[4]) + "/" + std::to_string(er[4]) +
                            " but E(p | q) = " + std::to_string(eg[2]) + "/" +
                            std::to_string(er[2]) + " (geometric/recursive)");

        // (iv) additivity: E(p | q) + E(p & q) = E(p) + E(q), under both methods
        if (eg[2] + eg[3] == eg[0] + eg[1] && er[2] + er[3] == er[0] + er[1])
            ++additivity.pass;
        else
            record_fail(additivity, "additivity", trial, ps, qs,
                        "E(p | q) + E(p & q) = " + std::to_string(eg[2] + eg[3]) + "/" +
                            std::to_string(er[2] + er[3]) + " but E(p) + E(q) = " +
                            std::to_string(eg[0] + eg[1]) + "/" +
                            std::to_string(er[0] + er[1]) + " (geometric/recursive)");

        // (ii) normalization: a hat of a random refinement has E = 1
        int hd = std::min(a.vars, 2);
        Triangulation t = kuhn_triangulation(hd);
        int blows = static_cast<int>(rng.below(7));
        for (int b = 0; b < blows; ++b) {
            const auto& maxs = t.maximal_simplexes();
            std::vector<int> tuple = maxs[rng.below(maxs.size())];
            std::size_t i0 = rng.below(tuple.size());
            std::size_t j0 = rng.below(tuple.size() - 1);
            if (j0 >= i0) ++j0;
            t = blow_up(std::move(t), tuple[i0], tuple[j0]);
        }
        int hv = static_cast<int>(rng.below(t.vertex_count()));
        McNaughtonRep hat = hat_function(t, hv);
        long long hg = euler_geometric_rep(hat, vopts);
        long long hr = euler_recursive_rep(hat, vopts);
        if (hg == 1 && hr == 1)
            ++normalization.pass;
        else
            record_fail(normalization, "normalization", trial,
                        "hat at vertex " + std::to_string(hv) + " of a " +
                            std::to_string(blows) + "-blow-up refinement (d=" +
                            std::to_string(hd) + ")",
                        "",
                        "E(hat): geometric " + std::to_string(hg) + ", recursive " +
                            std::to_string(hr));
    }

    bool all_passed = zero.fail == 0 && normalization.fail == 0 && idempotency.fail == 0 &&
                      additivity.fail == 0 && agreement.fail == 0;

    ordered_json summary;
    summary["trials"] = a.trials;
    summary["vars"] = a.vars;
    summary["depth"] = a.depth;
    summary["seed"] = a.seed;
    summary["checks"] = ordered_json{{"zero", counts_json(zero)},
                                     {"normalization", counts_json(normalization)},
                                     {"idempotency", counts_json(idempotency)},
                                     {"additivity", counts_json(additivity)},
                                     {"method_agreement", counts_json(agreement)}};
    summary["all_passed"] = all_passed;
    summary["first_counterexample"] = first;
    std::cout << summary.dump(2) << "\n";
    return all_passed ? kExitOk : kExitPropertyFailure;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact Euler characteristic valuation for Lukasiewicz-logic formulas"};
    app.require_subcommand(1);

    EvalArgs eval_args;
    CLI::App* eval = app.add_subcommand("eval", "evaluate a formula at an exact point");
    eval->add_option("formula", eval_args.formula, "formula text, e.g. \"x1 + !x2\"")
        ->required();
    eval->add_option("--at", eval_args.at,
                     "comma-separated exact fractions, e.g. 1/3 or 3/4,1/2 "
                     "(decimals are rejected)")
        ->required();

    ChiArgs chi_args;
    CLI::App* chi = app.add_subcommand("chi", "compute the Euler characteristic valuation");
    chi->add_option("formula", chi_args.formula, "formula text")->required();
    chi->add_option("--theory", chi_args.theory, "theory formula; E is computed modulo "
                                                 "its models");
    chi->add_option("--dim", chi_args.dim, "ambient dimension (default: largest variable "
                                           "index)")
        ->check(CLI::Range(1, 8));
    chi->add_option("--method", chi_args.method, "valuation method (default: auto)")
        ->check(CLI::IsMember({"auto", "geometric", "recursive", "both"}));
    chi->add_option("--trace", chi_args.trace_path,
                    "write the recursive scheme's root reduction trace to this file as "
                    "JSON");
    chi->add_option("--emit-triangulation", chi_args.emit_path,
                    "write the refined triangulation the geometric method measures to "
                    "this file as JSON");
    chi->add_option("--cap-blowups", chi_args.cap_blowups, "blow-up budget")
        ->check(CLI::PositiveNumber);
    chi->add_option("--cap-recursion", chi_args.cap_recursion, "recursion node budget")
        ->check(CLI::PositiveNumber);

    EmitArgs emit_args;
    CLI::App* emit = app.add_subcommand("emit-triangulation",
                                        "print the joint linearizing triangulation");
    emit->add_option("formula", emit_args.formula, "formula text")->required();
    emit->add_option("--theory", emit_args.theory, "theory formula included in the joint "
                                                   "linearization");
    emit->add_option("--dim", emit_args.dim, "ambient dimension (default: largest "
                                             "variable index)")
        ->check(CLI::Range(1, 8));
    emit->add_option("--cap-blowups", emit_args.cap_blowups, "blow-up budget")
        ->check(CLI::PositiveNumber);

    AxiomArgs ax_args;
    CLI::App* ax = app.add_subcommand("check-axioms",
                                      "verify the valuation laws on random formulas");
    ax->add_option("--trials", ax_args.trials, "number of random formula pairs")
        ->required()
        ->check(CLI::PositiveNumber);
    ax->add_option("--vars", ax_args.vars, "number of variables (default 2)")
        ->check(CLI::Range(1, 8));
    ax->add_option("--depth", ax_args.depth, "formula generator depth limit (default 6)")
        ->check(CLI::Range(1, 64));
    ax->add_option("--seed", ax_args.seed, "RNG seed (required for reproducibility)")
        ->required();
    ax->add_option("--cap-blowups", ax_args.cap_blowups, "blow-up budget")
        ->check(CLI::PositiveNumber);
    ax->add_option("--cap-recursion", ax_args.cap_recursion, "recursion node budget")
        ->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e); // prints help or the usage error
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (eval->parsed()) return run_eval(eval_args);
        if (chi->parsed()) return run_chi(chi_args);
        if (emit->parsed()) return run_emit(emit_args);
        if (ax->parsed()) return run_check_axioms(ax_args);
        std::cerr << "error: no subcommand\n";
        return kExitUsage;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const StructuralError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ResourceLimitError& e) {
        std::cerr << "error: " << e.what() << "\n";
        if (e.partial)
            std::cerr << "note: the partial triangulation had "
                      << e.partial->vertex_count() << " vertices when the cap was hit\n";
        return kExitResourceCap;
    } catch (const InconsistentTheoryError& e) {
        // chi reports this through a flagged report; reaching here means a
        // bare library path (e.g. emit-triangulation) surfaced it
        std::cerr << "error: " << e.what() << "\n";
        return kExitInconsistentTheory;
    } catch (const InternalError& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitPropertyFailure;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitPropertyFailure;
    }
}

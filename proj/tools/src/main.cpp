// fraisse: command line surface for the metric Fraisse workbench.
//
// Exit codes: 0 success / property holds, 1 definite negative answer,
// 2 inconclusive (a budget or cap ran out), 64 usage errors, 65 parse or
// precondition errors, 70 internal invariant failures.

#include "fraisse/amalgamation.hpp"
#include "fraisse/concentration.hpp"
#include "fraisse/embeddings.hpp"
#include "fraisse/errors.hpp"
#include "fraisse/ramsey.hpp"
#include "fraisse/rational.hpp"
#include "fraisse/structure_io.hpp"
#include "fraisse/structures.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace fraisse;

constexpr int kExitHolds = 0;
constexpr int kExitNegative = 1;
constexpr int kExitInconclusive = 2;
constexpr int kExitUsage = 64;
constexpr int kExitData = 65;
constexpr int kExitInternal = 70;

Rational parse_rational_arg(const std::string& text, const std::string& what) {
    std::optional<Rational> q = parse_rational(text);
    if (!q) throw DomainError(what + ": expected a rational p/q literal, got '" + text + "'");
    return *q;
}

std::vector<std::string> split_list(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : text) {
        if (c == sep) {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    parts.push_back(cur);
    return parts;
}

int resolve_point(const StructPtr& s, const std::string& label, const std::string& what) {
    const int p = s->point_index(label);
    if (p < 0) throw DomainError(what + ": no point labelled '" + label + "'");
    return p;
}

std::vector<int> resolve_points(const StructPtr& s, const std::string& csv, const std::string& what) {
    std::vector<int> out;
    for (const std::string& label : split_list(csv, ',')) out.push_back(resolve_point(s, label, what));
    return out;
}

// Pointed structure from an optional comma-separated label tuple; defaults to
// the full point list.
PointedStructure pointed(const StructPtr& s, const std::string& tuple_csv, const std::string& what) {
    if (tuple_csv.empty()) return pointed_on_all(s);
    PointedStructure p;
    p.structure = s;
    p.tuple = resolve_points(s, tuple_csv, what);
    for (int q = 0; q < s->size(); ++q) {
        bool covered = false;
        for (int t : p.tuple) {
            if (t == q) covered = true;
        }
        for (int c : s->constant_points) {
            if (c == q) covered = true;
        }
        if (!covered) {
            throw DomainError(what + ": point '" + s->points[static_cast<std::size_t>(q)] +
                              "' is neither a tuple entry nor a constant");
        }
    }
    return p;
}

// Embedding given by the comma-separated image labels of every source point,
// in source point order. Rechecked structurally.
Embedding make_map(const PointedStructure& src, const StructPtr& tgt, const std::string& image_csv,
                   const std::string& what) {
    Embedding e;
    e.source = src;
    e.target = tgt;
    e.map = resolve_points(tgt, image_csv, what);
    if (static_cast<int>(e.map.size()) != src.structure->size()) {
        throw DomainError(what + ": expected " + std::to_string(src.structure->size()) + " image labels, got " +
                          std::to_string(e.map.size()));
    }
    if (!is_embedding(e)) throw DomainError(what + ": the given map is not an embedding");
    return e;
}

void emit(const std::string& out_path, const std::string& text) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(out_path, std::ios::binary);
    if (!f) throw DomainError("cannot open output file '" + out_path + "'");
    f << text;
}

std::string map_labels(const Embedding& e) {
    std::string out;
    for (std::size_t i = 0; i < e.map.size(); ++i) {
        if (i) out += ' ';
        out += e.target->points[static_cast<std::size_t>(e.map[i])];
    }
    return out;
}

std::optional<long long> env_node_budget() {
    const char* raw = std::getenv("FRAISSE_NODE_BUDGET");
    if (!raw || !*raw) return std::nullopt;
    try {
        std::size_t used = 0;
        const long long v = std::stoll(raw, &used);
        if (used != std::string(raw).size() || v < 1) throw std::invalid_argument("range");
        return v;
    } catch (const std::exception&) {
        throw DomainError("FRAISSE_NODE_BUDGET must be a positive integer");
    }
}

// Shared flags describing a Ramsey instance.
struct RamseyArgs {
    std::string a_file;
    std::string a_tuple;
    std::string b_file;
    std::string c_file;
    std::string f_select = "all";
    std::string epsilon;
    long long node_budget = 0;  // 0: default (or FRAISSE_NODE_BUDGET)
};

void add_ramsey_flags(CLI::App* cmd, RamseyArgs& args, bool with_budget) {
    cmd->add_option("--a", args.a_file, "structure file for A")->required();
    cmd->add_option("--a-tuple", args.a_tuple, "comma-separated generator tuple of A (default: all points)");
    cmd->add_option("--b", args.b_file, "structure file for B")->required();
    cmd->add_option("--c", args.c_file, "structure file for the candidate C")->required();
    cmd->add_option("--f", args.f_select, "system of copies: 'all' or comma-separated indices into Emb(A,B)");
    cmd->add_option("--eps", args.epsilon, "tolerance epsilon as p/q")->required();
    if (with_budget) cmd->add_option("--node-budget", args.node_budget, "adversarial search node budget");
}

RamseyInstance build_instance(const RamseyArgs& args) {
    RamseyInstance inst;
    const StructPtr a_struct = load_structure_file(args.a_file);
    inst.a = pointed(a_struct, args.a_tuple, "--a-tuple");
    inst.b = load_structure_file(args.b_file);
    inst.c = load_structure_file(args.c_file);
    inst.epsilon = parse_rational_arg(args.epsilon, "--eps");
    const EmbeddingSet fset = enumerate_embeddings(inst.a, inst.b);
    if (args.f_select == "all") {
        inst.f = fset.members;
    } else {
        for (const std::string& tok : split_list(args.f_select, ',')) {
            int idx = -1;
            try {
                idx = std::stoi(tok);
            } catch (const std::exception&) {
                throw DomainError("--f: expected 'all' or integer indices, got '" + tok + "'");
            }
            if (idx < 0 || idx >= fset.size()) {
                throw DomainError("--f: index " + tok + " out of range (|Emb(A,B)| = " + std::to_string(fset.size()) +
                                  ")");
            }
            inst.f.push_back(fset.members[static_cast<std::size_t>(idx)]);
        }
    }
    return inst;
}

SearchLimits ramsey_limits(const RamseyArgs& args) {
    SearchLimits limits;
    if (args.node_budget > 0) {
        limits.node_budget = static_cast<std::uint64_t>(args.node_budget);
    } else if (std::optional<long long> env = env_node_budget()) {
        limits.node_budget = static_cast<std::uint64_t>(*env);
    }
    return limits;
}

// Exit-code trichotomy for a verifier report.
int verdict_exit(const VerifierReport& rep) {
    switch (rep.status) {
        case VerifierStatus::NoEmbedding:
            return kExitNegative;
        case VerifierStatus::Exact:
            return rep.worst_value <= rep.epsilon ? kExitHolds : kExitNegative;
        case VerifierStatus::Inconclusive:
            if (rep.upper_bound <= rep.epsilon) return kExitHolds;
            if (rep.worst_value > rep.epsilon) return kExitNegative;
            return kExitInconclusive;
    }
    return kExitInternal;
}

// Group closure from a base structure plus generator image lists.
GroupAction closure_from_args(const StructPtr& base, const std::vector<std::string>& gens,
                              const ClosureCaps& caps = {}) {
    if (gens.empty()) throw DomainError("--gen: need at least one generator");
    std::vector<Embedding> generators;
    const PointedStructure all = pointed_on_all(base);
    for (const std::string& g : gens) generators.push_back(make_map(all, base, g, "--gen"));
    return group_closure(base, generators, caps);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fraisse: exact workbench for finite metric structures with Lipschitz predicates"};
    app.require_subcommand(1);
    int threads = 1;
    app.add_option("--threads", threads, "cap on internal parallelism")->check(CLI::PositiveNumber);

    int exit_code = kExitHolds;
    std::string out_path;

    // validate
    std::vector<std::string> validate_files;
    CLI::App* c_validate = app.add_subcommand("validate", "check structure files against every axiom");
    c_validate->add_option("files", validate_files, "structure files")->required();
    c_validate->callback([&]() {
        std::ostringstream report;
        bool all_valid = true;
        for (const std::string& path : validate_files) {
            std::ifstream f(path, std::ios::binary);
            if (!f) throw DomainError("cannot open '" + path + "'");
            std::stringstream buf;
            buf << f.rdbuf();
            MetricStructure s = parse_structure(buf.str());
            const std::vector<Diagnostic> diags = validate(s);
            if (diags.empty()) {
                report << "ok " << path << "\n";
            } else {
                all_valid = false;
                report << "invalid " << path << "\n";
                for (const Diagnostic& d : diags) report << "  " << d.code << ": " << d.message << "\n";
            }
        }
        emit(out_path, report.str());
        exit_code = all_valid ? kExitHolds : kExitNegative;
    });

    // embs
    std::string embs_a, embs_a_tuple, embs_b;
    long long embs_cap = 0;
    CLI::App* c_embs = app.add_subcommand("embs", "enumerate Emb(A, B)");
    c_embs->add_option("--a", embs_a, "structure file for A")->required();
    c_embs->add_option("--a-tuple", embs_a_tuple, "generator tuple of A (default: all points)");
    c_embs->add_option("--b", embs_b, "structure file for B")->required();
    c_embs->add_option("--node-cap", embs_cap, "enumeration node cap");
    c_embs->callback([&]() {
        const StructPtr a_struct = load_structure_file(embs_a);
        const StructPtr b_struct = load_structure_file(embs_b);
        const PointedStructure a = pointed(a_struct, embs_a_tuple, "--a-tuple");
        EnumerationLimits limits;
        if (embs_cap > 0) {
            limits.node_cap = embs_cap;
        } else if (std::optional<long long> env = env_node_budget()) {
            limits.node_cap = *env;
        }
        const EmbeddingSet set = enumerate_embeddings(a, b_struct, limits);
        std::ostringstream report;
        report << "embeddings " << set.size() << "\n";
        for (const Embedding& e : set.members) report << "map " << map_labels(e) << "\n";
        emit(out_path, report.str());
    });

    // rho
    std::string rho_a, rho_a_tuple, rho_b, rho_alpha, rho_beta;
    CLI::App* c_rho = app.add_subcommand("rho", "sup distance between two embeddings A -> B");
    c_rho->add_option("--a", rho_a, "structure file for A")->required();
    c_rho->add_option("--a-tuple", rho_a_tuple, "generator tuple of A (default: all points)");
    c_rho->add_option("--b", rho_b, "structure file for B")->required();
    c_rho->add_option("--alpha", rho_alpha, "image labels of the first embedding")->required();
    c_rho->add_option("--beta", rho_beta, "image labels of the second embedding")->required();
    c_rho->callback([&]() {
        const StructPtr a_struct = load_structure_file(rho_a);
        const StructPtr b_struct = load_structure_file(rho_b);
        const PointedStructure a = pointed(a_struct, rho_a_tuple, "--a-tuple");
        const Embedding alpha = make_map(a, b_struct, rho_alpha, "--alpha");
        const Embedding beta = make_map(a, b_struct, rho_beta, "--beta");
        emit(out_path, to_string(rho(alpha, beta)) + "\n");
    });

    // amalgamate
    std::string am_a, am_a_tuple, am_b0, am_b1, am_phi0, am_phi1;
    CLI::App* c_am = app.add_subcommand("amalgamate", "free amalgam of B0 and B1 over A");
    c_am->add_option("--a", am_a, "structure file for A")->required();
    c_am->add_option("--a-tuple", am_a_tuple, "generator tuple of A (default: all points)");
    c_am->add_option("--b0", am_b0, "structure file for B0")->required();
    c_am->add_option("--b1", am_b1, "structure file for B1")->required();
    c_am->add_option("--phi0", am_phi0, "image labels of A in B0")->required();
    c_am->add_option("--phi1", am_phi1, "image labels of A in B1")->required();
    c_am->callback([&]() {
        const StructPtr a_struct = load_structure_file(am_a);
        const PointedStructure a = pointed(a_struct, am_a_tuple, "--a-tuple");
        const Embedding phi0 = make_map(a, load_structure_file(am_b0), am_phi0, "--phi0");
        const Embedding phi1 = make_map(a, load_structure_file(am_b1), am_phi1, "--phi1");
        try {
            const AmalgamResult r = free_amalgam(a, phi0, phi1);
            std::string report = serialize_structure(*r.amalgam);
            report += "# left-arm " + map_labels(r.left_arm) + "\n";
            report += "# right-arm " + map_labels(r.right_arm) + "\n";
            emit(out_path, report);
        } catch (const DomainError& e) {
            emit(out_path, std::string("no-amalgam ") + e.what() + "\n");
            exit_code = kExitNegative;
        }
    });

    // jep
    std::string jep_b0, jep_b1, jep_sep = "1";
    CLI::App* c_jep = app.add_subcommand("jep", "joint embedding of B0 and B1");
    c_jep->add_option("--b0", jep_b0, "structure file for B0")->required();
    c_jep->add_option("--b1", jep_b1, "structure file for B1")->required();
    c_jep->add_option("--min-separation", jep_sep, "cross-distance floor for constant-free inputs (p/q)");
    c_jep->callback([&]() {
        const StructPtr b0 = load_structure_file(jep_b0);
        const StructPtr b1 = load_structure_file(jep_b1);
        const Rational sep = parse_rational_arg(jep_sep, "--min-separation");
        try {
            const AmalgamResult r = jep(b0, b1, sep);
            std::string report = serialize_structure(*r.amalgam);
            report += "# left-arm " + map_labels(r.left_arm) + "\n";
            report += "# right-arm " + map_labels(r.right_arm) + "\n";
            emit(out_path, report);
        } catch (const DomainError& e) {
            emit(out_path, std::string("no-joint-embedding ") + e.what() + "\n");
            exit_code = kExitNegative;
        }
    });

    // dist
    std::string dist_x, dist_x_tuple, dist_y, dist_y_tuple;
    bool dist_witness = false;
    CLI::App* c_dist = app.add_subcommand("dist", "pseudometric d_n between pointed structures");
    c_dist->add_option("--x", dist_x, "structure file for the first pointed structure")->required();
    c_dist->add_option("--x-tuple", dist_x_tuple, "generator tuple (default: all points)");
    c_dist->add_option("--y", dist_y, "structure file for the second pointed structure")->required();
    c_dist->add_option("--y-tuple", dist_y_tuple, "generator tuple (default: all points)");
    c_dist->add_flag("--witness", dist_witness, "also print the optimal cross pseudometric");
    c_dist->callback([&]() {
        const StructPtr xs = load_structure_file(dist_x);
        const StructPtr ys = load_structure_file(dist_y);
        const PointedStructure x = pointed(xs, dist_x_tuple, "--x-tuple");
        const PointedStructure y = pointed(ys, dist_y_tuple, "--y-tuple");
        try {
            const DistResult r = dist_n_with_witness(x, y);
            std::ostringstream report;
            report << to_string(r.value) << "\n";
            if (dist_witness) {
                const int cols = y.structure->size();
                for (int i = 0; i < x.structure->size(); ++i) {
                    report << "cross";
                    for (int j = 0; j < cols; ++j) {
                        report << ' ' << to_string(r.cross[static_cast<std::size_t>(i * cols + j)]);
                    }
                    report << "\n";
                }
            }
            emit(out_path, report.str());
        } catch (const DomainError& e) {
            emit(out_path, std::string("no-joint-embedding ") + e.what() + "\n");
            exit_code = kExitNegative;
        }
    });

    // extend
    std::string ext_base, ext_label, ext_dists, ext_preds;
    CLI::App* c_ext = app.add_subcommand("extend", "one-point Katetov extension");
    c_ext->add_option("--base", ext_base, "structure file to extend")->required();
    c_ext->add_option("--label", ext_label, "label of the new point")->required();
    c_ext->add_option("--distances", ext_dists, "comma-separated distances to every base point")->required();
    c_ext->add_option("--preds", ext_preds, "comma-separated unary predicate values for the new point");
    c_ext->callback([&]() {
        ExtensionRequest req;
        req.base = load_structure_file(ext_base);
        req.new_point_label = ext_label;
        for (const std::string& tok : split_list(ext_dists, ',')) {
            req.distances.push_back(parse_rational_arg(tok, "--distances"));
        }
        if (!ext_preds.empty()) {
            for (const std::string& tok : split_list(ext_preds, ',')) {
                req.predicate_values.push_back(parse_rational_arg(tok, "--preds"));
            }
        }
        try {
            const StructPtr out = extend_one_point(req);
            emit(out_path, serialize_structure(*out));
        } catch (const DomainError& e) {
            emit(out_path, std::string("no-extension ") + e.what() + "\n");
            exit_code = kExitNegative;
        }
    });

    // power
    std::string pow_base;
    int pow_n = 0;
    long long pow_cap = 1024;
    CLI::App* c_pow = app.add_subcommand("power", "normalized l1 power of a structure");
    c_pow->add_option("--base", pow_base, "structure file for the base")->required();
    c_pow->add_option("--n", pow_n, "exponent")->required()->check(CLI::PositiveNumber);
    c_pow->add_option("--cap", pow_cap, "point-count cap");
    c_pow->callback([&]() {
        const PowerStructure p = l1_power(load_structure_file(pow_base), pow_n, pow_cap);
        emit(out_path, serialize_structure(*p.structure));
    });

    // ramsey-check
    RamseyArgs rc_args;
    CLI::App* c_rc = app.add_subcommand("ramsey-check", "decide an approximate-Ramsey instance");
    add_ramsey_flags(c_rc, rc_args, true);
    c_rc->callback([&]() {
        const RamseyInstance inst = build_instance(rc_args);
        const VerifierReport rep = worst_coloring(inst, ramsey_limits(rc_args));
        emit(out_path, to_text(rep));
        exit_code = verdict_exit(rep);
    });

    // worst-coloring
    RamseyArgs wc_args;
    CLI::App* c_wc = app.add_subcommand("worst-coloring", "adversarial worst coloring and its value");
    add_ramsey_flags(c_wc, wc_args, true);
    c_wc->callback([&]() {
        const RamseyInstance inst = build_instance(wc_args);
        const VerifierReport rep = worst_coloring(inst, ramsey_limits(wc_args));
        emit(out_path, to_text(rep));
        exit_code = verdict_exit(rep);
    });

    // best-beta
    RamseyArgs bb_args;
    std::string bb_gamma;
    CLI::App* c_bb = app.add_subcommand("best-beta", "best copy of B for an explicit coloring");
    add_ramsey_flags(c_bb, bb_args, false);
    c_bb->add_option("--gamma", bb_gamma, "coloring values over Emb(A, C), enumeration order")->required();
    c_bb->callback([&]() {
        const RamseyInstance inst = build_instance(bb_args);
        Coloring gamma;
        gamma.domain = std::make_shared<EmbeddingSet>(enumerate_embeddings(inst.a, inst.c));
        for (const std::string& tok : split_list(bb_gamma, ',')) {
            gamma.values.push_back(parse_rational_arg(tok, "--gamma"));
        }
        check_coloring(gamma);
        const std::pair<Embedding, Rational> r = best_beta(gamma, inst);
        std::ostringstream report;
        report << "beta " << map_labels(r.first) << "\n";
        report << "oscillation " << to_string(r.second) << "\n";
        emit(out_path, report.str());
    });

    // conc-n
    std::string cn_diam, cn_eps;
    int cn_k = 0;
    CLI::App* c_cn = app.add_subcommand("conc-n", "least power making the concentration tail drop below 1/k");
    c_cn->add_option("--diam", cn_diam, "delta diameter (p/q)")->required();
    c_cn->add_option("--eps", cn_eps, "epsilon (p/q)")->required();
    c_cn->add_option("--k", cn_k, "number of generators")->required()->check(CLI::PositiveNumber);
    c_cn->callback([&]() {
        const long long n = concentration_n(parse_rational_arg(cn_diam, "--diam"),
                                            parse_rational_arg(cn_eps, "--eps"), cn_k);
        emit(out_path, std::to_string(n) + "\n");
    });

    // levy-sim
    std::string ls_base, ls_eps, ls_format = "csv", ls_ns;
    std::vector<std::string> ls_gens;
    std::uint64_t ls_samples = 0, ls_seed = 0;
    bool ls_seed_set = false;
    CLI::App* c_ls = app.add_subcommand("levy-sim", "empirical concentration for the distance observable");
    c_ls->add_option("--base", ls_base, "carrier structure file")->required();
    c_ls->add_option("--gen", ls_gens, "generator image labels (repeatable)")->required();
    c_ls->add_option("--n", ls_ns, "comma-separated list of powers")->required();
    c_ls->add_option("--eps", ls_eps, "deviation threshold (p/q)")->required();
    c_ls->add_option("--samples", ls_samples, "samples per power")->required()->check(CLI::PositiveNumber);
    c_ls->add_option("--seed", ls_seed, "base seed; run i uses seed + i")->required()->capture_default_str();
    c_ls->add_option("--format", ls_format, "csv or text")->check(CLI::IsMember({"csv", "text"}));
    c_ls->callback([&]() {
        ls_seed_set = true;
        const StructPtr base = load_structure_file(ls_base);
        const GroupAction g = closure_from_args(base, ls_gens);
        const Rational eps = parse_rational_arg(ls_eps, "--eps");
        const Rational mean = distance_f_mean(g);
        std::vector<ConcentrationReport> reports;
        std::uint64_t offset = 0;
        for (const std::string& tok : split_list(ls_ns, ',')) {
            int n = 0;
            try {
                n = std::stoi(tok);
            } catch (const std::exception&) {
                throw DomainError("--n: expected integers, got '" + tok + "'");
            }
            if (n < 1) throw DomainError("--n: powers must be positive");
            const auto f = distance_to_point_f(g, std::vector<int>(static_cast<std::size_t>(n), 0));
            reports.push_back(empirical_concentration(g, n, f, mean, eps, ls_samples, ls_seed + offset));
            ++offset;
        }
        if (ls_format == "csv") {
            emit(out_path, to_csv(reports));
        } else {
            std::ostringstream text;
            text << "levy-sim v1\n";
            for (const ConcentrationReport& r : reports) {
                text << "group " << r.group_size << " n " << r.n << " epsilon " << to_string(r.epsilon) << " samples "
                     << r.samples << " mass " << to_string(r.empirical_mass) << " bound " << to_string(r.bound)
                     << " seed " << r.seed << "\n";
            }
            emit(out_path, text.str());
        }
        (void)ls_seed_set;
    });

    // witness
    std::string wit_base, wit_anchor, wit_eps, wit_gamma;
    std::vector<std::string> wit_gens;
    int wit_n = 0;
    long long wit_cap = 1024;
    std::uint64_t wit_seed = 0, wit_coloring_seed = 0, wit_budget = 0;
    bool wit_coloring_seed_set = false;
    CLI::App* c_wit = app.add_subcommand("witness", "randomized diagonal-embedding witness search");
    c_wit->add_option("--base", wit_base, "carrier structure file")->required();
    c_wit->add_option("--gen", wit_gens, "generator image labels (repeatable)")->required();
    c_wit->add_option("--anchor", wit_anchor, "labels generating the small structure A")->required();
    c_wit->add_option("--n", wit_n, "power exponent")->required()->check(CLI::PositiveNumber);
    c_wit->add_option("--eps", wit_eps, "epsilon (p/q); accepts oscillation <= 2 eps")->required();
    c_wit->add_option("--seed", wit_seed, "seed for the Haar samples")->required();
    c_wit->add_option("--budget", wit_budget, "sample budget (default 32)");
    c_wit->add_option("--cap", wit_cap, "power point-count cap");
    CLI::Option* wit_cso = c_wit->add_option("--coloring-seed", wit_coloring_seed, "seed for a random coloring");
    c_wit->add_option("--gamma", wit_gamma, "explicit coloring values over Emb(A, power)");
    c_wit->callback([&]() {
        wit_coloring_seed_set = wit_cso->count() > 0;
        if (wit_coloring_seed_set == !wit_gamma.empty()) {
            throw DomainError("witness: give exactly one of --coloring-seed and --gamma");
        }
        const StructPtr base = load_structure_file(wit_base);
        const GroupAction g = closure_from_args(base, wit_gens);
        const PowerStructure power = l1_power(base, wit_n, wit_cap);
        const std::vector<int> anchor = resolve_points(base, wit_anchor, "--anchor");
        const PointedStructure a = generated_substructure(base, anchor);
        Coloring gamma;
        gamma.domain = std::make_shared<EmbeddingSet>(enumerate_embeddings(a, power.structure));
        if (wit_coloring_seed_set) {
            gamma = random_coloring(gamma.domain, wit_coloring_seed);
        } else {
            for (const std::string& tok : split_list(wit_gamma, ',')) {
                gamma.values.push_back(parse_rational_arg(tok, "--gamma"));
            }
            check_coloring(gamma);
        }
        WitnessBudget budget;
        if (wit_budget > 0) budget.max_samples = wit_budget;
        const WitnessOutcome w =
            find_witness(gamma, anchor, power, g, parse_rational_arg(wit_eps, "--eps"), budget, wit_seed);
        emit(out_path, to_text(w));
        exit_code = w.found ? kExitHolds : kExitInconclusive;
    });

    // eppa
    std::string eppa_a;
    int eppa_max_points = 8, eppa_dist_cap = 32;
    std::uint64_t eppa_max_candidates = 200'000;
    CLI::App* c_eppa = app.add_subcommand("eppa", "search for an extension-property witness");
    c_eppa->add_option("--a", eppa_a, "structure file for A")->required();
    c_eppa->add_option("--max-points", eppa_max_points, "candidate size cap");
    c_eppa->add_option("--max-candidates", eppa_max_candidates, "candidate count cap");
    c_eppa->add_option("--distance-cap", eppa_dist_cap, "additive-closure value cap");
    c_eppa->callback([&]() {
        EppaCaps caps;
        caps.max_points = eppa_max_points;
        caps.max_candidates = eppa_max_candidates;
        caps.distance_set_cap = eppa_dist_cap;
        if (std::optional<long long> env = env_node_budget()) {
            if (c_eppa->count("--max-candidates") == 0) caps.max_candidates = static_cast<std::uint64_t>(*env);
        }
        const EppaOutcome r = eppa_search(load_structure_file(eppa_a), caps);
        std::string report = r.summary;
        if (r.found) {
            report += serialize_structure(*r.b);
            for (std::size_t i = 0; i < r.partials.size(); ++i) {
                report += "# extension";
                for (std::size_t t = 0; t < r.partials[i].domain.size(); ++t) {
                    report += ' ' + std::to_string(r.partials[i].domain[t]) + "->" +
                              std::to_string(r.partials[i].image[t]);
                }
                report += " via " + map_labels(r.extensions[i]) + "\n";
            }
        }
        emit(out_path, report);
        exit_code = r.found ? kExitHolds : kExitInconclusive;
    });

    // wep
    std::string wep_a, wep_a_tuple, wep_t, wep_inclusion, wep_eps;
    std::vector<std::string> wep_alphas;
    int wep_max_points = 8, wep_dist_cap = 32;
    std::uint64_t wep_max_candidates = 200'000;
    int wep_element_cap = 10'000, wep_table_cap = 1'000;
    CLI::App* c_wep = app.add_subcommand("wep", "weak extension witness search");
    c_wep->add_option("--a", wep_a, "structure file for A")->required();
    c_wep->add_option("--a-tuple", wep_a_tuple, "generator tuple of A (default: all points)");
    c_wep->add_option("--t", wep_t, "structure file for the common target T")->required();
    c_wep->add_option("--inclusion", wep_inclusion, "image labels of the designated copy of A in T")->required();
    c_wep->add_option("--alpha", wep_alphas, "image labels of a map to approximate (repeatable)")->required();
    c_wep->add_option("--eps", wep_eps, "approximation tolerance (p/q)")->required();
    c_wep->add_option("--max-points", wep_max_points, "candidate size cap");
    c_wep->add_option("--max-candidates", wep_max_candidates, "candidate count cap");
    c_wep->add_option("--distance-cap", wep_dist_cap, "additive-closure value cap");
    c_wep->add_option("--element-cap", wep_element_cap, "group closure element cap");
    c_wep->add_option("--table-cap", wep_table_cap, "group table size cap");
    c_wep->callback([&]() {
        const StructPtr a_struct = load_structure_file(wep_a);
        const StructPtr t_struct = load_structure_file(wep_t);
        const PointedStructure a = pointed(a_struct, wep_a_tuple, "--a-tuple");
        const Embedding inclusion = make_map(a, t_struct, wep_inclusion, "--inclusion");
        std::vector<Embedding> alphas;
        for (const std::string& alpha : wep_alphas) alphas.push_back(make_map(a, t_struct, alpha, "--alpha"));
        EppaCaps caps;
        caps.max_points = wep_max_points;
        caps.max_candidates = wep_max_candidates;
        caps.distance_set_cap = wep_dist_cap;
        if (std::optional<long long> env = env_node_budget()) {
            if (c_wep->count("--max-candidates") == 0) caps.max_candidates = static_cast<std::uint64_t>(*env);
        }
        ClosureCaps ccaps;
        ccaps.element_cap = wep_element_cap;
        ccaps.table_cap = wep_table_cap;
        const WepOutcome r =
            weak_extension_witness(a, inclusion, alphas, parse_rational_arg(wep_eps, "--eps"), caps, ccaps);
        std::string report = r.summary;
        if (r.found) {
            report += serialize_structure(*r.b_prime);
            for (const Embedding& g : r.gs) report += "# g " + map_labels(g) + "\n";
        }
        emit(out_path, report);
        exit_code = r.found ? kExitHolds : kExitInconclusive;
    });

    for (CLI::App* sub : app.get_subcommands({})) sub->add_option("--out", out_path, "write the report to a file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitUsage;
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitData;
    } catch (const ResourceLimitError& e) {
        std::cerr << "inconclusive: " << e.what() << " (explored " << e.explored() << ")\n";
        return kExitInconclusive;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    } catch (const std::logic_error& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
    return exit_code;
}

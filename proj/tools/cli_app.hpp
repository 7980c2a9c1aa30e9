#pragma once

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "hitorder/hitorder.hpp"

namespace hitorder::cli {

constexpr int kExitOk = 0;
constexpr int kExitFalsified = 1;
constexpr int kExitInconclusive = 2;
constexpr int kExitUsage = 64;
constexpr int kExitData = 65;

inline int exit_code(Verdict v) {
    switch (v) {
        case Verdict::StCertified: return kExitOk;
        case Verdict::Falsified: return kExitFalsified;
        default: return kExitInconclusive;
    }
}

struct RunConfig {
    std::string word, fast, slow, matrix;
    int alphabet = 0;
    unsigned n_max = 64;
    unsigned horizon = 200;
    unsigned m_max = 0;  // 0: up to k
    std::optional<std::size_t> target;
    std::uint64_t samples = 10000;
    std::uint64_t seed = 0;
    std::string format = "text";
    bool non_absorbing = false;
    bool asymptotic = false;
};

/// `--fast`/`--slow` accept a matrix JSON path or "word:ABAAB" (with --alphabet).
inline StochMatrix load_source(const std::string& spec, int alphabet) {
    constexpr std::string_view prefix = "word:";
    if (spec.rfind(prefix, 0) == 0) {
        if (alphabet < 1) throw ParseError("word sources need --alphabet");
        return word_chain(Word::parse(spec.substr(prefix.size()), alphabet));
    }
    return io::read_matrix_file(spec);
}

inline void print_json(std::ostream& out, const io::json& j) { out << j.dump(2) << '\n'; }

inline std::string frac_and_decimal(const Rational& r) { return r.str() + " (" + io::decimal6(r.to_double()) + ")"; }

inline int cmd_leading(const RunConfig& c, std::ostream& out) {
    Word w = Word::parse(c.word, c.alphabet);
    LeadingNumber e = leading_number(w);
    Rational mean = conway_mean(w);
    if (c.format == "json")
        print_json(out, {{"word", w.str()}, {"alphabet", c.alphabet}, {"leading", e.str()}, {"mean", io::rational_json(mean)}});
    else
        out << e.str() << " mean=" << mean.str() << '\n';
    return kExitOk;
}

inline int cmd_mean(const RunConfig& c, std::ostream& out) {
    Word w = Word::parse(c.word, c.alphabet);
    Rational conway = conway_mean(w);
    Rational chain = expected_hitting(word_chain(w), w.length());
    if (c.format == "json")
        print_json(out, {{"word", w.str()}, {"alphabet", c.alphabet}, {"conway", io::rational_json(conway)},
                         {"chain", io::rational_json(chain)}, {"agree", conway == chain}});
    else
        out << "mean=" << frac_and_decimal(conway) << " chain=" << frac_and_decimal(chain) << '\n';
    return conway == chain ? kExitOk : kExitData;
}

inline int cmd_chain(const RunConfig& c, std::ostream& out) {
    print_json(out, io::to_json(word_chain(Word::parse(c.word, c.alphabet), !c.non_absorbing)));
    return kExitOk;
}

inline void print_certificate_text(std::ostream& out, const OrderCertificate& cert) {
    out << "verdict=" << to_string(cert.verdict);
    if (cert.pair) out << " n1=" << cert.pair->n1 << " n2=" << cert.pair->n2 << " n_hat=" << *cert.n_hat;
    if (cert.identical) out << " identical";
    out << '\n';
    for (const auto& p : cert.prefix_checks)
        out << "  n=" << p.n << " fast=" << frac_and_decimal(p.fast) << " slow=" << frac_and_decimal(p.slow)
            << (p.holds() ? " ok" : " VIOLATED") << '\n';
    if (cert.falsified_at && cert.prefix_checks.empty())
        out << "  falsified at n=" << cert.falsified_at->n << " fast=" << frac_and_decimal(cert.falsified_at->fast)
            << " slow=" << frac_and_decimal(cert.falsified_at->slow) << '\n';
}

inline int cmd_compare_words(const RunConfig& c, std::ostream& out) {
    CompareOptions opt;
    opt.n_max = c.n_max;
    opt.horizon = c.horizon;
    WordComparison r = compare_words(Word::parse(c.fast, c.alphabet), Word::parse(c.slow, c.alphabet), opt);
    if (c.format == "json") {
        print_json(out, io::to_json(r));
    } else {
        out << r.fast.str() << " leading=" << r.eps_fast.str() << " mean=" << frac_and_decimal(r.mean_fast) << '\n';
        out << r.slow.str() << " leading=" << r.eps_slow.str() << " mean=" << frac_and_decimal(r.mean_slow) << '\n';
        out << "rowwise=" << (r.rowwise ? "yes" : "no") << " block_witness=";
        if (r.block_witness) {
            for (std::size_t i = 0; i < r.block_witness->m.size(); ++i) out << (i ? "," : "") << r.block_witness->m[i];
        } else {
            out << "none";
        }
        out << '\n';
        if (r.serve)
            out << "restart m=" << r.serve->m << " level=" << to_string(r.serve->level_route)
                << (r.serve->inconclusive() ? " (inconclusive)" : "") << " [" << r.serve_level_reason << "]\n";
        out << "direct: ";
        print_certificate_text(out, r.st);
        if (r.vicev) out << "spectral: " << to_string(*r.vicev) << '\n';
        if (r.falsified_at) out << "falsified at n=" << *r.falsified_at << '\n';
        if (r.substitution) out << "substitution: " << r.substitution->fast.str() << " / " << r.substitution->slow.str() << '\n';
        out << "verdict=" << to_string(r.verdict) << " via " << r.via << '\n';
    }
    return exit_code(r.verdict);
}

inline int cmd_compare_matrices(const RunConfig& c, std::ostream& out) {
    StochMatrix pf = load_source(c.fast, c.alphabet), ps = load_source(c.slow, c.alphabet);
    if (pf.size() != ps.size()) throw SizeMismatch("matrices of different size");
    const std::size_t k = pf.top();
    io::json rep;
    rep["size"] = pf.size();
    rep["rowwise"] = rowwise_dominates(pf, ps);
    rep["triangle"] = triangle_leq(ps, pf);
    const bool skip_free = is_skip_free(pf) && is_skip_free(ps);
    rep["skip_free"] = skip_free;
    std::optional<VedereWitness> w;
    std::optional<ServeCheck> serve;
    if (skip_free) {
        w = check_vedere(pf, ps, c.m_max ? c.m_max : static_cast<unsigned>(k));
        for (unsigned m = 1; m + 1 <= k; ++m) {
            if (!serve_upper_rows(pf, ps, m)) continue;
            serve = check_serve(pf, ps, m, c.n_max);
            if (serve->holds()) break;
        }
    }
    rep["block_witness"] = w ? io::to_json(*w) : io::json(nullptr);
    rep["serve"] = serve ? io::to_json(*serve) : io::json(nullptr);

    Verdict verdict = Verdict::Inconclusive;
    std::string via;
    const bool absorbing = is_absorbing(pf, k) && is_absorbing(ps, k);
    rep["absorbing"] = absorbing;
    if (absorbing) {
        OrderCertificate st = certify_st_order(pf, ps, c.n_max);
        OrderCertificate ast = certify_ast_order(pf, ps, c.n_max);
        auto fals = falsify_order(pf, ps, c.horizon);
        rep["st_certificate"] = io::to_json(st);
        rep["ast_certificate"] = io::to_json(ast);
        rep["falsified_at"] = fals ? io::json(*fals) : io::json(nullptr);
        try {
            rep["vicev"] = to_string(vicev_predict(ps, pf, k));
        } catch (const EigenFailure&) {
            rep["vicev"] = nullptr;
        }
        if (fals) {
            verdict = Verdict::Falsified;
            via = "exact cdf comparison";
        } else if (st.verdict == Verdict::StCertified) {
            verdict = Verdict::StCertified;
            via = "coprime powers with prefix check";
        } else if (ast.verdict == Verdict::AstCertified) {
            verdict = Verdict::AstCertified;
            via = "coprime powers";
        }
    }
    if (verdict != Verdict::StCertified && verdict != Verdict::Falsified) {
        if (skip_free && rep["rowwise"].get<bool>()) {
            verdict = Verdict::StCertified;
            via = "row-wise dominance";
        } else if (w) {
            verdict = Verdict::StCertified;
            via = "block-step coupling";
        } else if (serve && serve->holds()) {
            verdict = Verdict::StCertified;
            via = "restart level m=" + std::to_string(serve->m);
        }
    }
    rep["verdict"] = to_string(verdict);
    rep["via"] = via;
    if (c.format == "json")
        print_json(out, rep);
    else
        out << "verdict=" << to_string(verdict) << (via.empty() ? "" : " via " + via) << '\n';
    return exit_code(verdict);
}

inline int cmd_certify(const RunConfig& c, std::ostream& out) {
    StochMatrix pf = load_source(c.fast, c.alphabet), ps = load_source(c.slow, c.alphabet);
    OrderCertificate cert = c.asymptotic ? certify_ast_order(pf, ps, c.n_max) : certify_st_order(pf, ps, c.n_max);
    if (c.format == "json")
        print_json(out, io::to_json(cert));
    else
        print_certificate_text(out, cert);
    return exit_code(cert.verdict);
}

inline int cmd_spectral(const RunConfig& c, std::ostream& out) {
    StochMatrix m = load_source(c.matrix, c.alphabet);
    SpectralSummary s = spectral_summary(m, c.target.value_or(m.top()));
    if (c.format == "json") {
        print_json(out, io::to_json(s));
    } else {
        out.precision(17);
        out << "mu=" << s.mu << " gap=" << s.gap << " ergodic_taboo=" << (s.ergodic_taboo ? "yes" : "no") << '\n';
    }
    return kExitOk;
}

inline int cmd_hitting(const RunConfig& c, std::ostream& out) {
    StochMatrix m = load_source(c.matrix, c.alphabet);
    HittingDistribution d = hitting_cdf(m, c.target.value_or(m.top()), c.horizon);
    out << "n,cdf,cdf_exact\n";
    for (std::size_t n = 0; n < d.cdf.size(); ++n) out << n << ',' << io::decimal6(d.cdf[n].to_double()) << ',' << d.cdf[n].str() << '\n';
    return kExitOk;
}

inline int cmd_couple(const RunConfig& c, std::ostream& out, std::ostream& err) {
    StochMatrix pf = load_source(c.fast, c.alphabet), ps = load_source(c.slow, c.alphabet);
    auto w = check_vedere(pf, ps, c.m_max ? c.m_max : static_cast<unsigned>(pf.top()));
    if (!w) {
        err << "no block-step witness: the coupling is not available for this pair\n";
        return kExitInconclusive;
    }
    BatchResult b = run_batch(CouplingSampler(pf, ps, *w), c.samples, c.seed, false);
    io::json j = io::to_json(b);
    j["witness"] = w->m;
    j["seed"] = c.seed;
    if (c.format == "json") {
        print_json(out, j);
    } else {
        out << "n=" << b.n << " mean_diff=" << io::decimal6(b.mean_diff) << " ci=" << io::decimal6(b.ci_halfwidth)
            << " violations=" << b.violations.total() << '\n';
    }
    return b.violations.total() == 0 ? kExitOk : kExitFalsified;
}

/// Entry point shared by the executable and the tests.
inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Stochastic ordering of Markov chain hitting times"};
    app.require_subcommand(1);
    RunConfig c;
    if (const char* env = std::getenv("HITORDER_SEED")) {
        try {
            c.seed = std::stoull(env);
        } catch (const std::exception&) {
            err << "ignoring malformed HITORDER_SEED\n";
        }
    }
    auto positive = CLI::PositiveNumber;
    auto add_format = [&](CLI::App* s) { s->add_option("--format", c.format, "text or json")->check(CLI::IsMember({"text", "json"})); };
    auto add_word = [&](CLI::App* s) {
        s->add_option("--word", c.word, "word over A, B, C, ...")->required();
        s->add_option("--alphabet", c.alphabet, "alphabet size N")->required()->check(positive);
        add_format(s);
    };
    auto add_pair = [&](CLI::App* s, bool words_only) {
        s->add_option("--fast", c.fast, words_only ? "claimed faster word" : "matrix JSON path or word:XYZ")->required();
        s->add_option("--slow", c.slow, words_only ? "claimed slower word" : "matrix JSON path or word:XYZ")->required();
        auto* a = s->add_option("--alphabet", c.alphabet, "alphabet size N")->check(positive);
        if (words_only) a->required();
        s->add_option("--n-max", c.n_max, "largest power searched for coprime pairs")->check(positive);
        add_format(s);
    };
    auto add_matrix = [&](CLI::App* s) {
        s->add_option("--matrix", c.matrix, "matrix JSON path or word:XYZ")->required();
        s->add_option("--alphabet", c.alphabet, "alphabet size for word sources")->check(positive);
        s->add_option("--target", c.target, "absorbing target state (default: last)");
    };

    auto* leading = app.add_subcommand("leading", "leading number and Conway mean of a word");
    add_word(leading);
    auto* mean = app.add_subcommand("mean", "expected waiting time, closed form and chain solve");
    add_word(mean);
    auto* chain = app.add_subcommand("chain", "emit the occurrence chain of a word as matrix JSON");
    add_word(chain);
    chain->add_flag("--non-absorbing", c.non_absorbing, "keep the word-completed state transient");

    auto* cw = app.add_subcommand("compare-words", "full comparison of T_fast <=st T_slow for two words");
    add_pair(cw, true);
    cw->add_option("--horizon", c.horizon, "falsification horizon")->check(positive);

    auto* cm = app.add_subcommand("compare-matrices", "full comparison of T_fast <=st T_slow for two chains");
    add_pair(cm, false);
    cm->add_option("--horizon", c.horizon, "falsification horizon")->check(positive);
    cm->add_option("--m-max", c.m_max, "largest block length")->check(positive);

    auto* cert = app.add_subcommand("certify", "coprime-power certificate for T_fast <=st T_slow");
    add_pair(cert, false);
    cert->add_flag("--asymptotic", c.asymptotic, "certify the tail order only");

    auto* spec = app.add_subcommand("spectral", "eigenvalue moduli and spectral gap");
    add_matrix(spec);
    add_format(spec);

    auto* hit = app.add_subcommand("hitting", "exact hitting-time cdf as CSV");
    add_matrix(hit);
    hit->add_option("--horizon", c.horizon, "last n in the table")->check(positive);

    auto* couple = app.add_subcommand("couple", "simulate the block coupling and check its pathwise invariants");
    add_pair(couple, false);
    couple->add_option("--samples", c.samples, "number of coupled paths")->check(positive);
    couple->add_option("--seed", c.seed, "master seed (default: HITORDER_SEED or 0)");
    couple->add_option("--m-max", c.m_max, "largest block length")->check(positive);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << e.what() << '\n' << "run with --help for usage\n";
        return kExitUsage;
    }

    try {
        if (*leading) return cmd_leading(c, out);
        if (*mean) return cmd_mean(c, out);
        if (*chain) return cmd_chain(c, out);
        if (*cw) return cmd_compare_words(c, out);
        if (*cm) return cmd_compare_matrices(c, out);
        if (*cert) return cmd_certify(c, out);
        if (*spec) return cmd_spectral(c, out);
        if (*hit) return cmd_hitting(c, out);
        if (*couple) return cmd_couple(c, out, err);
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitData;
    }
    return kExitUsage;
}

}  // namespace hitorder::cli

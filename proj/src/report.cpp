#include "khw/report.hpp"

#include <atomic>
#include <chrono>
#include <fstream>
#include <future>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "khw/check.hpp"
#include "khw/enumeration.hpp"
#include "khw/homology.hpp"
#include "khw/tl.hpp"

namespace khw {

using nlohmann::json;

std::vector<std::string> known_checks() {
    return {"acyclic", "euler", "bound", "deflate", "homology", "jnf"};
}

namespace {

json state_json(const BraidWord& b, const EnhancedState& e, bool survivor,
                GradingConvention convention) {
    const Resolution r = resolve(e.state);
    const Gradings g = gradings(e, convention);
    json loops = json::array();
    for (const Loop& l : r.loops) loops.push_back({{"l", l.left()}, {"r", l.right()}});
    return json{{"n", b.strands},
                {"k", b.length() / (b.strands - 1)},
                {"bars", e.state.bars_string()},
                {"marks", e.marks_string()},
                {"h", g.h},
                {"q", g.q},
                {"tl_word", to_string(r.word)},
                {"loops", loops},
                {"survivor", survivor}};
}

json endpoint_json(const EnhancedState& e) {
    return json{{"bars", e.state.bars_string()}, {"marks", e.marks_string()}};
}

std::string polynomial_string(const LaurentPoly& p) {
    if (p.empty()) return "0";
    std::ostringstream out;
    bool first = true;
    for (const auto& [e, c] : p) {
        if (!first) out << (c > 0 ? " + " : " - ");
        else if (c < 0)
            out << "-";
        first = false;
        const BigInt a = boost::multiprecision::abs(c);
        if (a != 1 || e == 0) out << a.str();
        if (e != 0) {
            if (a != 1) out << "*";
            out << "q^" << e;
        }
    }
    return out.str();
}

JobReport run_job(int n, int k, const std::vector<std::string>& checks,
                  GradingConvention convention, const std::string& out_dir) {
    JobReport job;
    job.n = n;
    job.k = k;
    const auto t0 = std::chrono::steady_clock::now();
    const BraidWord b = make_torus_braid(n, k);
    job.states = 1LL << b.length();

    const std::vector<EnhancedState> all = enumerate_enhanced_states(b);
    job.enhanced = static_cast<long long>(all.size());

    auto record = [&](const std::string& name, bool pass, std::string detail) {
        job.checks.push_back(CheckOutcome{name, pass, std::move(detail)});
        if (!pass) job.pass = false;
    };
    auto wanted = [&](const std::string& name) {
        return std::find(checks.begin(), checks.end(), name) != checks.end();
    };

    WhittledComplex wc;
    try {
        wc = whittle(b);
    } catch (const std::logic_error& ex) {
        job.cycle = true;
        job.pass = false;
        if (wanted("acyclic")) record("acyclic", false, ex.what());
        for (const std::string& name : known_checks())
            if (name != "acyclic" && wanted(name))
                record(name, false, "not run: whittling failed");
        job.seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        return job;
    }
    job.isos = static_cast<long long>(wc.selection.isos.size());
    job.edges = static_cast<long long>(wc.edges.size());
    job.survivors = static_cast<long long>(wc.survivors.size());
    job.warnings = static_cast<long long>(wc.selection.warnings.size());

    std::map<int, long long> at_h;
    for (const EnhancedState& e : wc.survivors) ++at_h[gradings(e).h];

    if (wanted("acyclic")) {
        std::ostringstream detail;
        detail << "isomorphisms=" << job.isos << " edges=" << job.edges
               << " order_length=" << wc.elimination_order.size();
        record("acyclic", true, detail.str());
    }

    if (wanted("euler")) {
        const auto before = euler_state_sum_open(b);
        const auto after = euler_state_sum_open(wc.survivors);
        std::ostringstream detail;
        detail << "pairing_classes_before=" << before.size()
               << " after=" << after.size();
        record("euler", before == after, detail.str());
    }

    if (wanted("bound")) {
        bool ok = true;
        std::ostringstream detail;
        for (int h = 0; h <= b.length(); ++h) {
            const long long got = at_h.count(h) ? at_h.at(h) : 0;
            const BigInt printed = count_bound(n, k, h);
            const BigInt alt = count_bound_alt(n, k, h);
            if (BigInt(got) > printed) ok = false;
            if (h) detail << " ";
            detail << "h" << h << ":" << got << "<=" << printed.str() << "(alt "
                   << alt.str() << ",N " << formula_N(n, h).str() << ",jnf "
                   << enumerate_jnf(n, h).size() << ")";
        }
        record("bound", ok, detail.str());
    }

    const bool need_homology = wanted("homology") || wanted("deflate");
    HomologySummary hs;
    bool homology_built = false;
    std::string homology_error;
    if (need_homology) {
        try {
            hs = homology(close_and_build(b));
            homology_built = true;
        } catch (const std::logic_error& ex) {
            job.cycle = true;  // internal assertion class (d∘d etc.)
            homology_error = ex.what();
        }
    }

    if (wanted("deflate")) {
        if (!homology_built) {
            record("deflate", false, homology_error);
        } else {
            bool ok = true;
            std::ostringstream detail;
            std::map<int, long long> cap;
            for (const EnhancedState& e : wc.survivors)
                cap[gradings(e).h] += 1LL << closure_cycles(resolve(e.state).through);
            bool first = true;
            for (int h = 0; h <= b.length(); ++h) {
                const int rank = hs.free_rank.count(h) ? hs.free_rank.at(h) : 0;
                const long long lim = cap.count(h) ? cap.at(h) : 0;
                if (rank > lim) ok = false;
                if (rank == 0 && lim == 0) continue;
                if (!first) detail << " ";
                first = false;
                detail << "h" << h << ":" << rank << "<=" << lim;
            }
            record("deflate", ok, detail.str());
        }
    }

    if (wanted("homology")) {
        if (!homology_built) {
            record("homology", false, homology_error);
        } else {
            const LaurentPoly from_h = euler_from_homology(hs);
            const LaurentPoly from_sum = euler_state_sum_closed(b);
            std::ostringstream detail;
            detail << "euler=" << polynomial_string(from_h);
            bool torsion_any = false;
            for (const auto& [h, factors] : hs.torsion) {
                detail << " torsion_h" << h << "=";
                for (size_t j = 0; j < factors.size(); ++j)
                    detail << (j ? "," : "") << factors[j].str();
                torsion_any = true;
            }
            (void)torsion_any;
            record("homology", from_h == from_sum, detail.str());
        }
    }

    if (wanted("jnf")) {
        long long form1 = 0, form2 = 0, none = 0;
        for (const EnhancedState& e : wc.survivors) {
            const auto f = classify_survivor(resolve(e.state).word);
            if (!f)
                ++none;
            else if (f->variant == FormVariant::form1)
                ++form1;
            else
                ++form2;
        }
        std::ostringstream detail;
        detail << "form1=" << form1 << " form2=" << form2 << " unclassified=" << none;
        record("jnf", none == 0, detail.str());
    }

    if (!out_dir.empty()) export_jsonl(b, wc, out_dir, convention);

    job.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return job;
}

}  // namespace

VerificationReport run_verify(const RunConfig& cfg) {
    for (const auto& [n, k] : cfg.jobs)
        if (n < 2 || k < 1) throw std::invalid_argument("run_verify: need n >= 2, k >= 1");
    std::vector<std::string> checks = cfg.checks.empty() ? known_checks() : cfg.checks;
    for (const std::string& c : checks) {
        const auto known = known_checks();
        if (std::find(known.begin(), known.end(), c) == known.end())
            throw std::invalid_argument("run_verify: unknown check: " + c);
    }

    VerificationReport rep;
    rep.config = cfg;
    rep.config.checks = checks;
    rep.jobs.resize(cfg.jobs.size());

    const int workers = std::max(1, cfg.workers);
    if (workers == 1 || cfg.jobs.size() <= 1) {
        for (size_t j = 0; j < cfg.jobs.size(); ++j)
            rep.jobs[j] = run_job(cfg.jobs[j].first, cfg.jobs[j].second, checks,
                                  cfg.convention, cfg.out_dir);
    } else {
        std::atomic<size_t> next{0};
        auto worker = [&]() {
            for (;;) {
                const size_t j = next.fetch_add(1);
                if (j >= cfg.jobs.size()) return;
                rep.jobs[j] = run_job(cfg.jobs[j].first, cfg.jobs[j].second, checks,
                                      cfg.convention, cfg.out_dir);
            }
        };
        std::vector<std::future<void>> pool;
        for (int w = 0; w < workers; ++w) pool.push_back(std::async(std::launch::async, worker));
        for (auto& f : pool) f.get();
    }

    for (const JobReport& j : rep.jobs) {
        rep.pass = rep.pass && j.pass;
        rep.cycle = rep.cycle || j.cycle;
    }
    return rep;
}

std::string report_json(const VerificationReport& rep) {
    json jobs = json::array();
    for (const JobReport& j : rep.jobs) {
        json checks = json::array();
        for (const CheckOutcome& c : j.checks)
            checks.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
        jobs.push_back({{"n", j.n},
                        {"k", j.k},
                        {"counters",
                         {{"states", j.states},
                          {"enhanced", j.enhanced},
                          {"isomorphisms", j.isos},
                          {"edges", j.edges},
                          {"survivors", j.survivors},
                          {"warnings", j.warnings}}},
                        {"checks", checks},
                        {"pass", j.pass},
                        {"cycle", j.cycle},
                        {"timing", {{"seconds", j.seconds}}}});
    }
    json cfgjobs = json::array();
    for (const auto& [n, k] : rep.config.jobs) cfgjobs.push_back({n, k});
    const json doc{{"config",
                    {{"jobs", cfgjobs},
                     {"checks", rep.config.checks},
                     {"convention",
                      rep.config.convention == GradingConvention::printed ? "printed"
                                                                          : "module_shift"},
                     {"workers", rep.config.workers}}},
                   {"jobs", jobs},
                   {"pass", rep.pass},
                   {"cycle", rep.cycle}};
    return doc.dump(2) + "\n";
}

std::string state_record(const BraidWord& b, const EnhancedState& e, bool survivor,
                         GradingConvention convention) {
    return state_json(b, e, survivor, convention).dump();
}

std::vector<std::string> export_jsonl(const BraidWord& b, const WhittledComplex& wc,
                                      const std::string& dir, GradingConvention convention) {
    const int n = b.strands;
    const int k = b.length() / (n - 1);
    std::set<std::pair<uint64_t, std::vector<int8_t>>> alive;
    for (const EnhancedState& e : wc.survivors) alive.emplace(e.state.bars, e.marks);

    std::ostringstream stem;
    stem << dir << "/"
         << "n" << n << "_k" << k;
    const std::string states_path = stem.str() + "_states.jsonl";
    const std::string survivors_path = stem.str() + "_survivors.jsonl";
    const std::string isos_path = stem.str() + "_isos.jsonl";
    const std::string edges_path = stem.str() + "_edges.jsonl";

    std::ofstream states(states_path), survivors(survivors_path), isos(isos_path),
        edges(edges_path);
    if (!states || !survivors || !isos || !edges)
        throw std::invalid_argument("export_jsonl: cannot write to " + dir);

    for (const EnhancedState& e : enumerate_enhanced_states(b)) {
        const bool s = alive.count({e.state.bars, e.marks}) > 0;
        const std::string line = state_record(b, e, s, convention);
        states << line << "\n";
        if (s) survivors << line << "\n";
    }
    for (const GEIsomorphism& iso : wc.selection.isos) {
        isos << json{{"n", n},
                     {"k", k},
                     {"kind", ge_kind_label(iso.kind)},
                     {"source", endpoint_json(iso.source)},
                     {"target", endpoint_json(iso.target)},
                     {"init", iso.init},
                     {"fin", iso.fin},
                     {"active", iso.active}}
                    .dump()
             << "\n";
    }
    for (const GraphEdge& e : wc.edges)
        edges << json{{"from", e.from}, {"to", e.to}, {"crossing", e.crossing}}.dump() << "\n";

    return {states_path, survivors_path, isos_path, edges_path};
}

}  // namespace khw

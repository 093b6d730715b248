#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "khw/braidword.hpp"
#include "khw/check.hpp"
#include "khw/enumeration.hpp"
#include "khw/homology.hpp"
#include "khw/report.hpp"
#include "khw/states.hpp"
#include "khw/tl.hpp"
#include "khw/whittler.hpp"

namespace {

using nlohmann::json;

// "3", "2..5", or comma-joined mixtures of both.
std::vector<int> parse_range(const std::string& text) {
    std::vector<int> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) throw std::invalid_argument("empty range item in '" + text + "'");
        const auto dots = item.find("..");
        if (dots == std::string::npos) {
            out.push_back(std::stoi(item));
        } else {
            const int a = std::stoi(item.substr(0, dots));
            const int b = std::stoi(item.substr(dots + 2));
            if (b < a) throw std::invalid_argument("descending range '" + item + "'");
            for (int v = a; v <= b; ++v) out.push_back(v);
        }
    }
    if (out.empty()) throw std::invalid_argument("empty range '" + text + "'");
    return out;
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

khw::TLWord parse_word(const std::string& text, int n) {
    khw::TLWord w{n, {}};
    std::stringstream ss(text);
    int g;
    while (ss >> g) w.gens.push_back(g);
    if (!ss.eof()) throw std::invalid_argument("word must be space-separated generator indices");
    return w;
}

int env_workers() {
    const char* raw = std::getenv("WHITTLE_WORKERS");
    if (!raw) return 1;
    const int w = std::atoi(raw);
    return w >= 1 ? w : 1;
}

std::string pairing_string(const std::vector<int>& pairing) {
    std::ostringstream out;
    for (size_t p = 0; p < pairing.size(); ++p)
        if (static_cast<int>(p) < pairing[p]) out << "(" << p << "-" << pairing[p] << ")";
    return out.str();
}

std::string poly_string(const khw::LaurentPoly& poly) {
    if (poly.empty()) return "0";
    std::ostringstream out;
    bool first = true;
    for (const auto& [e, c] : poly) {
        if (!first) out << (c > 0 ? " + " : " - ");
        else if (c < 0)
            out << "-";
        first = false;
        const khw::BigInt a = boost::multiprecision::abs(c);
        if (a != 1 || e == 0) out << a.str();
        if (e != 0) {
            if (a != 1) out << "*";
            out << "q^" << e;
        }
    }
    return out.str();
}

void cmd_whittle(const std::string& ns, const std::string& ks, const std::string& out_dir) {
    for (const int n : parse_range(ns)) {
        for (const int k : parse_range(ks)) {
            const khw::BraidWord b = khw::make_torus_braid(n, k);
            const khw::WhittledComplex wc = khw::whittle(b);
            for (const std::string& w : wc.selection.warnings)
                std::cerr << "warning: n=" << n << " k=" << k << ": " << w << "\n";
            std::map<int, std::pair<long long, long long>> by_h;  // h -> (enhanced, survivors)
            for (const khw::EnhancedState& e : khw::enumerate_enhanced_states(b))
                ++by_h[khw::gradings(e).h].first;
            for (const khw::EnhancedState& e : wc.survivors) ++by_h[khw::gradings(e).h].second;
            std::cout << "n=" << n << " k=" << k << " crossings=" << b.length()
                      << " isomorphisms=" << wc.selection.isos.size()
                      << " edges=" << wc.edges.size() << " survivors=" << wc.survivors.size()
                      << "\n";
            std::cout << "h\tenhanced\tsurvivors\n";
            for (const auto& [h, counts] : by_h)
                std::cout << h << "\t" << counts.first << "\t" << counts.second << "\n";
            if (!out_dir.empty())
                for (const std::string& path : khw::export_jsonl(b, wc, out_dir))
                    std::cout << "wrote " << path << "\n";
        }
    }
}

int cmd_verify(const std::string& ns, const std::string& ks, const std::string& checks,
               const std::string& convention, const std::string& out_dir,
               const std::string& report_path) {
    khw::RunConfig cfg;
    for (const int n : parse_range(ns))
        for (const int k : parse_range(ks)) cfg.jobs.emplace_back(n, k);
    cfg.checks = split_list(checks);
    cfg.out_dir = out_dir;
    cfg.workers = env_workers();
    if (convention == "printed")
        cfg.convention = khw::GradingConvention::printed;
    else if (convention == "module_shift")
        cfg.convention = khw::GradingConvention::module_shift;
    else
        throw std::invalid_argument("convention must be printed or module_shift");

    const khw::VerificationReport rep = khw::run_verify(cfg);
    const std::string doc = khw::report_json(rep);
    if (report_path.empty()) {
        std::cout << doc;
    } else {
        std::ofstream out(report_path);
        if (!out) throw std::invalid_argument("cannot write report to " + report_path);
        out << doc;
        std::cout << "wrote " << report_path << "\n";
    }
    if (rep.cycle) return 4;
    return rep.pass ? 0 : 3;
}

void cmd_count(int n, int k, int h) {
    khw::BigInt partial = 0;
    for (int m = 0; m <= h; ++m) partial += khw::ordered_partitions(h, m);
    const khw::BigInt nterm = khw::formula_N(n, h);
    const khw::BigInt pn2 = khw::ordered_partitions(n, 2);
    const khw::BigInt pk2 = khw::ordered_partitions(k, 2);
    const khw::BigInt cat = khw::catalan(n);
    std::cout << "sum_partitions\t" << partial.str() << "\n";
    std::cout << "N(n,h)\t" << nterm.str() << "\n";
    std::cout << "p(n,2)\t" << pn2.str() << "\n";
    std::cout << "p(k,2)\t" << pk2.str() << "\n";
    std::cout << "catalan(n)\t" << cat.str() << "\n";
    std::cout << "total\t" << khw::count_bound(n, k, h).str() << "\n";
    std::cout << "total_alt\t" << khw::count_bound_alt(n, k, h).str() << "\n";
}

void cmd_classify(const std::string& in_path, int n_override) {
    std::ifstream in(in_path);
    if (!in) throw std::invalid_argument("cannot read " + in_path);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        json rec = json::parse(line);
        const int n = n_override > 0 ? n_override : rec.at("n").get<int>();
        const khw::TLWord w = parse_word(rec.at("tl_word").get<std::string>(), n);
        const auto form = khw::classify_survivor(w);
        if (!form) {
            rec["form"] = "none";
        } else if (form->variant == khw::FormVariant::form1) {
            rec["form"] = "Form1";
            rec["exponents"] = form->exponents;
            json tails = json::array();
            for (const khw::TLWord& v : form->tails) tails.push_back(khw::to_string(v));
            rec["tails"] = tails;
        } else {
            rec["form"] = "Form2";
            rec["path_len"] = form->path.moves.size();
            rec["jnf"] = khw::to_string(form->path.back());
        }
        std::cout << rec.dump() << "\n";
    }
}

void cmd_homology(int n, int k, bool open_euler, bool as_json) {
    const khw::BraidWord b = khw::make_torus_braid(n, k);
    const khw::IntComplex cx = khw::close_and_build(b);
    const khw::HomologySummary hs = khw::homology(cx);

    if (as_json) {
        json ranks = json::array();
        for (const auto& [hq, d] : hs.q_dim) {
            json row{{"h", hq.first}, {"q", hq.second}, {"rank", d}};
            ranks.push_back(row);
        }
        json torsion = json::array();
        for (const auto& [hq, factors] : hs.q_torsion) {
            json fs = json::array();
            for (const khw::BigInt& f : factors) fs.push_back(f.str());
            torsion.push_back({{"h", hq.first}, {"q", hq.second}, {"factors", fs}});
        }
        json doc{{"n", n},
                 {"k", k},
                 {"ranks", ranks},
                 {"torsion", torsion},
                 {"euler", poly_string(khw::euler_from_homology(hs))}};
        std::cout << doc.dump(2) << "\n";
    } else {
        std::cout << "h\tq\trank\ttorsion\n";
        std::set<std::pair<int, int>> keys;
        for (const auto& [hq, d] : hs.q_dim) keys.insert(hq);
        for (const auto& [hq, f] : hs.q_torsion) keys.insert(hq);
        for (const auto& [h, q] : keys) {
            const auto itd = hs.q_dim.find({h, q});
            std::cout << h << "\t" << q << "\t" << (itd == hs.q_dim.end() ? 0 : itd->second)
                      << "\t";
            const auto itt = hs.q_torsion.find({h, q});
            if (itt == hs.q_torsion.end()) {
                std::cout << "-";
            } else {
                for (size_t j = 0; j < itt->second.size(); ++j)
                    std::cout << (j ? "," : "") << itt->second[j].str();
            }
            std::cout << "\n";
        }
        std::cout << "euler\t" << poly_string(khw::euler_from_homology(hs)) << "\n";
    }

    if (open_euler) {
        std::cout << "pairing\teuler\n";
        for (const auto& [pairing, poly] : khw::euler_state_sum_open(b))
            std::cout << pairing_string(pairing) << "\t" << poly_string(poly) << "\n";
    }
}

int cmd_tl_reduce(const std::string& word_text, int n, bool d_moves) {
    const khw::TLWord w = parse_word(word_text, n);
    if (d_moves) {
        const auto path = khw::d_move_reduce(w);
        if (!path) {
            std::cout << "none\n";
            return 0;
        }
        for (size_t j = 0; j < path->words.size(); ++j) {
            std::cout << "[" << khw::to_string(path->words[j]) << "]";
            if (j < path->moves.size()) std::cout << "  " << khw::move_label(path->moves[j].kind);
            std::cout << "\n";
        }
        return 0;
    }
    const khw::TLPath path = khw::reduce_to_jnf(w);
    for (size_t j = 0; j < path.words.size(); ++j) {
        std::cout << "[" << khw::to_string(path.words[j]) << "]";
        if (j < path.moves.size()) std::cout << "  " << khw::move_label(path.moves[j].kind);
        std::cout << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Whittles Khovanov chain complexes of positive torus braids and "
                 "verifies the result against independent oracles"};
    app.require_subcommand(1);
    int exit_code = 0;

    // whittle
    auto* whittle = app.add_subcommand("whittle", "Select isomorphisms and list survivors");
    std::string w_n, w_k = "1", w_out;
    whittle->add_option("--n", w_n, "strand count (single, A..B, or comma list)")->required();
    whittle->add_option("--k", w_k, "twist power (single, A..B, or comma list)")->required();
    whittle->add_option("--out", w_out, "directory for JSONL exports");
    whittle->callback([&] { cmd_whittle(w_n, w_k, w_out); });

    // verify
    auto* verify = app.add_subcommand("verify", "Run the oracle check suite");
    std::string v_n, v_k, v_checks, v_convention = "printed", v_out, v_report;
    verify->add_option("--n", v_n, "strand counts")->required();
    verify->add_option("--k", v_k, "twist powers")->required();
    verify->add_option("--checks", v_checks, "comma list: acyclic,euler,bound,deflate,homology,jnf");
    verify->add_option("--convention", v_convention, "printed or module_shift");
    verify->add_option("--out", v_out, "directory for JSONL exports");
    verify->add_option("--report", v_report, "write the JSON report here instead of stdout");
    verify->callback(
        [&] { exit_code = cmd_verify(v_n, v_k, v_checks, v_convention, v_out, v_report); });

    // count
    auto* count = app.add_subcommand("count", "Print the survivor-bound terms");
    count->set_help_flag("--help", "print help");  // frees -h/--h for the degree option
    int c_n = 0, c_k = 0, c_h = 0;
    count->add_option("--n", c_n, "strand count")->required();
    count->add_option("--k", c_k, "twist power")->required();
    count->add_option("--h", c_h, "homological degree")->required();
    count->callback([&] { cmd_count(c_n, c_k, c_h); });

    // classify
    auto* classify = app.add_subcommand("classify", "Annotate survivor records with their form");
    std::string cl_in;
    int cl_n = 0;
    classify->add_option("--in", cl_in, "survivors JSONL file")->required();
    classify->add_option("--n", cl_n, "override the strand count");
    classify->callback([&] { cmd_classify(cl_in, cl_n); });

    // homology
    auto* hom = app.add_subcommand("homology", "Integer homology of the braid closure");
    int h_n = 0, h_k = 0;
    bool h_open = false, h_json = false;
    hom->add_option("--n", h_n, "strand count")->required();
    hom->add_option("--k", h_k, "twist power")->required();
    hom->add_flag("--open-euler", h_open, "also print per-pairing open state sums");
    hom->add_flag("--json", h_json, "JSON output instead of TSV");
    hom->callback([&] { cmd_homology(h_n, h_k, h_open, h_json); });

    // tl
    auto* tl = app.add_subcommand("tl", "Temperley-Lieb word tools");
    tl->require_subcommand(1);
    auto* reduce = tl->add_subcommand("reduce", "Reduce a word to Jones normal form");
    std::string t_word;
    int t_n = 0;
    bool t_dmoves = false;
    reduce->add_option("word", t_word, "space-separated generator indices")->required();
    reduce->add_option("--n", t_n, "strand count")->required();
    reduce->add_flag("--d-moves", t_dmoves, "restricted-move search instead of the full reducer");
    reduce->callback([&] { exit_code = cmd_tl_reduce(t_word, t_n, t_dmoves); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    } catch (const khw::check_failure& e) {
        std::cerr << "check failed: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return 2;
    } catch (const std::logic_error& e) {
        std::cerr << "internal assertion: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return exit_code;
}

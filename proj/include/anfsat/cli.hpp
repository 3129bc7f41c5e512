#pragma once

#include <glob.h>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "anf.hpp"
#include "cnf_xor.hpp"
#include "mvc.hpp"
#include "solver.hpp"
#include "types.hpp"
#include "weil.hpp"

namespace anfsat {
namespace cli {

inline constexpr int kExitSat = 10;
inline constexpr int kExitUnsat = 20;
inline constexpr int kExitError = 1;

namespace detail {

inline void parse_args(CLI::App& app, const std::vector<std::string>& args) {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(std::move(rev));
}

inline AnfFile load_anf(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return parse_anf(in);
}

inline std::vector<std::string> expand_glob(const std::string& pattern) {
    ::glob_t g{};
    int rc = ::glob(pattern.c_str(), 0, nullptr, &g);
    std::vector<std::string> files;
    if (rc == 0)
        for (std::size_t i = 0; i < g.gl_pathc; ++i) files.emplace_back(g.gl_pathv[i]);
    ::globfree(&g);
    if (rc != 0 && rc != GLOB_NOMATCH) throw std::runtime_error("glob failed on " + pattern);
    return files;
}

inline std::string model_bits(const std::vector<bool>& m) {
    std::string s;
    s.reserve(m.size());
    for (bool b : m) s.push_back(b ? '1' : '0');
    return s;
}

struct NamedConfig {
    std::string name;
    XgMode xg;
    bool mvc_order;
};

inline NamedConfig config_by_name(const std::string& name) {
    static const std::map<std::string, NamedConfig> table = {
        {"off", {"off", XgMode::Off, false}},
        {"off+mvc", {"off+mvc", XgMode::Off, true}},
        {"xg", {"xg", XgMode::Xg, false}},
        {"xg+mvc", {"xg+mvc", XgMode::Xg, true}},
        {"xg-ext", {"xg-ext", XgMode::XgExt, false}},
        {"xg-ext+mvc", {"xg-ext+mvc", XgMode::XgExt, true}},
    };
    auto it = table.find(name);
    if (it == table.end()) throw std::runtime_error("unknown config '" + name + "'");
    return it->second;
}

} // namespace detail

inline int cmd_gen(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    (void)out;
    try {
        CLI::App app{"generate a benchmark instance"};
        InstanceSpec spec;
        std::string mode = "random", out_path;
        app.add_option("--n", spec.n, "field extension degree")->required();
        app.add_option("--m", spec.m, "points to decompose")->required();
        app.add_option("--l", spec.l, "Boolean unknowns per point")->required();
        app.add_option("--seed", spec.seed, "RNG seed")->required();
        app.add_option("--mode", mode, "planted|random")->check(CLI::IsMember({"planted", "random"}));
        app.add_option("--out", out_path, "output ANF file")->required();
        detail::parse_args(app, args);
        spec.mode = mode == "planted" ? GenMode::Planted : GenMode::Random;
        GeneratedInstance inst = generate_instance(spec);
        std::ofstream of(out_path);
        if (!of) throw std::runtime_error("cannot write " + out_path);
        write_anf(of, inst.system, inst.comments);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "gen: " << e.what() << "\n";
        return kExitError;
    } catch (const std::exception& e) {
        err << "gen: error: " << e.what() << "\n";
        return kExitError;
    }
}

inline int cmd_convert(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    (void)out;
    try {
        CLI::App app{"convert ANF to DIMACS"};
        std::string in_path, to, out_path;
        app.add_option("--in", in_path, "input ANF file")->required();
        app.add_option("--to", to, "cnf|cnfxor")->required()->check(CLI::IsMember({"cnf", "cnfxor"}));
        app.add_option("--out", out_path, "output file")->required();
        detail::parse_args(app, args);
        AnfFile file = detail::load_anf(in_path);
        CnfXorFormula f = to_cnf_xor(file.system);
        std::ofstream of(out_path);
        if (!of) throw std::runtime_error("cannot write " + out_path);
        write_dimacs(of, f, to == "cnf" ? DimacsMode::Cnf : DimacsMode::CnfXor);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "convert: " << e.what() << "\n";
        return kExitError;
    } catch (const std::exception& e) {
        err << "convert: error: " << e.what() << "\n";
        return kExitError;
    }
}

inline int cmd_mvc(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    try {
        CLI::App app{"vertex-cover branching preprocessor"};
        std::string in_path, order_out;
        app.add_option("--in", in_path, "input ANF file")->required();
        app.add_option("--order-out", order_out, "write the branching order here");
        detail::parse_args(app, args);
        AnfFile file = detail::load_anf(in_path);
        InteractionGraph g = interaction_graph(file.system);
        std::vector<Var> cover = minimum_vertex_cover(g);
        out << "k_prime=" << cover.size() << " bound=2^" << cover.size() << "\n";
        if (!order_out.empty()) {
            std::ofstream of(order_out);
            if (!of) throw std::runtime_error("cannot write " + order_out);
            write_order_file(of, cover, file.system.num_vars);
        }
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "mvc: " << e.what() << "\n";
        return kExitError;
    } catch (const std::exception& e) {
        err << "mvc: error: " << e.what() << "\n";
        return kExitError;
    }
}

inline int cmd_solve(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    try {
        CLI::App app{"solve an ANF system"};
        std::string in_path, xg = "off", order = "default";
        bool all = false, verify = false;
        app.add_option("--in", in_path, "input ANF file")->required();
        app.add_option("--xg", xg, "off|xg|xg-ext")->check(CLI::IsMember({"off", "xg", "xg-ext"}));
        app.add_option("--order", order, "default|mvc|<order file>");
        app.add_flag("--all", all, "enumerate every model");
        app.add_flag("--verify", verify, "re-check models against the input system");
        detail::parse_args(app, args);

        AnfFile file = detail::load_anf(in_path);
        const AnfSystem& sys = file.system;
        SolverConfig cfg;
        cfg.xg_mode = xg == "off" ? XgMode::Off : xg == "xg" ? XgMode::Xg : XgMode::XgExt;
        cfg.find_all = all;
        std::string order_name;
        if (order == "default") {
            cfg.branching_order = default_order(sys);
            order_name = "default";
        } else if (order == "mvc") {
            InteractionGraph g = interaction_graph(sys);
            cfg.branching_order = order_from_cover(minimum_vertex_cover(g), sys.num_vars);
            order_name = "mvc";
        } else {
            std::ifstream ord(order);
            if (!ord) throw std::runtime_error("cannot open order file " + order);
            OrderFile of = parse_order_file(ord);
            if (of.order.size() != sys.num_vars)
                throw std::runtime_error("order file variable count does not match the system");
            cfg.branching_order = of.order;
            order_name = "file";
        }

        SolveResult r = solve_system(sys, cfg);
        if (verify)
            for (const auto& m : r.models)
                if (!satisfies(sys, m)) throw std::logic_error("model failed verification");

        out << "status=" << (r.status == Status::Sat ? "SAT" : "UNSAT") << "\n"
            << "conflicts=" << r.conflicts << "\n"
            << "nodes=" << r.nodes << "\n"
            << "propagations=" << r.propagations << "\n"
            << "time_s=" << r.time_s << "\n"
            << "xg=" << to_string(cfg.xg_mode) << "\n"
            << "order=" << order_name << "\n";
        for (const auto& m : r.models) out << "v " << detail::model_bits(m) << "\n";
        return r.status == Status::Sat ? kExitSat : kExitUnsat;
    } catch (const CLI::ParseError& e) {
        err << "solve: " << e.what() << "\n";
        return kExitError;
    } catch (const std::exception& e) {
        err << "solve: error: " << e.what() << "\n";
        return kExitError;
    }
}

inline int cmd_bench(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    try {
        CLI::App app{"benchmark a set of instances"};
        std::string pattern;
        std::vector<std::string> config_names;
        app.add_option("--glob", pattern, "instance file pattern")->required();
        app.add_option("--config", config_names, "configurations to run");
        detail::parse_args(app, args);
        if (config_names.empty()) config_names = {"xg", "xg+mvc", "xg-ext", "xg-ext+mvc"};

        std::vector<std::string> files = detail::expand_glob(pattern);
        out << std::left << std::setw(14) << "config" << std::right << std::setw(8) << "n_sat"
            << std::setw(14) << "time_s_sat" << std::setw(16) << "conflicts_sat" << std::setw(8)
            << "n_unsat" << std::setw(14) << "time_s_unsat" << std::setw(16) << "conflicts_unsat"
            << "\n";
        for (const std::string& name : config_names) {
            detail::NamedConfig nc = detail::config_by_name(name);
            std::vector<double> time_sat, time_unsat, conf_sat, conf_unsat;
            for (const std::string& path : files) {
                AnfFile file = detail::load_anf(path);
                SolverConfig cfg;
                cfg.xg_mode = nc.xg;
                if (nc.mvc_order) {
                    InteractionGraph g = interaction_graph(file.system);
                    cfg.branching_order =
                        order_from_cover(minimum_vertex_cover(g), file.system.num_vars);
                } else {
                    cfg.branching_order = default_order(file.system);
                }
                SolveResult r = solve_system(file.system, cfg);
                if (r.status == Status::Sat) {
                    time_sat.push_back(r.time_s);
                    conf_sat.push_back(static_cast<double>(r.conflicts));
                } else {
                    time_unsat.push_back(r.time_s);
                    conf_unsat.push_back(static_cast<double>(r.conflicts));
                }
            }
            auto mean = [](const std::vector<double>& v) {
                if (v.empty()) return 0.0;
                double s = 0;
                for (double x : v) s += x;
                return s / static_cast<double>(v.size());
            };
            auto variance = [&](const std::vector<double>& v) {
                if (v.size() < 2) return 0.0;
                double m = mean(v), s = 0;
                for (double x : v) s += (x - m) * (x - m);
                return s / static_cast<double>(v.size());
            };
            out << std::left << std::setw(14) << name << std::right << std::setw(8)
                << time_sat.size() << std::setw(14) << std::fixed << std::setprecision(6)
                << mean(time_sat) << std::setw(16) << std::setprecision(2) << mean(conf_sat)
                << std::setw(8) << time_unsat.size() << std::setw(14) << std::setprecision(6)
                << mean(time_unsat) << std::setw(16) << std::setprecision(2) << mean(conf_unsat)
                << "\n";
            out.unsetf(std::ios::fixed);
            err << "config=" << name << " var_time_s_sat=" << variance(time_sat)
                << " var_conflicts_sat=" << variance(conf_sat)
                << " var_time_s_unsat=" << variance(time_unsat)
                << " var_conflicts_unsat=" << variance(conf_unsat) << "\n";
        }
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "bench: " << e.what() << "\n";
        return kExitError;
    } catch (const std::exception& e) {
        err << "bench: error: " << e.what() << "\n";
        return kExitError;
    }
}

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    if (args.empty()) {
        err << "usage: anfsat <gen|convert|mvc|solve|bench> [options]\n";
        return kExitError;
    }
    std::vector<std::string> rest(args.begin() + 1, args.end());
    const std::string& cmd = args[0];
    if (cmd == "gen") return cmd_gen(rest, out, err);
    if (cmd == "convert") return cmd_convert(rest, out, err);
    if (cmd == "mvc") return cmd_mvc(rest, out, err);
    if (cmd == "solve") return cmd_solve(rest, out, err);
    if (cmd == "bench") return cmd_bench(rest, out, err);
    err << "unknown command '" << cmd << "'\n";
    return kExitError;
}

} // namespace cli
} // namespace anfsat

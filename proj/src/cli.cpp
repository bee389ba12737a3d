#include "copesim/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"

#include "copesim/analysis.hpp"
#include "copesim/engine.hpp"

namespace copesim {

namespace {

struct Options {
    std::string topology = "cross";
    int n = 5;
    int x1 = 0; // 0 -> balanced split
    bool nc = false;
    int mpr = 1;
    bool cap2 = false;
    std::string mac = "node-fair";
    std::string traffic = "unicast";
    std::string p = "0.05:0.05:3";
    int iters = 1000;
    std::uint64_t seed = 0;
    int g = 100;
    int horizon = 0;
    std::string out_path;
    std::string trace_path;
    std::string plot_path;
    std::string loads_path;
};

Kind parse_kind(const std::string& s) { return s == "x" ? Kind::X : Kind::Cross; }

Traffic parse_traffic(const std::string& s) {
    return s == "broadcast" ? Traffic::Broadcast : Traffic::Unicast;
}

MacKind parse_mac(const std::string& s) {
    if (s == "flow-fair-literal")
        return MacKind::FlowFairLiteral;
    if (s == "flow-fair-generalized")
        return MacKind::FlowFairGeneralized;
    return MacKind::NodeFair;
}

SimConfig to_config(const Options& o) {
    SimConfig cfg;
    cfg.kind = parse_kind(o.topology);
    cfg.n = o.n;
    cfg.x1_size = o.x1 > 0 ? o.x1 : std::max(1, (o.n - 1) / 2);
    cfg.traffic = parse_traffic(o.traffic);
    cfg.nc = o.nc;
    cfg.mpr = MprConfig{o.mpr, o.cap2};
    cfg.mac = parse_mac(o.mac);
    cfg.g = o.g;
    cfg.horizon = o.horizon;
    cfg.iterations = o.iters;
    cfg.seed = o.seed;
    return cfg;
}

std::string config_id(const SimConfig& cfg) {
    std::ostringstream os;
    os << (cfg.kind == Kind::Cross ? "cross" : "x") << "|n=" << cfg.n
       << "|nc=" << (cfg.nc ? 1 : 0) << "|m=" << cfg.mpr.m
       << "|cap2=" << (cfg.mpr.broadcast_cap2 ? 1 : 0)
       << "|" << (cfg.traffic == Traffic::Unicast ? "unicast" : "broadcast") << "|"
       << (cfg.mac == MacKind::NodeFair
               ? "node-fair"
               : cfg.mac == MacKind::FlowFairLiteral ? "flow-fair-literal"
                                                     : "flow-fair-generalized")
       << "|g=" << cfg.g << "|h=" << (cfg.horizon > 0 ? cfg.horizon : cfg.g)
       << "|iters=" << cfg.iterations << "|seed=" << cfg.seed;
    return os.str();
}

std::string fixed6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

void add_common(CLI::App* cmd, Options& o, bool seed_required) {
    // Later occurrences win, so command-line flags override config-file values.
    cmd->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    cmd->add_option("--topology", o.topology, "component kind")
        ->check(CLI::IsMember({"cross", "x"}));
    cmd->add_option("--n", o.n, "node count (node n is the relay)")->check(CLI::Range(3, 16));
    cmd->add_option("--x1", o.x1, "size of the first X edge set");
    cmd->add_flag("--nc", o.nc, "enable inter-session coding at the relay");
    cmd->add_option("--mpr", o.mpr, "multi-packet reception order m")->check(CLI::Range(1, 16));
    cmd->add_flag("--cap2", o.cap2, "cap simultaneous transmitters at two");
    cmd->add_option("--mac", o.mac, "fairness policy")
        ->check(CLI::IsMember({"node-fair", "flow-fair-literal", "flow-fair-generalized"}));
    cmd->add_option("--traffic", o.traffic, "traffic type")
        ->check(CLI::IsMember({"unicast", "broadcast"}));
    cmd->add_option("--p", o.p, "offered load grid start:step:end");
    cmd->add_option("--iters", o.iters, "Monte Carlo iterations per grid point")
        ->check(CLI::PositiveNumber);
    auto* seed = cmd->add_option("--seed", o.seed, "master seed");
    if (seed_required)
        seed->required();
    cmd->add_option("--g", o.g, "load granularity (packets per unit load)")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--horizon", o.horizon, "measurement horizon in slots (default: g)");
    cmd->add_option("--out", o.out_path, "output CSV path");
    cmd->add_option("--trace", o.trace_path, "per-slot trace CSV path");
    cmd->add_option("--loads", o.loads_path, "per-iteration load vector CSV path");
    cmd->add_option("--plot-script", o.plot_path, "companion gnuplot script path");
    cmd->add_option("--config", "flat key=value config file; command line wins")
        ->expected(1)
        ->type_name("FILE");
}

std::string trimmed(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    std::size_t e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

bool truthy(const std::string& v) { return v == "1" || v == "true" || v == "yes" || v == "on"; }

// Expands a flat key=value file into argv tokens for the subcommand. File
// tokens are inserted ahead of the user's flags, so the command line wins.
// Unknown keys are an error, never silently dropped.
std::vector<std::string> config_file_args(const CLI::App* cmd, const std::string& path) {
    std::ifstream f(path);
    if (!f)
        throw std::invalid_argument("cannot read config file: " + path);
    std::vector<std::string> args;
    std::string line;
    int lineno = 0;
    while (std::getline(f, line)) {
        ++lineno;
        std::string body = trimmed(line.substr(0, line.find('#')));
        if (body.empty())
            continue;
        std::size_t eq = body.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument(path + ":" + std::to_string(lineno) +
                                        ": expected key=value");
        std::string key = trimmed(body.substr(0, eq));
        std::string value = trimmed(body.substr(eq + 1));
        if (key == "config")
            throw std::invalid_argument(path + ": config files cannot nest");
        const CLI::Option* op = cmd->get_option_no_throw("--" + key);
        if (op == nullptr)
            throw std::invalid_argument(path + ":" + std::to_string(lineno) +
                                        ": unknown key '" + key + "'");
        if (op->get_expected_min() == 0) { // flag
            if (truthy(value))
                args.push_back("--" + key);
            else if (value != "0" && value != "false" && value != "no" && value != "off")
                throw std::invalid_argument(path + ": flag '" + key + "' needs a boolean value");
        } else {
            args.push_back("--" + key);
            args.push_back(value);
        }
    }
    return args;
}

// Rebuilds argv with the config file contents spliced in right after the
// subcommand name.
std::vector<std::string> splice_config(const CLI::App& app, int argc, const char* const* argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    std::string config_path;
    std::size_t sub_pos = std::string::npos;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (sub_pos == std::string::npos && app.get_subcommand_no_throw(args[i]) != nullptr) {
            sub_pos = i;
            continue;
        }
        if (args[i] == "--config" && i + 1 < args.size())
            config_path = args[i + 1];
        else if (args[i].rfind("--config=", 0) == 0)
            config_path = args[i].substr(9);
    }
    if (config_path.empty() || sub_pos == std::string::npos)
        return args;
    const CLI::App* cmd = app.get_subcommand_no_throw(args[sub_pos]);
    std::vector<std::string> fromfile = config_file_args(cmd, config_path);
    args.insert(args.begin() + sub_pos + 1, fromfile.begin(), fromfile.end());
    return args;
}

void write_plot_script(const std::string& path, const std::string& csv,
                       const std::vector<std::string>& series, const std::string& xlabel,
                       const std::string& ylabel) {
    std::ofstream f(path);
    if (!f)
        throw std::runtime_error("cannot write plot script: " + path);
    f << "# gnuplot script, reads " << csv << "\n";
    f << "set datafile separator ','\n";
    f << "set xlabel '" << xlabel << "'\n";
    f << "set ylabel '" << ylabel << "'\n";
    f << "set key bottom right\n";
    if (series.empty()) {
        f << "plot '" << csv << "' every ::1 using 1:2 with linespoints title 'mean S'\n";
    } else {
        f << "plot \\\n";
        for (std::size_t i = 0; i < series.size(); ++i)
            f << "  '" << csv << "' every ::1 using 1:(strcol(4) eq '" << series[i]
              << "' ? column(2) : 1/0) with linespoints title '" << series[i] << "'"
              << (i + 1 < series.size() ? ", \\\n" : "\n");
    }
}

int cmd_sweep(const Options& o, std::ostream& out, std::ostream& err) {
    SimConfig cfg = to_config(o);
    std::vector<double> grid = parse_grid(o.p);
    if (o.out_path.empty()) {
        err << "sweep: --out is required\n";
        return 1;
    }

    std::ofstream trace;
    if (!o.trace_path.empty()) {
        trace.open(o.trace_path);
        if (!trace) {
            err << "sweep: cannot write " << o.trace_path << "\n";
            return 1;
        }
        trace << "slot,transmitters,frames,decoded,completed\n";
    }

    std::ofstream loads_csv;
    if (!o.loads_path.empty()) {
        loads_csv.open(o.loads_path);
        if (!loads_csv) {
            err << "sweep: cannot write " << o.loads_path << "\n";
            return 1;
        }
        loads_csv << "P,iteration";
        for (int i = 1; i <= cfg.n; ++i)
            loads_csv << ",k_" << i;
        loads_csv << '\n';
    }

    std::ofstream csv(o.out_path);
    if (!csv) {
        err << "sweep: cannot write " << o.out_path << "\n";
        return 1;
    }
    csv << "P,mean_S,std_S,config_id\n";
    const std::string id = config_id(cfg);
    const TopologyComponent topo = build_component(cfg.kind, cfg.n, cfg.x1_size);
    for (double p : grid) {
        auto [mean, sd] = monte_carlo(cfg, p);
        csv << fixed6(p) << ',' << fixed6(mean) << ',' << fixed6(sd) << ',' << id << '\n';
        const std::uint64_t lane = static_cast<std::uint64_t>(std::llround(p * 1e6));
        if (trace.is_open()) {
            // Trace the first iteration of each grid point.
            trace << "# P=" << fixed6(p) << '\n';
            Rng rng(Rng::derive(cfg.seed, lane, 0));
            LoadVector lv = draw_loads(p, cfg.n, cfg.g, rng);
            run(cfg, topo, lv, &trace);
        }
        if (loads_csv.is_open()) {
            for (int it = 0; it < cfg.iterations; ++it) {
                Rng rng(Rng::derive(cfg.seed, lane, static_cast<std::uint64_t>(it)));
                LoadVector lv = draw_loads(p, cfg.n, cfg.g, rng);
                loads_csv << fixed6(p) << ',' << it;
                for (int i = 1; i <= cfg.n; ++i)
                    loads_csv << ',' << lv.k[i];
                loads_csv << '\n';
            }
        }
    }
    if (!o.plot_path.empty())
        write_plot_script(o.plot_path, o.out_path, {}, "Total offered load P",
                          "Throughput S (packets/slot)");
    out << "sweep: wrote " << grid.size() << " points to " << o.out_path << "\n";
    return 0;
}

void maxima_row(std::ostream& os, Kind kind, bool nc, int m, bool cap2, Traffic traffic,
                const Options& o, bool with_shares) {
    os << (kind == Kind::Cross ? "cross" : "x") << ',' << (nc ? 1 : 0) << ',' << m << ','
       << (cap2 ? 1 : 0) << ',' << (traffic == Traffic::Unicast ? "unicast" : "broadcast");
    try {
        int x1 = o.x1 > 0 ? o.x1 : std::max(1, (o.n - 1) / 2);
        ThroughputPoint tp = max_throughput(kind, nc, m, traffic, cap2, o.n, x1);
        os << ',' << tp.p_star.to_string() << ',' << tp.s_max.to_string() << ','
           << tp.s_sat.to_string() << ',' << fixed6(tp.p_star.to_double()) << ','
           << fixed6(tp.s_max.to_double()) << ',' << fixed6(tp.s_sat.to_double());
        if (with_shares) {
            TopologyComponent topo = build_component(kind, o.n, x1);
            MprConfig mpr{m, cap2};
            ShareVector lit = flow_fair_shares(topo, nc, mpr, traffic, FlowFairFormula::Literal);
            ShareVector gen =
                flow_fair_shares(topo, nc, mpr, traffic, FlowFairFormula::Generalized);
            os << ',' << lit.s_edge.to_string() << ',' << lit.s_center.to_string() << ','
               << gen.s_edge.to_string() << ',' << gen.s_center.to_string();
        }
    } catch (const std::exception& e) {
        os << ",unsupported,unsupported,unsupported,,,";
        if (with_shares)
            os << ",,,,";
        os << " # " << e.what();
    }
    os << '\n';
}

int cmd_maxima(const Options& o, bool with_shares, bool kind_given, bool nc_given, bool m_given,
               bool traffic_given, bool cap2_given, std::ostream& out, std::ostream& err) {
    std::ostringstream body;
    body << "kind,nc,m,cap2,traffic,p_star,s_max,s_sat,p_star_dec,s_max_dec,s_sat_dec";
    if (with_shares)
        body << ",literal_s_j,literal_s_R,generalized_s_j,generalized_s_R";
    body << '\n';

    std::vector<Kind> kinds = kind_given ? std::vector<Kind>{parse_kind(o.topology)}
                                         : std::vector<Kind>{Kind::Cross, Kind::X};
    std::vector<bool> ncs = nc_given ? std::vector<bool>{o.nc} : std::vector<bool>{false, true};
    std::vector<int> ms = m_given ? std::vector<int>{o.mpr} : std::vector<int>{1, 2, 4};
    std::vector<Traffic> traffics = traffic_given
                                        ? std::vector<Traffic>{parse_traffic(o.traffic)}
                                        : std::vector<Traffic>{Traffic::Unicast,
                                                               Traffic::Broadcast};
    for (Kind kind : kinds)
        for (bool nc : ncs)
            for (int m : ms)
                for (Traffic traffic : traffics) {
                    std::vector<bool> caps;
                    if (cap2_given)
                        caps = {o.cap2};
                    else if (m >= 3)
                        caps = {false, true};
                    else
                        caps = {false};
                    for (bool cap2 : caps)
                        maxima_row(body, kind, nc, m, cap2, traffic, o, with_shares);
                }

    out << body.str();
    if (!o.out_path.empty()) {
        std::ofstream f(o.out_path);
        if (!f) {
            err << "maxima: cannot write " << o.out_path << "\n";
            return 1;
        }
        f << body.str();
    }
    return 0;
}

int run_series_sweep(const Options& base, const std::string& mac,
                     const std::vector<std::tuple<std::string, bool, int, bool>>& series,
                     std::ostream& out, std::ostream& err) {
    if (base.out_path.empty()) {
        err << "figure: --out is required\n";
        return 1;
    }
    std::ofstream csv(base.out_path);
    if (!csv) {
        err << "figure: cannot write " << base.out_path << "\n";
        return 1;
    }
    csv << "P,mean_S,std_S,series\n";
    std::vector<double> grid = parse_grid(base.p);
    std::vector<std::string> names;
    for (const auto& [name, nc, m, cap2] : series) {
        Options o = base;
        o.mac = mac;
        o.nc = nc;
        o.mpr = m;
        o.cap2 = cap2;
        SimConfig cfg = to_config(o);
        for (double p : grid) {
            auto [mean, sd] = monte_carlo(cfg, p);
            csv << fixed6(p) << ',' << fixed6(mean) << ',' << fixed6(sd) << ',' << name << '\n';
        }
        names.push_back(name);
    }
    if (!base.plot_path.empty())
        write_plot_script(base.plot_path, base.out_path, names, "Total offered load P",
                          "Throughput S (packets/slot)");
    out << "figure: wrote " << base.out_path << "\n";
    return 0;
}

int cmd_figure(const std::string& name, const Options& o, std::ostream& out, std::ostream& err) {
    const std::vector<std::tuple<std::string, bool, int, bool>> families = {
        {"routing", false, 1, false}, {"nc", true, 1, false},     {"mpr2", false, 2, false},
        {"mpr4", false, 4, false},    {"nc+mpr2", true, 2, false}, {"nc+mpr4", true, 4, false},
    };

    if (name == "cross-nodefair" || name == "x-nodefair" || name == "cross-flowfair" ||
        name == "x-flowfair") {
        Options base = o;
        base.topology = name[0] == 'x' ? "x" : "cross";
        std::string mac =
            name.find("flowfair") != std::string::npos ? "flow-fair-generalized" : "node-fair";
        return run_series_sweep(base, mac, families, out, err);
    }

    if (name == "gain-vs-m") {
        if (o.out_path.empty()) {
            err << "figure: --out is required\n";
            return 1;
        }
        std::ofstream csv(o.out_path);
        if (!csv) {
            err << "figure: cannot write " << o.out_path << "\n";
            return 1;
        }
        csv << "m,value,fraction,series\n";
        std::vector<std::string> names;
        for (Traffic traffic : {Traffic::Unicast, Traffic::Broadcast}) {
            std::string suffix = traffic == Traffic::Unicast ? " (unicast)" : " (broadcast)";
            for (int m : {1, 2, 4}) {
                GainDecomposition g = gain_decomposition(Kind::X, m, traffic, o.n,
                                                         o.x1 > 0 ? o.x1 : (o.n - 1) / 2);
                auto emit = [&](const std::string& series, const Rational& v) {
                    csv << m << ',' << fixed6(v.to_double()) << ',' << v.to_string() << ','
                        << series << suffix << '\n';
                    if (m == 1)
                        names.push_back(series + suffix);
                };
                emit("routing", g.routing);
                emit("nc-only", g.nc_only);
                emit("mpr-only", g.mpr_only);
                emit("nc+mpr", g.nc_plus_mpr);
                emit("nc-only+mpr-only", g.additive_prediction);
            }
        }
        if (!o.plot_path.empty())
            write_plot_script(o.plot_path, o.out_path, names, "MPR order m", "Max throughput S");
        out << "figure: wrote " << o.out_path << "\n";
        return 0;
    }

    err << "figure: unknown name '" << name
        << "' (expected cross-nodefair, x-nodefair, cross-flowfair, x-flowfair, gain-vs-m)\n";
    return 2;
}

} // namespace

std::vector<double> parse_grid(const std::string& spec) {
    double start = 0, step = 0, end = 0;
    char extra = 0;
    if (std::sscanf(spec.c_str(), "%lf:%lf:%lf%c", &start, &step, &end, &extra) != 3)
        throw std::invalid_argument("load grid must be start:step:end, got '" + spec + "'");
    if (start < 0 || end < start)
        throw std::invalid_argument("load grid must satisfy 0 <= start <= end");
    if (step <= 0) {
        if (start != end)
            throw std::invalid_argument("load grid with zero step needs start == end");
        return {start};
    }
    std::vector<double> grid;
    int count = static_cast<int>(std::floor((end - start) / step + 1e-9)) + 1;
    for (int i = 0; i < count; ++i)
        grid.push_back(std::round((start + i * step) * 1e9) / 1e9);
    return grid;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Slot-level simulator and exact analytic calculator for single-relay "
                 "wireless components with XOR coding, MPR, and MAC fairness policies"};
    app.require_subcommand(1);

    Options sweep_opts, maxima_opts, figure_opts;
    bool with_shares = false;
    std::string figure_name;

    CLI::App* sweep_cmd = app.add_subcommand("sweep", "Monte Carlo throughput vs offered load");
    add_common(sweep_cmd, sweep_opts, true);

    CLI::App* maxima_cmd =
        app.add_subcommand("maxima", "analytic operating points and slot shares");
    add_common(maxima_cmd, maxima_opts, false);
    maxima_cmd->add_flag("--shares", with_shares, "include flow-fair share columns");

    CLI::App* figure_cmd = app.add_subcommand("figure", "preset curve families");
    figure_cmd->add_option("name", figure_name, "preset name")->required();
    add_common(figure_cmd, figure_opts, true);

    try {
        std::vector<std::string> args = splice_config(app, argc, argv);
        std::reverse(args.begin(), args.end()); // CLI11 consumes from the back
        app.parse(std::move(args));
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return 0;
        }
        err << e.what() << "\n";
        return e.get_exit_code();
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }

    try {
        if (sweep_cmd->parsed())
            return cmd_sweep(sweep_opts, out, err);
        if (maxima_cmd->parsed())
            return cmd_maxima(maxima_opts, with_shares, maxima_cmd->count("--topology") > 0,
                              maxima_cmd->count("--nc") > 0, maxima_cmd->count("--mpr") > 0,
                              maxima_cmd->count("--traffic") > 0,
                              maxima_cmd->count("--cap2") > 0, out, err);
        if (figure_cmd->parsed())
            return cmd_figure(figure_name, figure_opts, out, err);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

} // namespace copesim

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "ntnsim/config.hpp"
#include "ntnsim/constants.hpp"
#include "ntnsim/geometry.hpp"
#include "ntnsim/harq.hpp"
#include "ntnsim/metrics.hpp"
#include "ntnsim/presets.hpp"
#include "ntnsim/simulation.hpp"
#include "ntnsim/sweep.hpp"

namespace {

constexpr int kExitConfigError = 1;
constexpr int kExitRuntimeError = 2;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ntnsim::ConfigError({{0, "cannot open config file '" + path + "'"}});
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write file '" + path + "'");
    out << content;
}

void apply_env_seed(ntnsim::ScenarioConfig& cfg) {
    if (const char* env = std::getenv("NTNSIM_SEED")) {
        cfg.sim.seed = std::strtoull(env, nullptr, 10);
    }
}

std::string scenario_name(const std::string& config_path) {
    auto base = config_path;
    if (const auto slash = base.find_last_of('/'); slash != std::string::npos)
        base = base.substr(slash + 1);
    if (const auto dot = base.find_last_of('.'); dot != std::string::npos && dot > 0)
        base = base.substr(0, dot);
    return base.empty() ? "run" : base;
}

// Worst-case RAN RTT for the calculator chains: both links at the given
// minimum elevation.
double calc_rtt_s(double altitude_km, bool transparent, double elevation_deg) {
    const double service = ntnsim::slant_range_km(altitude_km, elevation_deg);
    const double legs = transparent ? 2.0 : 1.0;
    return 2.0 * legs * ntnsim::propagation_delay_s(service);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"ntnsim: NTN full-stack link simulator and calculator"};
    app.require_subcommand(1);

    // --- run ---
    auto* run_cmd = app.add_subcommand("run", "run one scenario from a config file");
    std::string run_config;
    std::string run_out;
    std::uint64_t run_seed = 0;
    bool run_seed_set = false;
    run_cmd->add_option("--config", run_config, "scenario config file")->required();
    auto* seed_opt = run_cmd->add_option("--seed", run_seed, "override the config seed");
    run_cmd->add_option("--out", run_out, "write the CSV report here (default: stdout)");

    // --- sweep ---
    auto* sweep_cmd = app.add_subcommand("sweep", "Cartesian parameter sweep");
    std::string sweep_config;
    std::string sweep_out;
    std::vector<std::string> sweep_vary;
    int sweep_jobs = 1;
    sweep_cmd->add_option("--config", sweep_config, "base scenario config file")->required();
    sweep_cmd->add_option("--vary", sweep_vary, "key=v1,v2,... (repeatable)")->required();
    sweep_cmd->add_option("--jobs", sweep_jobs, "parallel workers (default 1)");
    sweep_cmd->add_option("--out", sweep_out, "write the merged CSV here (default: stdout)");

    // --- figure ---
    auto* fig_cmd = app.add_subcommand("figure", "reproduce a paper figure preset");
    std::string fig_id;
    std::string fig_dir = ".";
    int fig_jobs = 1;
    fig_cmd->add_option("id", fig_id, "fig2|fig3|fig4|fig5")->required();
    fig_cmd->add_option("--out", fig_dir, "output directory (default: .)");
    fig_cmd->add_option("--jobs", fig_jobs, "parallel workers (default 1)");

    // --- calc ---
    auto* calc_cmd = app.add_subcommand("calc", "orbital/link/protocol arithmetic");
    calc_cmd->require_subcommand(1);

    auto* c_delay = calc_cmd->add_subcommand("delay", "one-way propagation delay");
    double delay_distance = 0.0;
    c_delay->add_option("--distance", delay_distance, "path length in km")->required();

    auto* c_doppler = calc_cmd->add_subcommand("doppler", "carrier Doppler shift magnitude");
    double dop_alt = 600.0, dop_f_ghz = 2.0, dop_elev = 0.0;
    c_doppler->add_option("--altitude", dop_alt, "satellite altitude in km")->required();
    c_doppler->add_option("--f-ghz", dop_f_ghz, "carrier frequency in GHz")->required();
    c_doppler->add_option("--elevation", dop_elev, "elevation angle in deg (default 0: maximum)");

    auto* c_period = calc_cmd->add_subcommand("period", "orbital period");
    double per_alt = 600.0;
    c_period->add_option("--altitude", per_alt, "satellite altitude in km")->required();

    auto* c_vis = calc_cmd->add_subcommand("visibility", "single-pass visibility window");
    double vis_alt = 600.0, vis_min_elev = 10.0;
    c_vis->add_option("--altitude", vis_alt, "satellite altitude in km")->required();
    c_vis->add_option("--min-elevation", vis_min_elev, "minimum elevation in deg (default 10)");

    auto* c_fp = calc_cmd->add_subcommand("footprint", "beam footprint area");
    double fp_alt = 600.0, fp_half = 40.0;
    c_fp->add_option("--altitude", fp_alt, "satellite altitude in km")->required();
    c_fp->add_option("--half-angle", fp_half, "nadir half-angle in deg")->required();

    auto* c_gp = calc_cmd->add_subcommand("gp", "guard slots for the worst-case RTT");
    double gp_alt = 600.0, gp_elev = 10.0;
    int gp_mu = 0;
    std::string gp_payload = "transparent";
    c_gp->add_option("--altitude", gp_alt, "satellite altitude in km")->required();
    c_gp->add_option("--payload", gp_payload, "transparent|regenerative (default transparent)");
    c_gp->add_option("--numerology", gp_mu, "numerology mu (default 0)");
    c_gp->add_option("--min-elevation", gp_elev, "minimum elevation in deg (default 10)");

    auto* c_hn = calc_cmd->add_subcommand("harq-n", "HARQ processes to avoid stall");
    double hn_alt = 600.0, hn_elev = 10.0;
    int hn_mu = 0, hn_proc = 4;
    std::string hn_payload = "transparent";
    c_hn->add_option("--altitude", hn_alt, "satellite altitude in km")->required();
    c_hn->add_option("--payload", hn_payload, "transparent|regenerative (default transparent)");
    c_hn->add_option("--numerology", hn_mu, "numerology mu (default 0)");
    c_hn->add_option("--processing-slots", hn_proc, "decode turnaround in slots (default 4)");
    c_hn->add_option("--min-elevation", hn_elev, "minimum elevation in deg (default 10)");

    CLI11_PARSE(app, argc, argv);
    run_seed_set = seed_opt->count() > 0;

    try {
        if (*run_cmd) {
            auto cfg = ntnsim::parse_config(read_file(run_config));
            apply_env_seed(cfg);
            if (run_seed_set) cfg.sim.seed = run_seed;
            const auto report = ntnsim::run_scenario(cfg, scenario_name(run_config));
            const std::string csv = ntnsim::to_csv({report});
            if (run_out.empty()) std::cout << csv;
            else write_file(run_out, csv);
            return 0;
        }

        if (*sweep_cmd) {
            ntnsim::SweepSpec spec;
            spec.base = ntnsim::parse_config(read_file(sweep_config));
            apply_env_seed(spec.base);
            for (const auto& vary : sweep_vary) {
                const auto eq = vary.find('=');
                if (eq == std::string::npos || eq == 0)
                    throw ntnsim::ConfigError({{0, "--vary expects key=v1,v2,..., got '" +
                                                       vary + "'"}});
                std::vector<std::string> values;
                std::string rest = vary.substr(eq + 1);
                std::size_t pos = 0;
                while (pos != std::string::npos) {
                    const auto comma = rest.find(',', pos);
                    values.push_back(rest.substr(
                        pos, comma == std::string::npos ? std::string::npos : comma - pos));
                    pos = comma == std::string::npos ? std::string::npos : comma + 1;
                }
                spec.vary.emplace_back(vary.substr(0, eq), std::move(values));
            }
            const auto reports =
                ntnsim::run_sweep(spec, sweep_jobs, scenario_name(sweep_config));
            const std::string csv = ntnsim::to_csv(reports);
            if (sweep_out.empty()) std::cout << csv;
            else write_file(sweep_out, csv);
            return 0;
        }

        if (*fig_cmd) {
            const auto out = ntnsim::reproduce_figure(fig_id, fig_jobs);
            write_file(fig_dir + "/" + fig_id + ".csv", out.csv);
            write_file(fig_dir + "/" + fig_id + ".dat", out.dat);
            std::cout << "wrote " << fig_dir << "/" << fig_id << ".csv and " << fig_dir << "/"
                      << fig_id << ".dat\n";
            return 0;
        }

        if (*c_delay) {
            std::printf("%.6f ms\n", ntnsim::propagation_delay_s(delay_distance) * 1e3);
            return 0;
        }
        if (*c_doppler) {
            // Maximum radial rate for an overhead pass at the given
            // elevation, non-rotating Earth.
            const double r = ntnsim::constants::earth_radius_km + dop_alt;
            const double v = std::sqrt(ntnsim::constants::earth_mu_km3_s2 / r);
            const double e = ntnsim::constants::deg_to_rad(dop_elev);
            const double lambda =
                ntnsim::constants::pi / 2.0 - e -
                std::asin(ntnsim::constants::earth_radius_km * std::cos(e) / r);
            const double d = ntnsim::slant_range_km(dop_alt, dop_elev);
            const double radial_km_s =
                v * ntnsim::constants::earth_radius_km * std::sin(lambda) / d;
            const double shift_hz =
                radial_km_s / ntnsim::constants::light_speed_km_s * dop_f_ghz * 1e9;
            std::printf("%.3f kHz\n", shift_hz / 1e3);
            return 0;
        }
        if (*c_period) {
            std::printf("%.2f min\n", ntnsim::orbital_period_s(per_alt) / 60.0);
            return 0;
        }
        if (*c_vis) {
            std::printf("%.2f min\n", ntnsim::visibility_window_s(vis_alt, vis_min_elev) / 60.0);
            return 0;
        }
        if (*c_fp) {
            std::printf("%.0f km^2\n", ntnsim::footprint_area_km2(fp_alt, fp_half));
            return 0;
        }
        if (*c_gp) {
            const double rtt = calc_rtt_s(gp_alt, gp_payload == "transparent", gp_elev);
            std::printf("%d slots\n", ntnsim::gp_slots_required(rtt, ntnsim::Numerology(gp_mu)));
            return 0;
        }
        if (*c_hn) {
            const ntnsim::Numerology mu(hn_mu);
            const double rtt = calc_rtt_s(hn_alt, hn_payload == "transparent", hn_elev);
            const auto pred =
                ntnsim::predict_saturation(rtt, static_cast<double>(hn_proc) * mu.slot_s(), mu);
            std::printf("%d processes\n", pred.n_star);
            return 0;
        }
    } catch (const ntnsim::ConfigError& ex) {
        std::cerr << ex.what() << "\n";
        return kExitConfigError;
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return kExitRuntimeError;
    }
    return 0;
}

#include "cli_app.hpp"

#include <cmath>
#include <fstream>
#include <ostream>
#include <thread>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "agripv/error.hpp"
#include "svg_plot.hpp"

namespace agripv::cli {

namespace {

std::string fixed(double v, int digits = 6) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return fmt::format("{:.{}f}", v, digits);
}

std::string econ_header() { return "scheme,a_lm,M_L,crop_plan,p_prime,pb_prime,ppr,delta_fit_th_pct\n"; }

std::string econ_line(const std::string& scheme, double a_lm, const EconParams& p, const std::string& plan,
                      const EconResult& e) {
    return fmt::format("{},{},{},{},{},{},{},{}\n", scheme, a_lm, p.M_L, plan, fixed(e.p_prime), fixed(e.pb_prime),
                       fixed(e.ppr.value), fixed(e.delta_fit_th, 4));
}

// ---------------------------------------------------------------------------
// Verbs
// ---------------------------------------------------------------------------

OutputSet cmd_simulate(const Options& opt, Workspace& ws) {
    const auto& sc = ws.scenario();
    const auto curves = sc.curves();
    const auto keys = curves.keys();
    auto& design = ws.design();
    const auto s = design.series(sc.scheme);

    std::string csv = "month,y_pv,shading_ratio";
    for (const auto& k : keys) csv += ",y_crop_" + k;
    csv += '\n';
    PlotSpec plot{fmt::format("Monthly yield, {} at A_LM = {}", scheme_label(sc.scheme), design.layout().a_lm()),
                  "month", "relative yield", {{"Y_PV", {}, {}}, {"shading ratio", {}, {}}}};
    for (int m = 0; m < 12; ++m) {
        const auto& agg = s.monthly[static_cast<std::size_t>(m)];
        const double y = y_pv(s, MonthSet{m});
        const double sr = agg.unshaded_sum > 0.0 ? agg.ground_sum / agg.unshaded_sum : std::nan("");
        csv += fmt::format("{},{},{}", month_abbrev(m), fixed(y), fixed(sr));
        for (const auto& k : keys) csv += ',' + fixed(monthly_y_crop(curves.at(k), s, m));
        csv += '\n';
        plot.series[0].x.push_back(m + 1);
        plot.series[0].y.push_back(y);
        plot.series[1].x.push_back(m + 1);
        plot.series[1].y.push_back(sr);
    }
    const double par = seasonal_par_fraction(s, MonthSet::all());
    csv += fmt::format("annual,{},{}", fixed(y_pv(s, MonthSet::all())), fixed(par));
    for (const auto& k : keys) csv += ',' + fixed(y_crop(curves.at(k), par));
    csv += '\n';

    OutputSet files{{"yield_monthly.csv", csv}, {"yield_monthly.svg", render_svg(plot)}};
    if (opt.dump_timesteps) {
        std::string dump = "timestamp,rotation_deg,front_poa,rear_poa,shading_ratio\n";
        dump.reserve(s.av.size() * 64);
        for (std::size_t i = 0; i < s.av.size(); ++i) {
            const auto& t = s.av[i];
            dump += fmt::format("{},{},{},{},{}\n", format_iso8601(s.times[i]), fixed(t.rotation, 4),
                                fixed(t.front, 4), fixed(t.rear, 4),
                                t.unshaded > 0.0 ? fixed(t.ground / t.unshaded) : std::string{});
        }
        files.emplace("timesteps.csv", std::move(dump));
    }
    return files;
}

OutputSet cmd_feasibility(const Options&, Workspace& ws, std::ostream& log) {
    const auto& sc = ws.scenario();
    const auto curves = sc.curves();
    const auto report = feasible_st_window(ws);
    const auto& th = sc.thresholds;

    std::string csv = "n,y_pv_period,y_crop_period,energy_ok,crop_ok,feasible";
    for (int m = 0; m < 12; ++m) csv += fmt::format(",y_pv_{}", month_abbrev(m));
    for (int m = 0; m < 12; ++m) csv += fmt::format(",y_crop_{}", month_abbrev(m));
    csv += '\n';
    for (const auto& p : report.grid) {
        csv += fmt::format("{},{},{},{},{},{}", p.n, fixed(p.y_pv_period), fixed(p.y_crop_period), int{p.energy_ok},
                           int{p.crop_ok}, int{p.feasible()});
        for (double v : p.y_pv) csv += ',' + fixed(v);
        for (double v : p.y_crop) csv += ',' + fixed(v);
        csv += '\n';
    }

    const auto max_hours = max_st_hours_per_month(ws.design(), curves.at(sc.crop_response), th);
    std::string mcsv = "month,max_st_hours\n";
    for (int m = 0; m < 12; ++m)
        mcsv += fmt::format("{},{}\n", month_abbrev(m), fixed(max_hours[static_cast<std::size_t>(m)], 2));

    // Period aggregates against n for every crop class.
    PlotSpec plot{fmt::format("Feasibility over {} ({} enforcement)", th.period.to_string(), to_string(th.enforcement)),
                  "ST hours per day", "relative yield", {{"Y_PV", {}, {}}}};
    const auto keys = curves.keys();
    for (const auto& k : keys) plot.series.push_back({"Y_Crop " + k, {}, {}});
    for (const auto& p : report.grid) {
        const auto s = ws.design().series(TrackingScheme::customized(p.n));
        const double par = seasonal_par_fraction(s, th.period);
        plot.series[0].x.push_back(p.n);
        plot.series[0].y.push_back(p.y_pv_period);
        for (std::size_t k = 0; k < keys.size(); ++k) {
            plot.series[k + 1].x.push_back(p.n);
            plot.series[k + 1].y.push_back(y_crop(curves.at(keys[k]), par));
        }
    }

    if (report.empty())
        log << fmt::format("feasible ST window (class {}): empty\n", report.crop_class);
    else
        log << fmt::format("feasible ST window (class {}): {} h to {} h\n", report.crop_class, *report.lower(),
                           *report.upper());
    return {{"feasibility.csv", csv}, {"max_st_hours.csv", mcsv}, {"feasibility.svg", render_svg(plot)}};
}

OutputSet cmd_economics(const Options&, Workspace& ws) {
    const auto& sc = ws.scenario();
    auto& design = ws.design();
    const auto s = design.series(sc.scheme);
    const auto o = evaluate_design(s, sc.scheme.mode, design.layout().a_lm(), sc.plan(), sc.curves(), sc.econ);
    return {{"econ.csv", econ_header() + econ_line(scheme_label(sc.scheme), design.layout().a_lm(), sc.econ,
                                                   sc.crop_plan, o.econ)}};
}

OutputSet cmd_optimize(const Options&, Workspace& ws, std::ostream& log) {
    const auto& sc = ws.scenario();
    const auto result = optimize_ct(ws);
    auto& design = ws.design();
    const auto curves = sc.curves();
    const auto plan = sc.plan();

    std::string scan = "n,feasible,y_pv,y_crop,p_prime,pb_prime,ppr,delta_fit_th_pct\n";
    PlotSpec plot{"Threshold FIT premium against ST hours", "ST hours per day", "delta FIT threshold (%)",
                  {{fmt::format("{} at A_LM = {}", sc.crop_plan, design.layout().a_lm()), {}, {}}}};
    for (const auto& p : result.report.grid) {
        const auto s = design.series(TrackingScheme::customized(p.n));
        const auto o = evaluate_design(s, TrackingMode::CT, design.layout().a_lm(), plan, curves, sc.econ);
        scan += fmt::format("{},{},{},{},{},{},{},{}\n", p.n, int{p.feasible()}, fixed(o.y_pv),
                            fixed(o.crop.mean_y_crop()), fixed(o.econ.p_prime), fixed(o.econ.pb_prime),
                            fixed(o.econ.ppr.value), fixed(o.econ.delta_fit_th, 4));
        plot.series[0].x.push_back(p.n);
        plot.series[0].y.push_back(o.econ.delta_fit_th);
    }

    std::string summary;
    if (result.feasible) {
        const auto& e = result.outcome.econ;
        summary = fmt::format(
            "status,n_star,y_pv,y_crop,p_prime,pb_prime,ppr,delta_fit_th_pct,binding\n"
            "feasible,{},{},{},{},{},{},{},\n",
            result.n, fixed(result.outcome.y_pv), fixed(result.outcome.crop.mean_y_crop()), fixed(e.p_prime),
            fixed(e.pb_prime), fixed(e.ppr.value), fixed(e.delta_fit_th, 4));
        log << fmt::format("optimal CT: n* = {} h, ppr = {}\n", result.n, fixed(e.ppr.value, 4));
    } else {
        summary = fmt::format(
            "status,n_star,y_pv,y_crop,p_prime,pb_prime,ppr,delta_fit_th_pct,binding\n"
            "infeasible,,,,,,,,\"{}\"\n",
            result.binding);
        log << "no feasible CT design: " << result.binding << '\n';
    }
    return {{"optimize.csv", summary}, {"ct_scan.csv", scan}, {"ct_scan.svg", render_svg(plot)}};
}

OutputSet cmd_sweep(const Options& opt, Workspace& ws, std::ostream& log) {
    const auto rows = run_sweep(ws, {opt.threads});
    const auto failed = std::count_if(rows.begin(), rows.end(), [](const auto& r) { return !r.outcome; });
    log << fmt::format("sweep: {} cells, {} with errors\n", rows.size(), failed);
    return {{"sweep.csv", sweep_csv(rows)}};
}

OutputSet cmd_table2(const Options& opt, Workspace& base, std::ostream& log) {
    Scenario sc = base.scenario();
    sc.sweep = table2_spec();
    sc.sweep.max_cells = std::max(sc.sweep.max_cells, sc.sweep.cell_count());
    Workspace ws(sc, [&base](const SiteVariant&) { return *base.weather("base"); });
    const auto rows = run_sweep(ws, {opt.threads});
    log << fmt::format("table2: {} cells\n", rows.size());
    return {{"table2_long.csv", sweep_csv(rows)}, {"table2.csv", table2_wide_csv(rows)}};
}

int exit_code(ErrorCategory c) {
    switch (c) {
    case ErrorCategory::Config: return kExitConfig;
    case ErrorCategory::Data: return kExitData;
    case ErrorCategory::Compute: break;
    }
    return kExitCompute;
}

}  // namespace

OutputSet execute(const Options& options, Workspace& ws, std::ostream& log) {
    const auto& v = options.verb;
    if (v == "simulate") return cmd_simulate(options, ws);
    if (v == "feasibility") return cmd_feasibility(options, ws, log);
    if (v == "economics") return cmd_economics(options, ws);
    if (v == "optimize") return cmd_optimize(options, ws, log);
    if (v == "sweep") return cmd_sweep(options, ws, log);
    if (v == "table2") return cmd_table2(options, ws, log);
    throw SchemaError(fmt::format("unknown verb '{}'", v));
}

void write_outputs(const std::filesystem::path& dir, const OutputSet& files) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    std::vector<fs::path> temps, targets, backups;
    std::vector<bool> had_old;
    std::size_t published = 0;
    auto rollback = [&] {
        std::error_code ec;
        for (std::size_t i = 0; i < published; ++i) fs::remove(targets[i], ec);
        for (std::size_t i = 0; i < backups.size(); ++i)
            if (had_old[i]) fs::rename(backups[i], targets[i], ec);
        for (const auto& t : temps) fs::remove(t, ec);
    };
    try {
        for (const auto& [name, content] : files) {
            const fs::path target = dir / name;
            if (fs::exists(target) && !fs::is_regular_file(target))
                throw ParseError(fmt::format("cannot replace {}: not a regular file", target.string()));
            targets.push_back(target);
            const fs::path tmp = dir / ("." + name + ".tmp");
            temps.push_back(tmp);
            std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
            f.write(content.data(), static_cast<std::streamsize>(content.size()));
            f.close();
            if (!f) throw ParseError(fmt::format("cannot write {}", tmp.string()));
        }
        // Move previous versions aside so a failed publish can restore them.
        for (const auto& target : targets) {
            backups.push_back(target.parent_path() / ("." + target.filename().string() + ".bak"));
            had_old.push_back(fs::exists(target));
            if (had_old.back()) fs::rename(target, backups.back());
        }
        for (; published < targets.size(); ++published) fs::rename(temps[published], targets[published]);
        std::error_code ec;
        for (const auto& b : backups) fs::remove(b, ec);
    } catch (const fs::filesystem_error& e) {
        rollback();
        throw ParseError(e.what());
    } catch (...) {
        rollback();
        throw;
    }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Agrivoltaic customized-tracking design and economics"};
    Options opt;
    opt.threads = std::max(1u, std::thread::hardware_concurrency());
    app.add_option("verb", opt.verb, "simulate | feasibility | economics | optimize | sweep | table2")
        ->required()
        ->check(CLI::IsMember({"simulate", "feasibility", "economics", "optimize", "sweep", "table2"}));
    app.add_option("--scenario", opt.scenario, "scenario file (INI)")->required();
    app.add_option("--out", opt.out, "output directory");
    app.add_flag("--dump-timesteps", opt.dump_timesteps, "simulate: also write timesteps.csv");
    app.add_option("--threads", opt.threads, "worker threads for sweeps")->check(CLI::Range(1u, 256u));
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << e.what() << '\n';
        return kExitConfig;
    }

    try {
        Workspace ws(load_scenario(opt.scenario));
        ws.weather("base");  // surface weather problems before any work
        const auto files = execute(opt, ws, err);
        write_outputs(opt.out, files);
        for (const auto& [name, _] : files) out << (opt.out / name).string() << '\n';
        return kExitOk;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_code(e.category());
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitCompute;
    }
}

}  // namespace agripv::cli

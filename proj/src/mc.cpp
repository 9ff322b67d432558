#include "hypercsi/mc.hpp"

#include <omp.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "hypercsi/estimator.hpp"
#include "hypercsi/metrics.hpp"
#include "hypercsi/synth.hpp"

namespace hypercsi::mc {

namespace {

std::vector<std::string> split_values(const std::string& text) {
    std::vector<std::string> values;
    std::string current;
    for (char ch : text) {
        if (ch == ',') {
            values.push_back(current);
            current.clear();
        } else {
            current += ch;
        }
    }
    values.push_back(current);
    for (auto& v : values) {
        const auto begin = v.find_first_not_of(" \t");
        const auto end = v.find_last_not_of(" \t");
        v = begin == std::string::npos ? "" : v.substr(begin, end - begin + 1);
        if (v.empty()) throw InvalidParameter("empty value in sweep config list");
    }
    return values;
}

double parse_double(const std::string& v) {
    try {
        size_t used = 0;
        const double x = std::stod(v, &used);
        if (used == v.size()) return x;
    } catch (const std::exception&) {
    }
    throw InvalidParameter("malformed number '" + v + "' in sweep config");
}

int parse_int(const std::string& v) {
    try {
        size_t used = 0;
        const int x = std::stoi(v, &used);
        if (used == v.size()) return x;
    } catch (const InvalidParameter&) {
        throw;
    } catch (const std::exception&) {
    }
    throw InvalidParameter("malformed integer '" + v + "' in sweep config");
}

}  // namespace

SweepConfig parse_sweep_config(std::istream& in) {
    SweepConfig config;
    bool have_endmembers = false;
    bool have_pixels = false;

    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            if (line.find_first_not_of(" \t\r") != std::string::npos)
                throw InvalidParameter("sweep config line " + std::to_string(line_no) +
                                       " is not 'key = value'");
            continue;
        }
        std::string key = line.substr(0, eq);
        key.erase(0, key.find_first_not_of(" \t"));
        key.erase(key.find_last_not_of(" \t\r") + 1);
        const auto values = split_values(line.substr(eq + 1));

        if (key == "endmembers") {
            config.endmembers.clear();
            for (const auto& v : values) config.endmembers.push_back(parse_int(v));
            have_endmembers = true;
        } else if (key == "pixels") {
            config.pixels.clear();
            for (const auto& v : values) config.pixels.push_back(parse_int(v));
            have_pixels = true;
        } else if (key == "bands") {
            config.bands = parse_int(values.at(0));
        } else if (key == "purity") {
            config.purity.clear();
            for (const auto& v : values) config.purity.push_back(parse_double(v));
        } else if (key == "snr_db") {
            config.snr_db.clear();
            for (const auto& v : values) {
                if (v == "inf")
                    config.snr_db.push_back(std::nullopt);
                else
                    config.snr_db.push_back(parse_double(v));
            }
        } else if (key == "trials") {
            config.trials = parse_int(values.at(0));
        } else if (key == "master_seed") {
            try {
                config.master_seed = static_cast<uint64_t>(std::stoull(values.at(0)));
            } catch (const std::exception&) {
                throw InvalidParameter("malformed master_seed in sweep config");
            }
        } else if (key == "eta") {
            config.eta = parse_double(values.at(0));
        } else if (key == "no_shift") {
            const auto& v = values.at(0);
            if (v == "true" || v == "1")
                config.no_shift = true;
            else if (v == "false" || v == "0")
                config.no_shift = false;
            else
                throw InvalidParameter("no_shift must be true or false");
        } else if (key == "gamma") {
            config.gamma_scalar = values.at(0) == "uniform" ? 0.0 : parse_double(values.at(0));
        } else {
            throw InvalidParameter("unknown sweep config key '" + key + "'");
        }
    }

    if (!have_endmembers || config.endmembers.empty())
        throw InvalidParameter("sweep config must list endmembers");
    if (!have_pixels || config.pixels.empty())
        throw InvalidParameter("sweep config must list pixels");
    if (config.trials < 1) throw InvalidParameter("trials must be at least 1");
    return config;
}

SweepConfig parse_sweep_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open sweep config " + path.string());
    return parse_sweep_config(in);
}

SweepResult run_sweep(const SweepConfig& config, int threads) {
    struct Cell {
        int n = 0;
        int l = 0;
        double rho = 1.0;
        std::optional<double> snr;
    };
    std::vector<Cell> cells;
    for (int n : config.endmembers)
        for (int l : config.pixels)
            for (double rho : config.purity)
                for (const auto& snr : config.snr_db) cells.push_back({n, l, rho, snr});

    const int trials = config.trials;
    SweepResult result;
    result.rows.resize(cells.size() * static_cast<size_t>(trials));

    const auto total = static_cast<long>(result.rows.size());
    std::vector<std::string> trial_errors(result.rows.size());
#pragma omp parallel for schedule(dynamic) num_threads(threads)
    for (long job = 0; job < total; ++job) {
        const Cell& cell = cells[static_cast<size_t>(job) / trials];
        const int trial = static_cast<int>(job % trials);
        try {
            synth::SceneSpec spec;
            spec.n_bands = config.bands;
            spec.n_pixels = cell.l;
            spec.n_endmembers = cell.n;
            const double g = config.gamma_scalar > 0.0 ? config.gamma_scalar : 1.0 / cell.n;
            spec.dirichlet_gamma = VectorXd::Constant(cell.n, g);
            spec.purity_rho = cell.rho;
            spec.snr_db = cell.snr;
            spec.seed = config.master_seed + static_cast<uint64_t>(trial);

            const synth::GroundTruth truth = synth::generate_scene(spec);
            SpectralDataset data{truth.observed, cell.n};

            const auto start = std::chrono::steady_clock::now();
            const UnmixResult estimate =
                unmix(data, cell.n, {config.eta, config.no_shift, /*threads=*/1});
            const double seconds =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                    .count();

            ResultRow& row = result.rows[static_cast<size_t>(job)];
            row.n_endmembers = cell.n;
            row.n_pixels = cell.l;
            row.snr_db = cell.snr;
            row.purity_rho = cell.rho;
            row.eta = config.eta;
            row.trial_seed = spec.seed;
            row.phi_en_deg = metrics::phi_en(truth.spectra, estimate.endmembers.spectra);
            row.phi_ab_deg =
                metrics::phi_ab(truth.abundances.transpose(), estimate.abundances);
            row.wall_time_s = seconds;
        } catch (const std::exception& e) {
            // Exceptions must not escape the worker loop; surface them after.
            trial_errors[static_cast<size_t>(job)] = e.what();
        }
    }
    for (size_t job = 0; job < trial_errors.size(); ++job) {
        if (trial_errors[job].empty()) continue;
        const Cell& cell = cells[job / trials];
        throw Error("trial " + std::to_string(job % trials) + " of cell N=" +
                    std::to_string(cell.n) + " L=" + std::to_string(cell.l) +
                    " failed: " + trial_errors[job]);
    }

    for (size_t c = 0; c < cells.size(); ++c) {
        CellMean mean;
        mean.n_endmembers = cells[c].n;
        mean.n_pixels = cells[c].l;
        mean.snr_db = cells[c].snr;
        mean.purity_rho = cells[c].rho;
        mean.eta = config.eta;
        for (int t = 0; t < trials; ++t) {
            const ResultRow& row = result.rows[c * static_cast<size_t>(trials) + t];
            mean.phi_en_deg += row.phi_en_deg;
            mean.phi_ab_deg += row.phi_ab_deg;
            mean.wall_time_s += row.wall_time_s;
        }
        mean.phi_en_deg /= trials;
        mean.phi_ab_deg /= trials;
        mean.wall_time_s /= trials;
        result.means.push_back(mean);
    }
    return result;
}

void write_results_csv(std::ostream& out, const SweepResult& result) {
    char buffer[512];
    auto snr_text = [](const std::optional<double>& snr) {
        if (!snr) return std::string("inf");
        char tmp[64];
        std::snprintf(tmp, sizeof tmp, "%.10g", *snr);
        return std::string(tmp);
    };

    out << "n_endmembers,n_pixels,snr_db,purity_rho,eta,trial_seed,phi_en_deg,phi_ab_deg,"
           "wall_time_s\n";
    for (const auto& row : result.rows) {
        std::snprintf(buffer, sizeof buffer, "%d,%d,%s,%.10g,%.10g,%llu,%.10g,%.10g,%.6g\n",
                      row.n_endmembers, row.n_pixels, snr_text(row.snr_db).c_str(),
                      row.purity_rho, row.eta,
                      static_cast<unsigned long long>(row.trial_seed), row.phi_en_deg,
                      row.phi_ab_deg, row.wall_time_s);
        out << buffer;
    }
    for (const auto& mean : result.means) {
        std::snprintf(buffer, sizeof buffer, "%d,%d,%s,%.10g,%.10g,mean,%.10g,%.10g,%.6g\n",
                      mean.n_endmembers, mean.n_pixels, snr_text(mean.snr_db).c_str(),
                      mean.purity_rho, mean.eta, mean.phi_en_deg, mean.phi_ab_deg,
                      mean.wall_time_s);
        out << buffer;
    }
}

}  // namespace hypercsi::mc

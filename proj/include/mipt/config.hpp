#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "mipt/trajectory.hpp"

namespace mipt {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Parsed run configuration: a SimParams template plus sweep grids.
//
// File format: INI-style sections with key = value lines, '#' or ';' comments,
// list values separated by spaces or commas.
//
//   [simulation]  dt, t_max, t_burn, sample_interval, n_steady_samples,
//                 n_realizations, master_seed, record_tmi
//   [sweep]       L, lambda, xi_r, xi_s          (lists)
//   [output]      directory, checkpoint, threads
struct RunConfig {
    SimParams base;
    std::vector<int> L_list;
    std::vector<double> lambda_list;
    std::vector<double> xi_r_list{0.0};
    std::vector<double> xi_s_list{0.0};
    std::string output_dir = ".";
    bool checkpoint = true;
    int threads = 0;  // 0 = default_thread_count()

    // Throws ConfigError with "file:line: field: reason" diagnostics.
    static RunConfig from_file(const std::string& path);
    static RunConfig from_string(const std::string& text, const std::string& filename = "<config>");

    void validate() const;

    // Grid points in emission order: L (outer), xi_s, xi_r, lambda (inner).
    std::vector<SimParams> grid() const;

    // Canonical serialization of everything that affects the numbers
    // (grids, template params, seed; not threads or paths).
    std::string canonical() const;
    std::uint64_t hash() const;  // FNV-1a over canonical()
};

std::string default_config_help();

}  // namespace mipt

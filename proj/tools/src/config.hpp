#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>

#include <hillspec/hill_operator.hpp>

namespace hillspec::cli {

// Bad flags, unreadable or malformed config; maps to exit code 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
    std::string potential = "demo";
    std::string weight = "trivial";
    double s = 0.0;
    index_t K = 64;
    double tol = 1e-6;

    double m = 0.0;        // 0: use ||q||
    index_t n_from = 0;    // 0: n_s
    index_t n_to = 0;      // 0: n_from + 10

    double t = 0.0;
    double dt = 0.0;
    index_t K_pde = 64;

    std::string suite = "all";
    std::string gap_table;
    index_t airy_window = 3;
    index_t airy_points = 25;

    std::string out = ".";
    std::uint64_t seed = 1;

    // section.key -> value, every field, sorted
    std::map<std::string, std::string> canonical() const;
    // FNV-1a of the canonical form, 16 hex digits
    std::string hash() const;
};

// Flat "key = value" lines grouped by [section]; '#' and ';' start comments.
void load_config_file(const std::string& path, ExperimentConfig& cfg);
void load_config_text(const std::string& text, ExperimentConfig& cfg, const std::string& origin = "<config>");
// Sets one field from its section.key name.
void set_field(ExperimentConfig& cfg, const std::string& key, const std::string& value);

// zero | demo | single-mode:c=V | power-law:amp=A,expo=E,jmax=J[,cos=1]
// | inline:j=V,... | file:PATH; V may be complex as "a+bi".
Potential parse_potential(const std::string& spec, double s, const Weight& w, std::uint64_t seed);
// trivial | poly:a=A[,eps=E]
Weight parse_weight(const std::string& spec);
cplx parse_complex(const std::string& text);

}  // namespace hillspec::cli

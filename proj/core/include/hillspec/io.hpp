#pragma once

#include <string>

#include "hillspec/birkhoff.hpp"
#include "hillspec/kdv.hpp"
#include "hillspec/sequence_spaces.hpp"

namespace hillspec {

inline constexpr const char* kVersion = HILLSPEC_VERSION;

// {"coeffs": [[k, re, im], ...], "half_range", "one_periodic", "real", "zero_mean"}
std::string to_json(const FourierSeq& f, int indent = -1);
FourierSeq fourier_seq_from_json(const std::string& text);

// {"actions", "asymptotic": true, "frequencies", "modes": [[n, re, im], ...]}
std::string to_json(const BirkhoffState& z, int indent = -1);
BirkhoffState birkhoff_state_from_json(const std::string& text);

// {"K", "coeffs": [[k, re, im], ...], "t"}
std::string to_json(const PDEState& u, int indent = -1);
PDEState pde_state_from_json(const std::string& text);

}  // namespace hillspec

#pragma once

#include <stdexcept>
#include <string>

namespace dab {

/// Load model evaluated where it is undefined (constant-power load with Vc2 <= 0).
class singular_load_error : public std::runtime_error {
public:
    explicit singular_load_error(const std::string& what) : std::runtime_error(what) {}
};

/// Requested power exceeds what the converter can transfer.
class no_feasible_point_error : public std::runtime_error {
public:
    explicit no_feasible_point_error(const std::string& what) : std::runtime_error(what) {}
};

/// Iterative method exhausted its iteration cap without meeting tolerance.
class convergence_error : public std::runtime_error {
public:
    explicit convergence_error(const std::string& what) : std::runtime_error(what) {}
};

/// Integration produced a non-finite or out-of-bound state.
class blowup_error : public std::runtime_error {
public:
    explicit blowup_error(const std::string& what) : std::runtime_error(what) {}
};

/// Linear system (or polynomial) is singular/degenerate.
class singular_system_error : public std::runtime_error {
public:
    explicit singular_system_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace dab

#pragma once

#include <stdexcept>
#include <string>

namespace flocksim {

enum class Errc {
    singular_at_zero,
    non_integrable,
    bad_ordering,
    sign_mismatch,
    dimension_mismatch,
    empty_ensemble,
    nonpositive_weight,
    unsupported_descriptor,
    incompatible_potential,
    separation_underflow,
    step_size_underflow,
    order_violation,
    admissibility_violation,
    insufficient_data,
    nonpositive_value,
    inconclusive,
    state_exit,
    envelope_violation,
    config_parse,
    column_missing,
    bad_argument,
};

const char* errc_name(Errc code);

class Error : public std::runtime_error {
  public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    Errc code() const noexcept { return code_; }

  private:
    Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& what) { throw Error(code, what); }

}  // namespace flocksim

#pragma once

#include <cstdint>

namespace iqlambda {

// Work limits. Exceeding one raises ErrorKind::BudgetExceeded.
struct Budget {
    std::int64_t class_group_abs_disc = 16'000'000'000;
    std::int64_t lvalue_abs_disc = 20'000'000;
    int gen_bernoulli_max_n = 50;
    int bernoulli_max_index = 10'000;
    int generator_max_bits = 4096;   // bound on bits of 4p^s
    std::uint64_t rho_iterations = 1ull << 24;
    std::int64_t power_max_abs = std::int64_t{1} << 62;  // p^n in families
};

} // namespace iqlambda

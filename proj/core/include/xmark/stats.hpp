#pragma once

#include <cstdint>
#include <span>

namespace xmark {

double mean(std::span<const double> values);

// Population (biased, divide-by-N) standard deviation.
double population_stddev(std::span<const double> values);

// Standard error of the sample mean (unbiased sample variance / sqrt(n)).
double std_error_of_mean(std::span<const double> values);

// Empirical quantile with the ceiling convention: the ceil(q*n)-th smallest
// value, q in (0, 1]. q -> 0 gives the minimum, q = 1 the maximum.
double empirical_quantile(std::span<const double> values, double q);

// One-sided exact sign test: probability of at least `wins` successes out of
// wins + losses fair coin flips. Ties must already be excluded.
double sign_test_p_value(std::uint64_t wins, std::uint64_t losses);

}  // namespace xmark

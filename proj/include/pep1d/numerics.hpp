#pragma once

#include <cstddef>

namespace pep {

// Exponents beyond this are treated as e^{-z} = 0.
inline constexpr double kExpFlush = 700.0;

double exp_neg(double z);
double one_minus_exp_neg(double z);

// e^{-z} - 1 + z, accurate near zero.
double exp_neg_remainder(double z);

// 1 - z/(e^z - 1); tends to z/2 near zero and to 1 for large z.
double expm1_ratio(double z);

// z/(1 - e^{-z}) - 1.
double inverse_decay_excess(double z);

// 1/(e^z - 1), zero past the flush threshold.
double inv_expm1(double z);

class NeumaierSum {
public:
    void add(double v);
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

}  // namespace pep

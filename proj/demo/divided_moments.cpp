// Moments of dx/(1+x^2) on [0,1] by forward recurrence, and what a small
// error in one initial condition does to the Hankel determinants.

#include "momentlab/momentlab.hpp"

#include <iostream>

using namespace momentlab;

int main() {
    measures::MeasureSpec uniform = measures::Uniform{Scalar(0), Scalar(1)};
    Polynomial p({Scalar(1), Scalar(0), Scalar(1)});

    auto r = diffeq::divided_measure_moments(uniform, p, 12);
    std::cout << "b_0 = " << r.initial[0].to_display(20) << "\n"
              << "b_1 = " << r.initial[1].to_display(20) << "\n\n";
    std::cout << "order  det\n";
    for (std::size_t n = 0; n < r.report.dets.size(); ++n) {
        std::cout << "  " << n << "    " << r.report.dets[n].to_display(6) << "\n";
    }
    std::cout << "verdict: " << hankel::to_string(r.report.verdict) << "\n\n";

    auto rows = diffeq::sensitivity_sweep(uniform, p, 1, {Scalar::parse("0.01"), Scalar::parse("-0.01")}, 13, 6);
    for (const auto& row : rows) {
        std::cout << "b_1 += " << row.delta.to_display(3) << ": " << hankel::to_string(row.verdict);
        if (row.first_negative_index) std::cout << ", first negative determinant at order " << *row.first_negative_index;
        std::cout << "\n";
    }
}

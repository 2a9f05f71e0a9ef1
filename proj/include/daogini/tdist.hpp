#pragma once

namespace daogini {

// Regularized incomplete beta I_x(a, b), a,b > 0, x in [0,1].
// Continued-fraction evaluation (modified Lentz), relative accuracy around
// 1e-14 over the arguments this library uses.
double regularized_incomplete_beta(double a, double b, double x);

// Two-sided tail probability of Student's t with `df` degrees of freedom:
//   p = I_{df/(df+t^2)}(df/2, 1/2)
// p(0) = 1, monotone decreasing in |t|.
double student_t_two_sided_p(double t, double df);

}  // namespace daogini

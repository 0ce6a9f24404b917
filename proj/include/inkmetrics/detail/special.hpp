#pragma once

namespace ink::detail {

// Regularized incomplete beta I_x(a, b).
double reg_inc_beta(double a, double b, double x);

// Regularized lower incomplete gamma P(a, x) and its complement Q(a, x).
double reg_lower_gamma(double a, double x);
double reg_upper_gamma(double a, double x);

// Survival function of the standard normal.
double normal_sf(double z);

// Two-sided p-value for a Student-t statistic with dof degrees of freedom.
double student_t_two_sided_p(double t, double dof);

// Upper tail of the F distribution with (d1, d2) degrees of freedom.
double fisher_f_sf(double f, double d1, double d2);

// Upper tail of the chi-square distribution with k degrees of freedom.
double chi_square_sf(double x, double k);

}  // namespace ink::detail

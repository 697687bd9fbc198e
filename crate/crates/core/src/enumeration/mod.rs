//! Exact enumeration of two-type trees and the analytic bounds built on it.

mod bounds;
mod series;
mod trees;

pub use bounds::{
    census_within, centering, expected_cs_lower_reference, expected_rs_upper, laplace_sum_check,
    ln_b_s, ln_f_s, ln_factorial, predicted_l1, predicted_order, unicycle_bound, wheel_bound,
    wheel_constant, LaplaceCheck, LogValue, WheelBound, UNICYCLE_CONSTANT,
};
pub use series::{lambert_power_coefficients, tj_series_fixed_point, RationalSeries};
pub use trees::{
    b_s, b_s_for, brute_force_bs, enum_report, exp_inv_bounds, f_s, f_s_lower, EnumReport,
    TreeCensus,
};

//! Local analysis at places: branches, pointwise orders, valuations of the
//! two-Frobenius Wronskian, and the per-point inequalities they satisfy.

mod analysis;
mod branch;

pub use analysis::{
    check_point_bounds, correction_b, initial_precision, point_bound_report, point_orders, series_wronskian_valuation_check,
    valuation_t, with_precision, PointOrders, PointReport, SequenceData, SeriesWronskianReport,
};

pub use branch::{
    branch_at, branch_at_infinity, declared_branch, fmt_elem, subfield_degree, Branch, DeclaredPlace, InfinitePoint,
    LaurentWire,
};
pub(crate) use branch::gcd;

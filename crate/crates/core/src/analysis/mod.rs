//! Set statistics, exact counts and enumeration.

mod count;
mod enumerate;
mod stats;

pub use count::{
    count_derivations, count_distinct, count_distinct_with_budget, count_report, state_budget,
    CountReport, CountRow, DEFAULT_STATE_BUDGET, STATE_BUDGET_VAR,
};
pub use enumerate::{enumerate, Enumeration};
pub use stats::{
    class_stats, intersection_table, ClassStat, ClassStats, IntersectionEntry, IntersectionTable,
};

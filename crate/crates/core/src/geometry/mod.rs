//! Sections of line bundles on the projective line, evaluation on finite
//! subschemes, higher-order ampleness, and numerical criteria for curves.

pub mod ampleness;
pub mod curves;
pub mod schemes;
pub mod sections;

pub use ampleness::{very_ampleness_order, AmplenessReport, AmplenessTarget, Evidence, OrderCheck, Strategy};
pub use curves::{
    curve_chi_closed_form, curve_chi_rr, curve_nonvanishing_criterion, gonality_bound_report, effective_bound,
    effective_bound_report, CriterionVerdict, CurveCriterion, CurveNumerics,
};
pub use schemes::{evaluation_map, EvaluationMap, LinePoint, SchemeIdeal};
pub use sections::{koszul_of_sections, LineBundleOnP1, SectionModule};

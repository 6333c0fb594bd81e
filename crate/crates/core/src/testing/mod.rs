//! Property testing with an FS oracle.

mod lower_bound;
mod scenario;
mod tester;

pub use lower_bound::{
    collision_distinguisher, feature_histogram, histogram_tv, split_response, transcript_features,
    transcript_tv_estimate, CollisionOutcome, Family, TranscriptFeatures, TvEstimate,
    TV_DRAW_BUDGET,
};
pub use scenario::{
    sample_scenario, scenario_distinguisher, scenario_query_count, Scenario, ScenarioFunction,
};
pub use tester::{junta_test, tester_query_count, Decision, TesterVerdict};

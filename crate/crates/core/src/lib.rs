pub mod baseline;
pub mod cli;
pub mod fact_io;
pub mod genbench;
pub mod instances;
pub mod model;
pub mod optimizer;
pub mod oracle;
pub mod validation;

pub use model::{
    build_scenario, min_completion_time, Edge, NodeId, ObjectiveVector, Route, RouteElement,
    Scenario, ScenarioError, ScenarioParts, Solution, StopKind, Task, TaskId, Time, VehicleId,
};
pub use validation::{evaluate, validate, Conflict, ConflictClass, ValidationReport};

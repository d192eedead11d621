//! Size and structure measurements the metric rules compare against
//! thresholds.

mod functions;
mod objects;
mod prototype;

pub use functions::{
    assigned_name, callback_call, callback_sites, function_name, logical_loc, measure_functions, CallbackSite,
    FunctionMetrics,
};
pub use objects::{measure_objects, ObjectKind, ObjectMetrics};
pub use prototype::{collect_prototype_edges, ProtoEdge, ProtoKey, PrototypeGraph, UnitPrototypes, UnknownParent};

use jssec_syntax::{ScopeTable, SourceUnit, SyntaxTree};

/// Everything measured for one unit.
#[derive(Clone, Debug, Default)]
pub struct UnitMetrics {
    pub functions: Vec<FunctionMetrics>,
    pub objects: Vec<ObjectMetrics>,
    pub callbacks: Vec<CallbackSite>,
    /// Deepest callback level anywhere in the unit.
    pub callback_depth: u32,
    pub logical_loc: u32,
    pub global_count: u32,
    pub prototypes: UnitPrototypes,
}

pub fn measure_unit(unit: &SourceUnit, tree: &SyntaxTree, scopes: &ScopeTable) -> UnitMetrics {
    let callbacks = callback_sites(tree);
    UnitMetrics {
        functions: measure_functions(unit, tree, &callbacks),
        objects: measure_objects(unit, tree),
        callback_depth: callbacks.iter().map(|c| c.level).max().unwrap_or(0),
        callbacks,
        logical_loc: logical_loc(unit, &tree.tokens, tree.range(tree.root())),
        global_count: scopes.global_count() as u32,
        prototypes: collect_prototype_edges(unit, tree, scopes),
    }
}

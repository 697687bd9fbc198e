//! The component search, the two-type branching process, and the coupling
//! under which the second dominates the first.

mod branching;
mod coupling;
mod search;

pub use branching::{branching_process, branching_process_at, TreeNode, TwoTypeTree, DEFAULT_CAP};
pub use coupling::{coupled_run, coupled_run_capped, CoupledRun};
pub use search::{search_component, search_component_shuffled, Discovery, Kind, SearchTrace};

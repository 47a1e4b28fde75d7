//! Engine, strategies and analysis tools for the growing-graph burning game.
//!
//! Each turn Builder adds f(n) vertices (keeping the graph connected), fire
//! spreads one step from every burning vertex, and Arsonist ignites one more
//! vertex. The interesting quantity is the fraction of burning vertices as
//! the game goes on.

pub mod burning_number;
pub mod engine;
pub mod graph;
pub mod metrics;
pub mod schedule;
pub mod strategies;
pub mod tree_reduction;

pub use engine::{Arsonist, BurnState, Builder, BuilderMove, EngineError, Game, GameView, Role, TurnRecord};
pub use graph::{GraphError, GrowingGraph, Topology, VertexId};
pub use metrics::{DensitySeries, Summary};
pub use schedule::{GrowthSchedule, ScheduleDescriptor};

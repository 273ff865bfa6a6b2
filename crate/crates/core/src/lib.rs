//! Analysis of finite quantum event structures through their Greechie
//! diagrams: classification, states and group-valued measures, extremal
//! edge bounds, isomorph-free enumeration and explicit constructions.

pub mod audit;
pub mod bounds;
pub mod canon;
pub mod hypergraph;
pub mod linalg;
pub mod measures;
pub mod random;

pub use hypergraph::{
    parse_diagram, serialize_diagram, Classification, Condition, DiagramKind, Hypergraph,
    HypergraphError, Violation,
};
pub mod constructions;
pub mod enumerate;

//! Bytecode-level dependency usage analysis: class-file parsing, corpus
//! access, usage extraction, usage graphs, reuse metrics and the batch
//! pipeline.

pub mod classfile;
pub mod corpus;
pub mod graph;
pub mod metrics;
pub mod pipeline;
pub mod usage;

pub use classfile::{
    parse_class, parse_descriptor, scan_references, ClassFile, ClassFileError, MemberRef, Site,
    SymbolRef,
};
pub use corpus::{DeclaredDependency, Ga, Gav, Scope};
pub use graph::{build_graph, BipartiteUsageGraph};
pub use usage::{extract_api_surface, extract_usages, ApiSurface, UsageRecord};

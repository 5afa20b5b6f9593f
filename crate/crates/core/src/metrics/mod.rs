//! Dependency and type usage rates, extinction sequences, reuse cores and
//! the core-index, plus unused-dependency detection.

mod chord;
mod extinction;
mod rates;
mod unused;

use thiserror::Error;

use crate::corpus::{Ga, Gav};

pub use chord::{chord_grouping, ChordGroup, ChordGrouping, GroupStat};
pub use extinction::{
    core_index, core_n, extinction, hide_order, served_clients, CoreIndex, CoreResult,
    ExtinctionCurve, ExtinctionStep, Order, TIE_BREAK,
};
pub use rates::{dur, tur, tur_distribution, DurResult, TurRow};
pub use unused::{detect_unused, DependencyStatus, UnusedFinding, UnusedOptions};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MetricError {
    #[error("usage graph of {0} is empty")]
    EmptyGraph(Gav),
    #[error("percentage {0} outside 1..=100")]
    InvalidPercent(u32),
    #[error("no client declares {0}")]
    NoDeclaredClients(Ga),
    #[error("no client uses {0}")]
    NoObservedClients(Gav),
}

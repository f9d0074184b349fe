//! Automata for regular expressions and formulas.

pub mod aba;
pub mod alphabet;
pub mod breakpoint;
pub mod dnf;
pub mod dpa;
pub mod nba;
pub mod nfa;

pub use aba::{build_aba, build_parametric, Aba, AbaOptions, CpState, Region, RegionKind};
pub use alphabet::Alphabet;
pub use dpa::{determinize, Dpa};
pub use breakpoint::{counter_breakpoint, mh_to_nba, region_bounds};
pub use nba::{AcceptingLasso, Nba};
pub use nfa::{thompson, EpsPath, MarkedNfa};

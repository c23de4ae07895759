//! Exact toolkit for multiproduct monopoly screening over finite type
//! spaces: sufficient-condition checks, upgrade-pricing construction,
//! flow certificates built by quasi-concave ironing, and an exact LP oracle.

pub mod analysis;
pub mod duality;
pub mod fixtures;
pub mod format;
pub mod generate;
pub mod ironing;
pub mod lp;
pub mod model;
pub mod pricing;
pub mod rational;

pub use model::{Instance, Mechanism, Node, UpgradeMenu};
pub use rational::Rational;

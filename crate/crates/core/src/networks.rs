//! Benchmark networks shipped with the library.
//!
//! The discrete files are the standard BIF versions of the bnlearn
//! repository networks; the continuous ones are the bnlearn linear-Gaussian
//! networks converted to the node/arc descriptor format.

use crate::bn::{BnError, Network};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BundledNetwork {
    pub name: &'static str,
    pub discrete: bool,
    pub nodes: usize,
    pub arcs: usize,
    pub text: &'static str,
}

impl BundledNetwork {
    pub fn load(&self) -> Result<Network, BnError> {
        Network::parse(self.text)
    }
}

macro_rules! bundled {
    ($name:literal, $file:literal, $discrete:literal, $nodes:literal, $arcs:literal) => {
        BundledNetwork {
            name: $name,
            discrete: $discrete,
            nodes: $nodes,
            arcs: $arcs,
            text: include_str!(concat!("../networks/", $file)),
        }
    };
}

/// Every bundled network with its published node and arc counts.
pub const BUNDLED: &[BundledNetwork] = &[
    bundled!("cancer", "cancer.bif", true, 5, 4),
    bundled!("earthquake", "earthquake.bif", true, 5, 4),
    bundled!("survey", "survey.bif", true, 6, 6),
    bundled!("asia", "asia.bif", true, 8, 8),
    bundled!("sachs", "sachs.bif", true, 11, 17),
    bundled!("child", "child.bif", true, 20, 25),
    bundled!("insurance", "insurance.bif", true, 27, 52),
    bundled!("alarm", "alarm.bif", true, 37, 46),
    bundled!("magic-niab", "magic-niab.lgn", false, 44, 66),
];

/// Case-insensitive lookup by name.
pub fn bundled(name: &str) -> Option<&'static BundledNetwork> {
    BUNDLED.iter().find(|b| b.name.eq_ignore_ascii_case(name))
}

pub fn load_bundled(name: &str) -> Option<Result<Network, BnError>> {
    bundled(name).map(BundledNetwork::load)
}

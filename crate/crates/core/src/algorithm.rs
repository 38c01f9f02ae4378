//! The learner catalogue and its command-line names.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// Which kind of output a learner produces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    /// Whole-graph structure.
    Global,
    /// Parents and children of one target, oriented where possible.
    Local,
    /// Markov blanket of one target.
    Mb,
}

macro_rules! algorithms {
    ($($variant:ident => $name:literal, $family:ident;)*) => {
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
        pub enum Algorithm {
            $($variant,)*
        }

        impl Algorithm {
            pub const ALL: &'static [Algorithm] = &[$(Algorithm::$variant,)*];

            pub fn name(self) -> &'static str {
                match self {
                    $(Algorithm::$variant => $name,)*
                }
            }

            pub fn family(self) -> Family {
                match self {
                    $(Algorithm::$variant => Family::$family,)*
                }
            }
        }
    };
}

algorithms! {
    Pc => "PC", Global;
    Ges => "GES", Global;
    Gsbn => "GSBN", Global;
    Mmhc => "MMHC", Global;
    PcStable => "PC-stable", Global;
    F2slC => "F2SL-c", Global;
    F2slS => "F2SL-s", Global;
    PcdByPcd => "PCD-by-PCD", Local;
    MbByMb => "MB-by-MB", Local;
    Cmb => "CMB", Local;
    LcsFs => "LCS-FS", Local;
    Gs => "GS", Mb;
    Iamb => "IAMB", Mb;
    InterIamb => "interIAMB", Mb;
    IambNPc => "IAMBnPC", Mb;
    InterIambNPc => "interIAMBnPC", Mb;
    FastIamb => "Fast-IAMB", Mb;
    Fbed => "FBED", Mb;
    Mmmb => "MMMB", Mb;
    HitonMb => "HITON-MB", Mb;
    Pcmb => "PCMB", Mb;
    Ipcmb => "IPCMB", Mb;
    Mbor => "MBOR", Mb;
    Stmb => "STMB", Mb;
    Bamb => "BAMB", Mb;
    Eemb => "EEMB", Mb;
}

impl Algorithm {
    pub fn of_family(family: Family) -> impl Iterator<Item = Algorithm> {
        Algorithm::ALL
            .iter()
            .copied()
            .filter(move |a| a.family() == family)
    }

    /// Whether the learner needs a score and therefore a dataset.
    pub fn uses_score(self) -> bool {
        matches!(self, Algorithm::Ges | Algorithm::Mmhc | Algorithm::F2slS)
    }

    pub fn needs_target(self) -> bool {
        self.family() != Family::Global
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    /// Case-insensitive match against the canonical names.
    fn from_str(s: &str) -> Result<Self, Error> {
        Algorithm::ALL
            .iter()
            .copied()
            .find(|a| a.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::UnknownAlgorithm(s.to_string()))
    }
}
